"""
PES-Index
维护 k 个常驻模式的覆盖统计：总覆盖、私有覆盖、边的反向覆盖集合、
按私有覆盖计数的反向计数单元，以及最小私有覆盖模式
"""

import sys
import time
from collections import defaultdict
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

# 添加父目录到路径
sys.path.append(str(Path(__file__).parent.parent))

from config import parse_fraction
from exceptions import (AbsentPatternError, ConfigError, DuplicatePatternError, EmptyIndexError,
                        IndexCapacityError)
from Ted_dfs.dfs_enum import DfsCode, Pattern
from Ted_embedding.subgraph_matcher import CoverSet
from Ted_graph.graph_model import EdgeRef
from utils import Logger


def _varint(value: int) -> bytes:
    """无符号 LEB128 编码"""
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


class PesIndex:
    """模式集合 P 的覆盖索引（单写者）"""

    def __init__(self, k: int, logger=None):
        """
        初始化空索引

        参数:
            k: 模式集合容量
            logger: 日志记录器
        """
        if k < 1:
            raise ConfigError(f"k 必须 >= 1，当前为 {k}")
        self.k = k
        self.logger = logger or Logger.setup_logger("PesIndex")

        self._patterns: Dict[DfsCode, Pattern] = {}
        self._order: Dict[DfsCode, int] = {}
        self._next_order = 0

        self.total_coverage = 0
        self.private_cov: Dict[DfsCode, int] = {}
        self.rcov: Dict[EdgeRef, Set[DfsCode]] = {}
        self.rcnt: Dict[int, Set[DfsCode]] = {}
        self._graph_covered: Dict[int, int] = defaultdict(int)

        self.maintenance_seconds = 0.0

    @classmethod
    def rebuild(cls, k: int, patterns: Iterable[Pattern], logger=None) -> "PesIndex":
        """从零开始按给定顺序插入模式（一致性检查的参照）"""
        index = cls(k, logger=logger)
        for p in patterns:
            index.insert(p)
        return index

    # ---- 查询 ----

    def __len__(self) -> int:
        return len(self._patterns)

    def __contains__(self, item: Union[Pattern, DfsCode]) -> bool:
        code = item.code if isinstance(item, Pattern) else item
        return code in self._patterns

    @property
    def patterns(self) -> List[Pattern]:
        """常驻模式，按插入顺序"""
        return list(self._patterns.values())

    @property
    def is_full(self) -> bool:
        return len(self._patterns) >= self.k

    @property
    def p_min(self) -> Optional[DfsCode]:
        """私有覆盖最小的模式；并列时取最早插入者，再取较小编码"""
        if not self.rcnt:
            return None
        cell = self.rcnt[min(self.rcnt)]
        return min(cell, key=lambda code: (self._order[code], code.sort_key()))

    def min_loss(self) -> Tuple[int, Pattern]:
        """
        返回 (SCORE_L, p_t)：最小私有覆盖及对应模式

        返回:
            (损失分数, 模式)
        """
        code = self.p_min
        if code is None:
            raise EmptyIndexError("模式集合为空，无法计算损失分数")
        return self.private_cov[code], self._patterns[code]

    def benefit(self, cov: CoverSet) -> int:
        """cov 中尚未被 P 覆盖的边数（只读）"""
        rcov = self.rcov
        return sum(1 for ref in cov if ref not in rcov)

    def is_covered(self, ref: EdgeRef) -> bool:
        return ref in self.rcov

    def covered_in_graph(self, graph_id: int) -> int:
        """图 graph_id 中已被 P 覆盖的边数"""
        return self._graph_covered.get(graph_id, 0)

    def covered(self) -> CoverSet:
        return CoverSet(self.rcov.keys())

    # ---- 维护 ----

    def _move(self, code: DfsCode, delta: int):
        """私有覆盖变化 delta，并在 rCnt 单元之间迁移"""
        old = self.private_cov[code]
        cell = self.rcnt[old]
        cell.discard(code)
        if not cell:
            del self.rcnt[old]
        self.private_cov[code] = old + delta
        self.rcnt.setdefault(old + delta, set()).add(code)

    def insert(self, p: Pattern):
        """
        将 p 加入 P 并更新各组件

        参数:
            p: 新模式（不能与常驻模式同构）
        """
        started = time.perf_counter()
        code = p.code
        if code in self._patterns:
            raise DuplicatePatternError(f"模式 {code!r} 已在模式集合中")
        if len(self._patterns) >= self.k:
            raise IndexCapacityError(f"模式集合已满 ({self.k} 个)")

        private = 0
        for ref in p.cov:
            owners = self.rcov.get(ref)
            if owners is None:
                self.rcov[ref] = {code}
                self.total_coverage += 1
                self._graph_covered[ref.graph_id] += 1
                private += 1
                continue
            if len(owners) == 1:
                (other,) = owners
                self._move(other, -1)
            owners.add(code)

        self._patterns[code] = p
        self._order[code] = self._next_order
        self._next_order += 1
        self.private_cov[code] = private
        self.rcnt.setdefault(private, set()).add(code)
        self.maintenance_seconds += time.perf_counter() - started

    def delete(self, p: Union[Pattern, DfsCode]):
        """
        从 P 中移除模式（insert 的逆操作）

        参数:
            p: 常驻模式或其编码
        """
        started = time.perf_counter()
        code = p.code if isinstance(p, Pattern) else p
        resident = self._patterns.get(code)
        if resident is None:
            raise AbsentPatternError(f"模式 {code!r} 不在模式集合中")

        for ref in resident.cov:
            owners = self.rcov[ref]
            owners.discard(code)
            if not owners:
                del self.rcov[ref]
                self.total_coverage -= 1
                self._graph_covered[ref.graph_id] -= 1
                if not self._graph_covered[ref.graph_id]:
                    del self._graph_covered[ref.graph_id]
            elif len(owners) == 1:
                (sole,) = owners
                self._move(sole, +1)

        private = self.private_cov.pop(code)
        cell = self.rcnt[private]
        cell.discard(code)
        if not cell:
            del self.rcnt[private]
        del self._patterns[code]
        del self._order[code]
        self.maintenance_seconds += time.perf_counter() - started

    def swap(self, out: Union[Pattern, DfsCode], in_: Pattern):
        """先删除 out 再插入 in_；前置条件在修改前全部检查"""
        out_code = out.code if isinstance(out, Pattern) else out
        if out_code not in self._patterns:
            raise AbsentPatternError(f"模式 {out_code!r} 不在模式集合中")
        if in_.code in self._patterns:
            raise DuplicatePatternError(f"模式 {in_.code!r} 已在模式集合中")
        self.delete(out_code)
        self.insert(in_)
        self.logger.debug(f"交换: 移出 {out_code!r}，加入 {in_.code!r}，总覆盖 {self.total_coverage}")

    # ---- 导出 ----

    def snapshot(self) -> dict:
        """五个组件的纯数据形式（用于与重建结果比较）"""
        return {
            "total_coverage": self.total_coverage,
            "private_cov": dict(self.private_cov),
            "rcov": {ref: frozenset(owners) for ref, owners in self.rcov.items()},
            "rcnt": {count: frozenset(cell) for count, cell in self.rcnt.items()},
            "p_min": self.p_min,
        }

    def serialize(self) -> bytes:
        """
        紧凑二进制形式：模式槽位与私有覆盖，然后按图输出已覆盖边的位图和每条边的拥有者掩码

        返回:
            字节串（其长度即报告中的索引大小）
        """
        slots = {code: slot for slot, code in enumerate(self._patterns)}
        mask_bytes = max(1, (self.k + 7) // 8)
        out = bytearray(_varint(self.k))
        out += _varint(len(slots))
        for code, slot in slots.items():
            out += _varint(self.private_cov[code])

        by_graph: Dict[int, List[EdgeRef]] = defaultdict(list)
        for ref in self.rcov:
            by_graph[ref.graph_id].append(ref)
        previous = 0
        for gid in sorted(by_graph):
            refs = sorted(by_graph[gid])
            width = refs[-1].edge_id + 1
            bitmap = 0
            for ref in refs:
                bitmap |= 1 << ref.edge_id
            out += _varint(gid - previous)
            out += _varint(width)
            out += bitmap.to_bytes((width + 7) // 8, "little")
            for ref in refs:
                mask = 0
                for code in self.rcov[ref]:
                    mask |= 1 << slots[code]
                out += mask.to_bytes(mask_bytes, "little")
            previous = gid
        return bytes(out)

    def size_bytes(self) -> int:
        return len(self.serialize())


def swap_threshold(score_l: int, alpha: Union[Fraction, str], total_coverage: int, k: int) -> Fraction:
    """交换判据右侧 (1+α)·SCORE_L + (1−α)·|Cov(P,D)|/k 的精确值"""
    alpha = parse_fraction(alpha, "alpha")
    if not 0 <= alpha <= 1:
        raise ConfigError(f"alpha 必须位于 [0, 1]，当前为 {alpha}")
    if k < 1:
        raise ConfigError(f"k 必须 >= 1，当前为 {k}")
    return (1 + alpha) * score_l + (1 - alpha) * Fraction(total_coverage, k)


def swap_decision(score_b: int, score_l: int, alpha: Union[Fraction, str], total_coverage: int, k: int) -> bool:
    """
    交换判据：SCORE_B 严格大于阈值时接受

    参数:
        score_b: 候选模式的收益分数
        score_l: 最小损失分数
        alpha: α ∈ [0,1]（1、0 和中间值分别对应 Swap₁、Swap₂、Swap_α）
        total_coverage: 当前总覆盖
        k: 模式集合容量

    返回:
        是否交换
    """
    return score_b > swap_threshold(score_l, alpha, total_coverage, k)


def _union(patterns: Iterable[Pattern]) -> Set[EdgeRef]:
    covered: Set[EdgeRef] = set()
    for p in patterns:
        covered |= p.cov.as_frozenset()
    return covered


def loss_score_naive(patterns: Sequence[Pattern], p: Pattern) -> int:
    """按定义计算：移除 p 后总覆盖的减少量"""
    if not any(q.code == p.code for q in patterns):
        raise AbsentPatternError(f"模式 {p.code!r} 不在模式集合中")
    others = [q for q in patterns if q.code != p.code]
    return len(_union(patterns) - _union(others))


def benefit_score_naive(patterns: Sequence[Pattern], g: Pattern) -> int:
    """按定义计算：加入 g 后总覆盖的增加量"""
    if any(q.code == g.code for q in patterns):
        raise DuplicatePatternError(f"模式 {g.code!r} 已在模式集合中")
    return len(g.cov.as_frozenset() - _union(patterns))
