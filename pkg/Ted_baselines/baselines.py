"""
基线算法
贪心最大覆盖（ALL_g / FSG_g）、流式交换变体（ALL_t / FSG_t）、
精确最优解（暴力枚举）以及按支持度排序的 top-k 频繁模式
"""

import heapq
import math
import sys
import time
from concurrent.futures import Executor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Optional

# 添加父目录到路径
sys.path.append(str(Path(__file__).parent.parent))

from config import Algorithms, MiningConfig
from exceptions import CapacityError, ResourceLimitError
from Ted_dfs.dfs_enum import Pattern, PatternEnumerator, frequency_filter
from Ted_engine.ted_miner import MiningMetrics, MiningResult, TedMiner, ted
from Ted_graph.graph_model import GraphDatabase
from utils import Deadline, Logger, make_executor

logger = Logger.setup_logger("Baselines")


@dataclass
class CandidatePool:
    """物化的候选模式集合（全部子图或频繁子图）"""
    patterns: List[Pattern] = field(default_factory=list)
    kind: str = "all"
    minsup: Optional[Fraction] = None

    def __len__(self) -> int:
        return len(self.patterns)

    @classmethod
    def build(cls, db: GraphDatabase, cfg: MiningConfig, frequent: bool = False,
              executor: Optional[Executor] = None, deadline: Optional[Deadline] = None) -> "CandidatePool":
        """
        枚举并物化候选池

        参数:
            db: 图数据库
            cfg: 挖掘参数（emax、minsup、pool_guard、embedding_guard）
            frequent: 是否只保留支持度 >= cfg.minsup 的模式
            executor: 可选线程池
            deadline: 运行时间上限

        返回:
            CandidatePool
        """
        deadline = deadline or Deadline(cfg.time_limit)
        enumerator = PatternEnumerator(db, cfg.emax, guard=cfg.embedding_guard, executor=executor, logger=logger)
        if frequent:
            keep = frequency_filter(db, cfg.minsup)
            stream = enumerator.iterate(admit=lambda parent, child: keep(child), root_filter=keep)
        else:
            stream = enumerator.iterate()

        patterns = []
        for p in stream:
            deadline.check()
            patterns.append(p)
            if len(patterns) > cfg.pool_guard:
                raise ResourceLimitError(f"候选池超过上限 pool_guard={cfg.pool_guard}")
        kind = "frequent" if frequent else "all"
        logger.debug(f"候选池 [{kind}]: {len(patterns)} 个模式")
        return cls(patterns, kind, cfg.minsup if frequent else None)


def max_cover(pool: CandidatePool, k: int) -> List[Pattern]:
    """
    贪心最大覆盖：每轮选边际覆盖最大的模式（并列取较小编码），边际为 0 时提前停止

    参数:
        pool: 候选池
        k: 选取数量

    返回:
        选中的模式，按选取顺序
    """
    if k < 1:
        raise ValueError(f"k 必须 >= 1，当前为 {k}")
    # 延迟评估：堆中的边际覆盖是上界
    heap = [(-p.coverage, p.code.sort_key(), idx) for idx, p in enumerate(pool.patterns)]
    heapq.heapify(heap)
    covered = set()
    selected: List[Pattern] = []
    while heap and len(selected) < k:
        _, key, idx = heapq.heappop(heap)
        p = pool.patterns[idx]
        fresh = (-len(p.cov.as_frozenset() - covered), key, idx)
        if heap and fresh > heap[0]:
            heapq.heappush(heap, fresh)
            continue
        if fresh[0] == 0:
            break
        selected.append(p)
        covered |= p.cov.as_frozenset()
    return selected


def _greedy(db: GraphDatabase, cfg: MiningConfig, algorithm: str, frequent: bool,
            executor: Optional[Executor], deadline: Optional[Deadline]) -> MiningResult:
    started = time.perf_counter()
    pool = CandidatePool.build(db, cfg, frequent=frequent, executor=executor, deadline=deadline)
    selected = max_cover(pool, cfg.k)
    metrics = MiningMetrics(elapsed_seconds=time.perf_counter() - started, patterns_enumerated=len(pool))
    return MiningResult.from_patterns(algorithm, selected, db, metrics)


def all_g(db: GraphDatabase, cfg: MiningConfig, executor: Optional[Executor] = None,
          deadline: Optional[Deadline] = None) -> MiningResult:
    """先枚举全部子图，再贪心选取"""
    return _greedy(db, cfg, Algorithms.ALL_G, False, executor, deadline)


def fsg_g(db: GraphDatabase, cfg: MiningConfig, executor: Optional[Executor] = None,
          deadline: Optional[Deadline] = None) -> MiningResult:
    """先枚举频繁子图，再贪心选取"""
    return _greedy(db, cfg, Algorithms.FSG_G, True, executor, deadline)


def all_t(db: GraphDatabase, cfg: MiningConfig, executor: Optional[Executor] = None,
          deadline: Optional[Deadline] = None) -> MiningResult:
    """全部子图按枚举顺序流过交换式维护（无 PRM、无 IPS）"""
    return TedMiner(db, cfg, algorithm=Algorithms.ALL_T, executor=executor, deadline=deadline).mine()


def fsg_t(db: GraphDatabase, cfg: MiningConfig, executor: Optional[Executor] = None,
          deadline: Optional[Deadline] = None) -> MiningResult:
    """频繁子图按枚举顺序流过交换式维护"""
    return TedMiner(db, cfg, algorithm=Algorithms.FSG_T, candidate_filter=frequency_filter(db, cfg.minsup),
                    executor=executor, deadline=deadline).mine()


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def brute_force_optimal(db: GraphDatabase, cfg: MiningConfig, executor: Optional[Executor] = None,
                        deadline: Optional[Deadline] = None) -> MiningResult:
    """
    精确最优：枚举候选池中所有大小不超过 k 的子集，取覆盖最大者

    并列时取模式更少者，再取编码序列字典序最小者

    参数:
        db: 图数据库
        cfg: 挖掘参数（opt_candidate_cap、opt_subset_cap）

    返回:
        MiningResult
    """
    started = time.perf_counter()
    deadline = deadline or Deadline(cfg.time_limit)
    pool = CandidatePool.build(db, cfg, executor=executor, deadline=deadline)
    n = len(pool)
    size = min(cfg.k, n)
    subsets = math.comb(n, size)
    if n > cfg.opt_candidate_cap or subsets > cfg.opt_subset_cap:
        raise CapacityError(
            f"精确求解规模过大: 候选 {n} 个（上限 opt_candidate_cap={cfg.opt_candidate_cap}），"
            f"C({n},{size})={subsets} 个子集（上限 {cfg.opt_subset_cap}）"
        )

    candidates = sorted(pool.patterns, key=lambda p: p.code.sort_key())
    bits: Dict[object, int] = {}
    masks = []
    for p in candidates:
        mask = 0
        for ref in p.cov:
            mask |= 1 << bits.setdefault(ref, len(bits))
        masks.append(mask)
    everything = len(bits)

    best_cov, best_subset = 0, ()
    for r in range(1, size + 1):
        for subset in combinations(range(n), r):
            mask = 0
            for idx in subset:
                mask |= masks[idx]
            cov = _popcount(mask)
            if cov > best_cov:
                best_cov, best_subset = cov, subset
        deadline.check()
        if best_cov == everything:
            break

    metrics = MiningMetrics(elapsed_seconds=time.perf_counter() - started, patterns_enumerated=n)
    return MiningResult.from_patterns(Algorithms.OPT, [candidates[i] for i in best_subset], db, metrics)


def top_k_frequent(db: GraphDatabase, cfg: MiningConfig, executor: Optional[Executor] = None,
                   deadline: Optional[Deadline] = None) -> MiningResult:
    """
    支持度最高的 k 个模式（并列时边数多者优先，再取较小编码）

    参数:
        db: 图数据库
        cfg: 挖掘参数

    返回:
        MiningResult
    """
    started = time.perf_counter()
    pool = CandidatePool.build(db, cfg, executor=executor, deadline=deadline)
    ranked = sorted(pool.patterns, key=lambda p: (-p.support_count, -p.num_edges, p.code.sort_key()))
    metrics = MiningMetrics(elapsed_seconds=time.perf_counter() - started, patterns_enumerated=len(pool))
    return MiningResult.from_patterns(Algorithms.FS, ranked[:cfg.k], db, metrics)


_BASELINES = {
    Algorithms.ALL_G: all_g,
    Algorithms.FSG_G: fsg_g,
    Algorithms.ALL_T: all_t,
    Algorithms.FSG_T: fsg_t,
    Algorithms.OPT: brute_force_optimal,
    Algorithms.FS: top_k_frequent,
}


def run_algorithm(db: GraphDatabase, cfg: MiningConfig, audit: bool = False) -> MiningResult:
    """
    按 cfg.algorithm 运行任一算法（统一线程池与时间上限）

    参数:
        db: 图数据库
        cfg: 挖掘参数
        audit: 交换变体是否记录 PRM 判定

    返回:
        MiningResult
    """
    cfg.validate()
    deadline = Deadline(cfg.time_limit)
    executor = make_executor(cfg.threads)
    try:
        if cfg.algorithm in Algorithms.SWAPPING:
            return ted(db, cfg, executor=executor, deadline=deadline, audit=audit)
        return _BASELINES[cfg.algorithm](db, cfg, executor=executor, deadline=deadline)
    finally:
        if executor is not None:
            executor.shutdown(wait=True)
