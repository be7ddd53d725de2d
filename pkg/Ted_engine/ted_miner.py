"""
TED挖掘引擎
基于交换的流式 top-k 边多样化模式挖掘：基本算法、PRM 剪枝、IPS 初始化及其组合
"""

import sys
from concurrent.futures import Executor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, List, NamedTuple, Optional

# 添加父目录到路径
sys.path.append(str(Path(__file__).parent.parent))

from config import Algorithms, MiningConfig
from exceptions import ResourceLimitError, TimeLimitExceeded
from Ted_dfs.dfs_enum import DfsCode, Pattern, PatternEnumerator
from Ted_graph.graph_model import GraphDatabase
from Ted_index.pes_index import PesIndex, swap_decision, swap_threshold
from utils import Deadline, Logger

# 各交换变体使用的优化：(PRM, IPS)
SWAP_VARIANTS = {
    Algorithms.BASE: (False, False),
    Algorithms.PRM: (True, False),
    Algorithms.IPS: (False, True),
    Algorithms.TED: (True, True),
}


@dataclass
class MiningMetrics:
    """运行统计"""
    elapsed_seconds: float = 0.0
    patterns_enumerated: int = 0
    swaps: int = 0
    prm_pruned: int = 0
    index_size_bytes: int = 0
    index_seconds: float = 0.0


@dataclass
class MiningResult:
    """挖掘结果：模式列表、总覆盖和运行统计"""
    algorithm: str
    patterns: List[Pattern]
    total_coverage: int
    total_edges: int
    metrics: MiningMetrics = field(default_factory=MiningMetrics)
    complete: bool = True

    @property
    def coverage_rate(self) -> Fraction:
        if self.total_edges == 0:
            return Fraction(0)
        return Fraction(self.total_coverage, self.total_edges)

    def codes(self) -> List[DfsCode]:
        return [p.code for p in self.patterns]

    @classmethod
    def from_patterns(cls, algorithm: str, patterns: Iterable[Pattern], db: GraphDatabase,
                      metrics: Optional[MiningMetrics] = None, complete: bool = True) -> "MiningResult":
        """由模式列表直接计算总覆盖（基线算法使用）"""
        patterns = list(patterns)
        covered = set()
        for p in patterns:
            covered |= p.cov.as_frozenset()
        return cls(algorithm, patterns, len(covered), db.total_edges, metrics or MiningMetrics(), complete)


class PrmDecision(NamedTuple):
    """一次 PRM 判定的记录"""
    parent: DfsCode
    child: DfsCode
    rule: int
    left: int
    threshold: Fraction
    admitted: bool


class TedMiner:
    """交换式挖掘器：流式枚举 + PES-Index 维护，可选 PRM 与 IPS"""

    def __init__(self, db: GraphDatabase, cfg: MiningConfig, use_prm: bool = False, use_ips: bool = False,
                 candidate_filter: Optional[Callable[[Pattern], bool]] = None, algorithm: Optional[str] = None,
                 audit: bool = False, executor: Optional[Executor] = None, deadline: Optional[Deadline] = None,
                 logger=None):
        """
        初始化挖掘器

        参数:
            db: 图数据库
            cfg: 挖掘参数
            use_prm: 是否启用 PRM 剪枝
            use_ips: 是否用 IPS 初始化模式集合
            candidate_filter: 可选的候选过滤（FSG_t 的频繁性条件，按反单调性剪枝子树）
            algorithm: 结果中记录的算法名
            audit: 是否记录每次 PRM 判定
            executor: 可选线程池
            deadline: 运行时间上限
            logger: 日志记录器
        """
        self.db = db
        self.cfg = cfg.validate()
        self.use_prm = use_prm
        self.use_ips = use_ips
        self.candidate_filter = candidate_filter
        self.algorithm = algorithm or cfg.algorithm
        self.audit = audit
        self.audit_log: List[PrmDecision] = []
        self.executor = executor
        self.deadline = deadline or Deadline(cfg.time_limit)
        self.logger = logger or Logger.setup_logger("TedMiner")

        self.index = PesIndex(cfg.k, logger=self.logger)
        self.metrics = MiningMetrics()
        self._enumerator: Optional[PatternEnumerator] = None

    def _new_enumerator(self) -> PatternEnumerator:
        return PatternEnumerator(self.db, self.cfg.emax, guard=self.cfg.embedding_guard,
                                 executor=self.executor, logger=self.logger)

    def pattern_maintain(self, g: Pattern) -> bool:
        """
        用候选 g 维护模式集合

        参数:
            g: 规范模式

        返回:
            是否插入或交换了 g
        """
        index = self.index
        if g in index:
            return False
        if not index.is_full:
            index.insert(g)
            if index.is_full:
                self.logger.debug(f"模式集合已填满，总覆盖 {index.total_coverage}")
            return True

        score_l, p_t = index.min_loss()
        score_b = index.benefit(g.cov)
        if not swap_decision(score_b, score_l, self.cfg.alpha, index.total_coverage, self.cfg.k):
            return False
        index.swap(p_t, g)
        self.metrics.swaps += 1
        self.logger.debug(f"SCORE_B={score_b} SCORE_L={score_l}: {p_t.code!r} -> {g.code!r}")
        return True

    def prm_admit(self, g: Pattern, child: Pattern) -> bool:
        """
        PRM 判定：child 的子树是否可能产生满足交换判据的候选

        参数:
            g: 父模式
            child: g 的最右扩展

        返回:
            是否保留 child
        """
        index = self.index
        if not index.is_full:
            return True

        score_l, _ = index.min_loss()
        threshold = swap_threshold(score_l, self.cfg.alpha, index.total_coverage, self.cfg.k)
        left = sum(self.db[i].num_edges - index.covered_in_graph(i) for i in g.containing_ids)
        if g in index:
            rule = 1
        else:
            rule = 2
            # 父模式覆盖、子模式不再覆盖的边不计入
            left -= sum(1 for ref in g.cov.difference(child.cov) if not index.is_covered(ref))

        admitted = left >= threshold
        if not admitted:
            self.metrics.prm_pruned += 1
        if self.audit:
            self.audit_log.append(PrmDecision(g.code, child.code, rule, left, threshold, admitted))
        return admitted

    def _admit(self, parent: Pattern, child: Pattern) -> bool:
        if self.candidate_filter is not None and not self.candidate_filter(child):
            return False
        if self.use_prm:
            return self.prm_admit(parent, child)
        return True

    def ips_initial(self) -> List[Pattern]:
        """
        IPS：从每个单边模式出发，沿覆盖最大的子模式爬升，直到覆盖不再严格增加或达到 E_max

        返回:
            覆盖最大的至多 k 个模式（并列时取较小编码）
        """
        enumerator = self._new_enumerator()
        roots = enumerator.one_edge_patterns()
        if self.candidate_filter is not None:
            roots = [r for r in roots if self.candidate_filter(r)]

        grown = {}
        for root in roots:
            current = root
            while current.num_edges < self.cfg.emax:
                self.deadline.check(lambda: self._result(complete=False))
                children = enumerator.rightmost_extend(current)
                if self.candidate_filter is not None:
                    children = [c for c in children if self.candidate_filter(c)]
                if not children:
                    break
                best = min(children, key=lambda c: (-c.coverage, c.code.sort_key()))
                if best.coverage <= current.coverage:
                    break
                current = best
            grown.setdefault(current.code, current)

        ranked = sorted(grown.values(), key=lambda p: (-p.coverage, p.code.sort_key()))
        self.logger.debug(f"IPS: {len(roots)} 个起点，得到 {len(grown)} 个不同模式")
        return ranked[:self.cfg.k]

    def _result(self, complete: bool = True) -> MiningResult:
        index = self.index
        metrics = self.metrics
        metrics.elapsed_seconds = self.deadline.elapsed()
        if self._enumerator is not None:
            metrics.patterns_enumerated = self._enumerator.stats.enumerated
        metrics.index_size_bytes = index.size_bytes()
        metrics.index_seconds = index.maintenance_seconds
        return MiningResult(self.algorithm, index.patterns, index.total_coverage, self.db.total_edges,
                            metrics, complete)

    def mine(self) -> MiningResult:
        """
        执行挖掘

        返回:
            MiningResult
        """
        self.logger.info(f"开始挖掘 [{self.algorithm}]: {len(self.db)} 个图，{self.db.total_edges} 条边，"
                         f"k={self.cfg.k}，E_max={self.cfg.emax}，α={self.cfg.alpha}")
        try:
            if self.use_ips:
                for p in self.ips_initial():
                    self.index.insert(p)
                self.logger.info(f"IPS 初始模式 {len(self.index)} 个，总覆盖 {self.index.total_coverage}")

            self._enumerator = self._new_enumerator()
            use_admit = self.use_prm or self.candidate_filter is not None
            stream = self._enumerator.iterate(admit=self._admit if use_admit else None,
                                              root_filter=self.candidate_filter)
            for g in stream:
                self.deadline.check(lambda: self._result(complete=False))
                self.pattern_maintain(g)
        except ResourceLimitError as e:
            self.logger.error(f"资源保护触发: {e}")
            raise
        except TimeLimitExceeded:
            self.logger.warning(f"超过时间上限，已枚举 {self.metrics.patterns_enumerated} 个模式")
            raise

        result = self._result()
        self.logger.info(f"挖掘完成 [{self.algorithm}]: 总覆盖 {result.total_coverage}/{result.total_edges}，"
                         f"枚举 {result.metrics.patterns_enumerated}，交换 {result.metrics.swaps}，"
                         f"PRM 剪枝 {result.metrics.prm_pruned}")
        return result


def ted_base(db: GraphDatabase, cfg: MiningConfig, **kwargs) -> MiningResult:
    """基本算法：空集合开始，流式枚举全部子图并维护模式集合"""
    return TedMiner(db, cfg, algorithm=Algorithms.BASE, **kwargs).mine()


def ted(db: GraphDatabase, cfg: MiningConfig, **kwargs) -> MiningResult:
    """
    按 cfg.algorithm 选择优化组合（base / prm / ips / ted）执行交换式挖掘

    参数:
        db: 图数据库
        cfg: 挖掘参数；非交换变体的算法名按完整 TED 处理

    返回:
        MiningResult
    """
    algorithm = cfg.algorithm if cfg.algorithm in SWAP_VARIANTS else Algorithms.TED
    use_prm, use_ips = SWAP_VARIANTS[algorithm]
    return TedMiner(db, cfg, use_prm=use_prm, use_ips=use_ips, algorithm=algorithm, **kwargs).mine()
