"""
DFS编码与模式枚举
最小DFS编码（规范形式）、最右扩展，以及全部子图/频繁子图的深度优先枚举
"""

import sys
from concurrent.futures import Executor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

# 添加父目录到路径
sys.path.append(str(Path(__file__).parent.parent))

from config import MiningDefaults
from Ted_embedding.subgraph_matcher import CoverSet, contains, cover_set_db, iter_embeddings
from Ted_graph.graph_model import Graph, GraphDatabase, edge_key
from utils import Logger, ordered_map


class DfsEdge(NamedTuple):
    """DFS编码中的一条边 (i, j, l(i), l(e), l(j))；i < j 为前向边，否则为后向边"""
    i: int
    j: int
    li: str
    le: str
    lj: str

    @property
    def is_forward(self) -> bool:
        return self.i < self.j

    def sort_key(self) -> tuple:
        """gSpan 边序：前向边按 (j, -i)，后向边排在指向同一顶点的前向边之后"""
        if self.i < self.j:
            return (self.j, 1, -self.i, self.li, self.le, self.lj)
        return (self.i, 2, self.j, self.li, self.le, self.lj)


class DfsCode(tuple):
    """DFS编码：DfsEdge 组成的元组，比较采用 gSpan 字典序"""

    def __new__(cls, edges=()):
        return super().__new__(cls, (DfsEdge(*e) for e in edges))

    def sort_key(self) -> tuple:
        return tuple(e.sort_key() for e in self)

    def __lt__(self, other):
        return self.sort_key() < DfsCode(other).sort_key()

    def __le__(self, other):
        return self.sort_key() <= DfsCode(other).sort_key()

    def __gt__(self, other):
        return self.sort_key() > DfsCode(other).sort_key()

    def __ge__(self, other):
        return self.sort_key() >= DfsCode(other).sort_key()

    __hash__ = tuple.__hash__

    def __repr__(self) -> str:
        return "[" + ",".join(f"({e.i},{e.j},{e.li},{e.le},{e.lj})" for e in self) + "]"

    @property
    def num_edges(self) -> int:
        return len(self)

    @property
    def num_vertices(self) -> int:
        return 1 + max(max(e.i, e.j) for e in self) if self else 0

    def extend(self, edge: DfsEdge) -> "DfsCode":
        return DfsCode(tuple(self) + (edge,))

    def rightmost_path(self) -> List[int]:
        """最右路径上的顶点，从最右顶点到根"""
        if not self:
            return []
        current = self.num_vertices - 1
        path = [current]
        for e in reversed(self):
            if e.is_forward and e.j == current:
                current = e.i
                path.append(current)
        return path

    def edge_pairs(self) -> Set[Tuple[int, int]]:
        return {edge_key(e.i, e.j) for e in self}

    def to_graph(self, graph_id: int = 0) -> Graph:
        """按编码重建图：顶点 i 即发现序 i，边顺序即编码顺序"""
        labels: List[Optional[str]] = [None] * self.num_vertices
        edges = []
        for e in self:
            labels[e.i] = e.li
            labels[e.j] = e.lj
            edges.append((e.i, e.j, e.le))
        return Graph(graph_id, labels, edges)


def _canonical_search(g: Graph, target: Optional[DfsCode] = None) -> Optional[DfsCode]:
    """
    逐边构造最小DFS编码；每一步保留所有实现当前最小前缀的投影

    参数:
        g: 连通图
        target: 若给出，则在最小前缀偏离 target 时立即返回 None

    返回:
        最小DFS编码，或（给出 target 且其非最小时）None
    """
    if g.num_edges == 0:
        raise ValueError("最小DFS编码要求图至少有一条边")
    vl = g.vertices
    lookup = g.edge_lookup

    best: Optional[DfsEdge] = None
    projections: Dict[Tuple[int, ...], frozenset] = {}
    for eid, (u, v, le) in enumerate(g.edges):
        for a, b in ((u, v), (v, u)):
            cand = DfsEdge(0, 1, vl[a], le, vl[b])
            if best is None or cand.sort_key() < best.sort_key():
                best, projections = cand, {}
            if cand == best:
                projections[(a, b)] = frozenset((eid,))
    code = DfsCode((best,))
    if target is not None and target[0] != best:
        return None

    while len(code) < g.num_edges:
        rmpath = code.rightmost_path()
        rm, nv = rmpath[0], code.num_vertices
        best, best_key, grown = None, None, {}
        for mapping, used in projections.items():
            image = set(mapping)
            options = []
            x = mapping[rm]
            for j in rmpath[1:]:
                hit = lookup.get(edge_key(x, mapping[j]))
                if hit is not None and hit[0] not in used:
                    options.append((DfsEdge(rm, j, vl[x], hit[1], vl[mapping[j]]), None, hit[0]))
            for i in rmpath:
                x = mapping[i]
                for nb in g.adjacency[x]:
                    if nb.vertex not in image:
                        options.append((DfsEdge(i, nv, vl[x], nb.label, vl[nb.vertex]), nb.vertex, nb.edge_id))
            for cand, new_vertex, eid in options:
                key = cand.sort_key()
                if best_key is None or key < best_key:
                    best, best_key, grown = cand, key, {}
                if key == best_key:
                    new_mapping = mapping + (new_vertex,) if new_vertex is not None else mapping
                    grown[new_mapping] = used | {eid}
        if target is not None and target[len(code)] != best:
            return None
        code = code.extend(best)
        projections = grown
    return code


def min_dfs_code(g: Graph) -> DfsCode:
    """返回 g 的最小DFS编码（同构的图编码相同）"""
    return _canonical_search(g)


def is_canonical(code: DfsCode) -> bool:
    """编码是否等于其所表示图的最小DFS编码"""
    return _canonical_search(code.to_graph(), target=code) is not None


@dataclass(eq=False)
class Pattern:
    """模式：规范DFS编码、物化的图、数据库覆盖集和包含它的图编号"""
    code: DfsCode
    graph: Graph
    cov: CoverSet
    containing_ids: Tuple[int, ...] = field(default_factory=tuple)

    @property
    def support_count(self) -> int:
        return len(self.containing_ids)

    @property
    def num_edges(self) -> int:
        return self.graph.num_edges

    @property
    def coverage(self) -> int:
        return len(self.cov)

    def __eq__(self, other) -> bool:
        return isinstance(other, Pattern) and self.code == other.code

    def __hash__(self) -> int:
        return hash(self.code)

    def __repr__(self) -> str:
        return f"Pattern({self.code!r}, cov={self.coverage}, support={self.support_count})"


def materialize_pattern(graph: Graph, db: GraphDatabase, executor: Optional[Executor] = None,
                        guard: Optional[int] = MiningDefaults.EMBEDDING_GUARD) -> Pattern:
    """将任意连通图规范化为 Pattern，并在整个数据库上计算覆盖集"""
    code = min_dfs_code(graph)
    canonical_graph = code.to_graph()
    cov = cover_set_db(canonical_graph, db, executor=executor, guard=guard)
    return Pattern(code, canonical_graph, cov, tuple(cov.graph_ids()))


@dataclass
class EnumerationStats:
    enumerated: int = 0
    extended: int = 0
    pruned: int = 0


AdmitFn = Callable[[Pattern, Pattern], bool]


class PatternEnumerator:
    """基于数据库嵌入的最右扩展枚举器（显式栈，深度优先先序）"""

    def __init__(self, db: GraphDatabase, emax: int, guard: Optional[int] = MiningDefaults.EMBEDDING_GUARD,
                 executor: Optional[Executor] = None, logger=None):
        """
        初始化枚举器

        参数:
            db: 图数据库
            emax: 模式最大边数
            guard: 每个(模式, 图)对的嵌入上限
            executor: 可选线程池，用于并行计算子模式的覆盖集
            logger: 日志记录器
        """
        if emax < 1:
            raise ValueError(f"emax 必须 >= 1，当前为 {emax}")
        self.db = db
        self.emax = emax
        self.guard = guard
        self.executor = executor
        self.logger = logger or Logger.setup_logger("PatternEnumerator")
        self.stats = EnumerationStats()

    def make_pattern(self, code: DfsCode, graph_ids: Sequence[int]) -> Pattern:
        graph = code.to_graph()
        cov = cover_set_db(graph, self.db, graph_ids=graph_ids, guard=self.guard)
        return Pattern(code, graph, cov, tuple(graph_ids))

    def one_edge_patterns(self) -> List[Pattern]:
        """所有互不同构的单边模式，按编码排序"""
        seen: Dict[DfsEdge, Set[int]] = {}
        for g in self.db:
            for u, v, le in g.edges:
                a, b = g.vertices[u], g.vertices[v]
                if a > b:
                    a, b = b, a
                seen.setdefault(DfsEdge(0, 1, a, le, b), set()).add(g.id)
        items = [(DfsCode((e,)), sorted(gids)) for e, gids in seen.items()]
        items.sort(key=lambda item: item[0].sort_key())
        return ordered_map(self.executor, lambda item: self.make_pattern(*item), items)

    def rightmost_extend(self, p: Pattern) -> List[Pattern]:
        """
        生成 p 的全部 (m+1) 边规范子模式（只从 p 的实际嵌入出发）

        参数:
            p: 当前模式（边数须小于 emax）

        返回:
            子模式列表，后向扩展在前，其余按 gSpan 边序
        """
        if p.num_edges >= self.emax:
            raise ValueError(f"模式已有 {p.num_edges} 条边，不能超过 emax={self.emax} 继续扩展")
        rmpath = p.code.rightmost_path()
        rm, nv = rmpath[0], p.graph.num_vertices
        pairs = p.code.edge_pairs()
        backward_targets = [j for j in rmpath[1:] if edge_key(rm, j) not in pairs]
        found: Dict[DfsEdge, Set[int]] = {}

        for gid in p.containing_ids:
            g = self.db[gid]
            for emb in iter_embeddings(p.graph, g, self.guard):
                image = set(emb)
                x = emb[rm]
                for j in backward_targets:
                    hit = g.edge_lookup.get(edge_key(x, emb[j]))
                    if hit is not None:
                        found.setdefault(DfsEdge(rm, j, g.vertices[x], hit[1], g.vertices[emb[j]]), set()).add(gid)
                for i in rmpath:
                    y = emb[i]
                    for nb in g.adjacency[y]:
                        if nb.vertex not in image:
                            found.setdefault(DfsEdge(i, nv, g.vertices[y], nb.label, g.vertices[nb.vertex]),
                                             set()).add(gid)

        self.stats.extended += 1
        items = []
        for edge in sorted(found, key=DfsEdge.sort_key):
            child = p.code.extend(edge)
            if is_canonical(child):
                items.append((child, sorted(found[edge])))
        return ordered_map(self.executor, lambda item: self.make_pattern(*item), items)

    def iterate(self, admit: Optional[AdmitFn] = None,
                root_filter: Optional[Callable[[Pattern], bool]] = None) -> Iterator[Pattern]:
        """
        深度优先先序产生模式；调用方处理完一个模式后才会扩展它

        参数:
            admit: 可选的 (父模式, 子模式) -> 是否进入栈；被拒绝的子模式连同子树一起跳过
            root_filter: 可选的单边模式过滤条件

        返回:
            模式迭代器
        """
        roots = self.one_edge_patterns()
        if root_filter is not None:
            roots = [r for r in roots if root_filter(r)]
        self.logger.debug(f"单边模式 {len(roots)} 个")
        stack = list(reversed(roots))
        while stack:
            g = stack.pop()
            self.stats.enumerated += 1
            yield g
            if g.num_edges >= self.emax:
                continue
            children = self.rightmost_extend(g)
            if admit is not None:
                kept = [child for child in children if admit(g, child)]
                self.stats.pruned += len(children) - len(kept)
                children = kept
            stack.extend(reversed(children))


def enum_all_subgraphs(db: GraphDatabase, emax: int, executor: Optional[Executor] = None,
                       guard: Optional[int] = MiningDefaults.EMBEDDING_GUARD) -> Iterator[Pattern]:
    """产生数据库中 1..emax 条边的所有互不同构连通子图，各一次"""
    return PatternEnumerator(db, emax, guard=guard, executor=executor).iterate()


def support(p: Pattern, db: GraphDatabase) -> Fraction:
    """支持度：包含 p 的图所占比例"""
    if len(db) == 0:
        raise ValueError("空数据库没有支持度")
    return Fraction(sum(1 for g in db if contains(p.graph, g)), len(db))


def frequency_filter(db: GraphDatabase, minsup: Fraction) -> Callable[[Pattern], bool]:
    """支持度不低于 minsup 的判定函数（使用缓存的包含图集合）"""
    n = len(db)
    return lambda p: n > 0 and Fraction(p.support_count, n) >= minsup


def enum_frequent(db: GraphDatabase, emax: int, minsup: Fraction, executor: Optional[Executor] = None,
                  guard: Optional[int] = MiningDefaults.EMBEDDING_GUARD) -> List[Pattern]:
    """
    频繁子图枚举；利用反单调性，不频繁模式的子模式不会被访问

    参数:
        db: 图数据库
        emax: 最大边数
        minsup: 最小支持度，位于 (0, 1]

    返回:
        频繁模式列表（枚举顺序）
    """
    minsup = Fraction(minsup)
    if not 0 < minsup <= 1:
        raise ValueError(f"minsup 必须位于 (0, 1]，当前为 {minsup}")
    frequent = frequency_filter(db, minsup)
    enumerator = PatternEnumerator(db, emax, guard=guard, executor=executor)
    return list(enumerator.iterate(admit=lambda parent, child: frequent(child), root_filter=frequent))
