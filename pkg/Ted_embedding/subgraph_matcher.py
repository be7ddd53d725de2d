"""
子图同构匹配
枚举模式到数据图的全部嵌入（单射、保持顶点与边标签），并计算覆盖集
"""

import sys
from concurrent.futures import Executor
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

# 添加父目录到路径
sys.path.append(str(Path(__file__).parent.parent))

from config import MiningDefaults
from exceptions import ResourceLimitError
from Ted_graph.graph_model import EdgeRef, Graph, GraphDatabase, edge_key
from utils import ordered_map

Embedding = Tuple[int, ...]


class CoverSet:
    """有序、无重复的 EdgeRef 集合"""

    __slots__ = ("_refs", "_members")

    def __init__(self, refs: Iterable[EdgeRef] = ()):
        members = frozenset(EdgeRef(*ref) for ref in refs)
        self._members: FrozenSet[EdgeRef] = members
        self._refs: Tuple[EdgeRef, ...] = tuple(sorted(members))

    @classmethod
    def from_edge_ids(cls, graph_id: int, edge_ids: Iterable[int]) -> "CoverSet":
        return cls(EdgeRef(graph_id, eid) for eid in edge_ids)

    @property
    def refs(self) -> Tuple[EdgeRef, ...]:
        return self._refs

    def __len__(self) -> int:
        return len(self._refs)

    def __iter__(self) -> Iterator[EdgeRef]:
        return iter(self._refs)

    def __contains__(self, ref) -> bool:
        return ref in self._members

    def __eq__(self, other) -> bool:
        return isinstance(other, CoverSet) and self._members == other._members

    def __hash__(self) -> int:
        return hash(self._members)

    def __repr__(self) -> str:
        shown = ", ".join(f"G{r.graph_id}.e{r.edge_id}" for r in self._refs[:8])
        more = ", ..." if len(self._refs) > 8 else ""
        return f"CoverSet({len(self._refs)}: {shown}{more})"

    def union(self, *others: "CoverSet") -> "CoverSet":
        members = set(self._members)
        for other in others:
            members |= other._members
        return CoverSet(members)

    def difference(self, other: "CoverSet") -> "CoverSet":
        return CoverSet(self._members - other._members)

    def intersection(self, other: "CoverSet") -> "CoverSet":
        return CoverSet(self._members & other._members)

    def in_graph(self, graph_id: int) -> "CoverSet":
        return CoverSet(ref for ref in self._refs if ref.graph_id == graph_id)

    def graph_ids(self) -> List[int]:
        return sorted({ref.graph_id for ref in self._refs})

    def as_frozenset(self) -> FrozenSet[EdgeRef]:
        return self._members


def _matching_plan(p: Graph) -> List[Tuple[int, Optional[int], List[Tuple[int, str]]]]:
    """
    生成回溯顺序：每一步为 (模式顶点, 取候选的已匹配邻居, 需校验的已匹配邻居及边标签)

    第一个顶点之后，总是选取编号最小且与已匹配顶点相邻的顶点；
    对由 DFS 编码得到的模式图，这恰好是顶点编号顺序。
    任意编号的模式（如路径 0-2-1）按 0, 2, 1 的顺序回溯，嵌入的产生顺序随之变化，
    但嵌入元组的第 i 位始终是模式顶点 i 的像
    """
    n = p.num_vertices
    placed: Dict[int, int] = {}
    plan = []
    for _ in range(n):
        frontier = [v for v in range(n) if v not in placed
                    and any(nb.vertex in placed for nb in p.adjacency[v])]
        u = min(frontier) if frontier else min(v for v in range(n) if v not in placed)
        checks = [(nb.vertex, nb.label) for nb in p.adjacency[u] if nb.vertex in placed]
        anchor = min(checks, key=lambda item: placed[item[0]])[0] if checks else None
        plan.append((u, anchor, checks))
        placed[u] = len(placed)
    return plan


def iter_embeddings(p: Graph, g: Graph, guard: Optional[int] = None) -> Iterator[Embedding]:
    """
    按确定顺序逐个产生 p 到 g 的子图同构

    参数:
        p: 模式图（连通，至少一条边）
        g: 数据图
        guard: 嵌入数量上限，超过则抛出 ResourceLimitError

    返回:
        迭代器，每个元素是位置 i 存放模式顶点 i 所映射数据顶点的元组
    """
    if p.num_vertices > g.num_vertices or p.num_edges > g.num_edges:
        return
    plan = _matching_plan(p)
    mapping = [-1] * p.num_vertices
    used = [False] * g.num_vertices
    lookup = g.edge_lookup
    count = 0

    def candidates(step: int) -> Iterable[int]:
        u, anchor, _ = plan[step]
        if anchor is None:
            return range(g.num_vertices)
        return (nb.vertex for nb in g.adjacency[mapping[anchor]])

    def extend(step: int) -> Iterator[Embedding]:
        nonlocal count
        if step == len(plan):
            count += 1
            if guard is not None and count > guard:
                raise ResourceLimitError(f"模式在图 {g.id} 中的嵌入数量超过上限 {guard}")
            yield tuple(mapping)
            return
        u, _, checks = plan[step]
        label = p.vertices[u]
        for x in candidates(step):
            if used[x] or g.vertices[x] != label:
                continue
            ok = True
            for w, elabel in checks:
                hit = lookup.get(edge_key(x, mapping[w]))
                if hit is None or hit[1] != elabel:
                    ok = False
                    break
            if not ok:
                continue
            mapping[u] = x
            used[x] = True
            yield from extend(step + 1)
            used[x] = False
            mapping[u] = -1

    yield from extend(0)


def enumerate_embeddings(p: Graph, g: Graph, guard: Optional[int] = MiningDefaults.EMBEDDING_GUARD) -> List[Embedding]:
    """返回全部嵌入（含自同构变体）；不存在时返回空列表"""
    return list(iter_embeddings(p, g, guard))


def contains(p: Graph, g: Graph) -> bool:
    """g 是否包含 p；找到第一个嵌入即返回"""
    return next(iter_embeddings(p, g), None) is not None


def embedded_edge_ids(p: Graph, g: Graph, emb: Embedding) -> List[int]:
    """一个嵌入所覆盖的数据边编号"""
    lookup = g.edge_lookup
    return [lookup[edge_key(emb[u], emb[v])][0] for u, v, _ in p.edges]


def cover_set(p: Graph, g: Graph, guard: Optional[int] = MiningDefaults.EMBEDDING_GUARD) -> CoverSet:
    """
    计算 Cov(p, g)：所有嵌入所覆盖数据边的并集

    参数:
        p: 模式图
        g: 数据图
        guard: 嵌入数量上限

    返回:
        CoverSet（graph_id = g.id）
    """
    covered = set()
    total = g.num_edges
    for emb in iter_embeddings(p, g, guard):
        covered.update(embedded_edge_ids(p, g, emb))
        if len(covered) == total:
            break
    return CoverSet.from_edge_ids(g.id, covered)


def cover_set_db(p: Graph, db: GraphDatabase, graph_ids: Optional[Sequence[int]] = None,
                 executor: Optional[Executor] = None,
                 guard: Optional[int] = MiningDefaults.EMBEDDING_GUARD) -> CoverSet:
    """
    计算 p 在整个数据库（或给定图子集）上的覆盖集

    参数:
        p: 模式图
        db: 图数据库
        graph_ids: 只在这些图上计算（默认全部）
        executor: 可选线程池，按图并行
        guard: 嵌入数量上限

    返回:
        CoverSet
    """
    ids = range(len(db)) if graph_ids is None else graph_ids
    parts = ordered_map(executor, lambda gid: cover_set(p, db[gid], guard), ids)
    refs = []
    for part in parts:
        refs.extend(part.refs)
    return CoverSet(refs)
