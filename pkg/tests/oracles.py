"""
独立参照实现：穷举连通子图（networkx 同构分桶）与穷举单射映射
"""

from itertools import combinations, permutations
from typing import List

import networkx as nx
from networkx.algorithms.isomorphism import categorical_edge_match, categorical_node_match

from Ted_graph.graph_model import Graph, GraphDatabase, edge_key, to_networkx

node_match = categorical_node_match("label", None)
edge_match = categorical_edge_match("label", None)


def isomorphic(a: nx.Graph, b: nx.Graph) -> bool:
    return nx.is_isomorphic(a, b, node_match=node_match, edge_match=edge_match)


def _wl_hash(g: nx.Graph) -> str:
    return nx.weisfeiler_lehman_graph_hash(g, node_attr="label", edge_attr="label")


class IsomorphismClasses:
    """按 WL 哈希分桶，桶内用 is_isomorphic 去重"""

    def __init__(self):
        self.buckets = {}
        self.representatives: List[nx.Graph] = []

    def find(self, g: nx.Graph):
        for rep in self.buckets.get(_wl_hash(g), []):
            if isomorphic(g, rep):
                return rep
        return None

    def add(self, g: nx.Graph) -> bool:
        if self.find(g) is not None:
            return False
        self.buckets.setdefault(_wl_hash(g), []).append(g)
        self.representatives.append(g)
        return True

    def __len__(self) -> int:
        return len(self.representatives)


def connected_subgraph_classes(db: GraphDatabase, emax: int) -> IsomorphismClasses:
    """数据库中 1..emax 条边的全部连通子图，按同构去重"""
    classes = IsomorphismClasses()
    for g in db:
        full = to_networkx(g)
        edges = [(u, v) for u, v, _ in g.edges]
        for size in range(1, min(emax, len(edges)) + 1):
            for subset in combinations(edges, size):
                sub = full.edge_subgraph(subset).copy()
                if nx.is_connected(sub):
                    classes.add(sub)
    return classes


def cover_by_permutations(p: Graph, g: Graph) -> set:
    """穷举所有单射顶点映射计算覆盖的边编号"""
    covered = set()
    lookup = g.edge_lookup
    for image in permutations(range(g.num_vertices), p.num_vertices):
        if any(p.vertices[i] != g.vertices[x] for i, x in enumerate(image)):
            continue
        hits = []
        for u, v, label in p.edges:
            hit = lookup.get(edge_key(image[u], image[v]))
            if hit is None or hit[1] != label:
                break
            hits.append(hit[0])
        else:
            covered.update(hits)
    return covered
