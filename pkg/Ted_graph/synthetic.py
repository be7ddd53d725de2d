"""
合成图数据库
用于测试、基准和验收扫描的固定样例与随机生成器
"""

import random
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

# 添加父目录到路径
sys.path.append(str(Path(__file__).parent.parent))

from Ted_graph.graph_model import Graph, GraphDatabase, derive_edge_label, intern_label, validate_graph

# DB_toy：G0 为 A,A,B 三角形（e0=A-A, e1=A-B, e2=A-B），G1 为一条 A-B 边
TOY_DATABASE_TEXT = """\
t # 0
v 0 A
v 1 A
v 2 B
e 0 1
e 0 2
e 1 2
t # 1
v 0 A
v 1 B
e 0 1
"""


def build_graph(graph_id: int, labels: Sequence[str], pairs: Sequence[Tuple[int, int]],
                edge_labels: Optional[Sequence[str]] = None) -> Graph:
    """
    由顶点标签和边端点列表构造图（未给出边标签时自动推导）

    参数:
        graph_id: 图编号
        labels: 顶点标签
        pairs: 边端点
        edge_labels: 可选的边标签

    返回:
        校验过的 Graph
    """
    vertices = [intern_label(label) for label in labels]
    edges = []
    for idx, (u, v) in enumerate(pairs):
        label = edge_labels[idx] if edge_labels else derive_edge_label(vertices[u], vertices[v])
        edges.append((u, v, label))
    return validate_graph(Graph(graph_id, vertices, edges))


def toy_database() -> GraphDatabase:
    """DB_toy 样例数据库"""
    return GraphDatabase([
        build_graph(0, "AAB", [(0, 1), (0, 2), (1, 2)]),
        build_graph(1, "AB", [(0, 1)]),
    ])


def random_connected_graph(rng: random.Random, graph_id: int, num_edges: int,
                           alphabet: Sequence[str]) -> Graph:
    """
    生成随机连通简单图：先生成随机树，再补充非树边

    参数:
        rng: 随机数生成器
        graph_id: 图编号
        num_edges: 边数
        alphabet: 顶点标签候选

    返回:
        Graph
    """
    # 顶点数 n 需满足 n-1 <= m <= n(n-1)/2
    low = 2
    while low * (low - 1) // 2 < num_edges:
        low += 1
    n = rng.randint(low, num_edges + 1)
    labels = [rng.choice(alphabet) for _ in range(n)]
    pairs = [(rng.randrange(v), v) for v in range(1, n)]
    existing = {tuple(sorted(p)) for p in pairs}
    missing = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in existing]
    rng.shuffle(missing)
    pairs.extend(missing[:num_edges - len(pairs)])
    return build_graph(graph_id, labels, pairs)


def random_database(rng: random.Random, graphs: Tuple[int, int] = (2, 4), edges: Tuple[int, int] = (4, 10),
                    labels: Tuple[int, int] = (2, 4)) -> GraphDatabase:
    """
    生成随机小型数据库（验收扫描所用的语料）

    参数:
        rng: 随机数生成器
        graphs: 图数量范围（闭区间）
        edges: 每个图的边数范围（闭区间）
        labels: 标签字母表大小范围（闭区间）

    返回:
        GraphDatabase
    """
    alphabet = "ABCD"[:rng.randint(*labels)]
    return GraphDatabase([
        random_connected_graph(rng, gid, rng.randint(*edges), alphabet)
        for gid in range(rng.randint(*graphs))
    ])


def motif_database() -> GraphDatabase:
    """
    一个主导结构（C-C-O，出现在全部4个图中）加两个稀有结构
    （N六元环在 G0/G1，S链在 G2/G3）的数据库
    """
    ring = [(3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 3)]
    chain = [(3, 4), (4, 5), (5, 6)]
    dominant = [(0, 1), (1, 2)]
    with_ring = build_graph(0, ["C", "C", "O"] + ["N"] * 6, dominant + [(0, 3)] + ring)
    with_chain = build_graph(0, ["C", "C", "O"] + ["S"] * 4, dominant + [(0, 3)] + chain)
    graphs = []
    for gid, template in enumerate((with_ring, with_ring, with_chain, with_chain)):
        graphs.append(Graph(gid, list(template.vertices), list(template.edges)))
    return GraphDatabase(graphs)


def molecule_like_database(rng: random.Random, num_graphs: int = 1000,
                           edges: Tuple[int, int] = (5, 9)) -> GraphDatabase:
    """
    生成类分子数据库：以 C 为主的树形骨架，偶尔闭合成环

    参数:
        rng: 随机数生成器
        num_graphs: 图数量
        edges: 每个图的边数范围（闭区间）

    返回:
        GraphDatabase
    """
    atoms = ["C"] * 7 + ["N", "O", "O"]
    graphs: List[Graph] = []
    for gid in range(num_graphs):
        m = rng.randint(*edges)
        ring = m >= 6 and rng.random() < 0.4
        n = m if ring else m + 1
        labels = [rng.choice(atoms) for _ in range(n)]
        pairs = [(rng.randrange(max(0, v - 3), v), v) for v in range(1, n)]
        if ring:
            existing = {tuple(sorted(p)) for p in pairs}
            closing = [(u, v) for u in range(n) for v in range(u + 2, n) if (u, v) not in existing]
            pairs.append(rng.choice(closing))
        graphs.append(build_graph(gid, labels, pairs))
    return GraphDatabase(graphs)
