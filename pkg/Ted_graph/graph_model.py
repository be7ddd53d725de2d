"""
图数据模型
表示带标签的无向图和图数据库，解析/输出 gSpan 风格的行格式，
并为无边标签的输入推导边标签
"""

import sys
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx

# 添加父目录到路径
sys.path.append(str(Path(__file__).parent.parent))

from exceptions import GraphParseError, GraphStructureError

# 推导边标签时的连接符
LABEL_SEPARATOR = "."


class EdgeRef(NamedTuple):
    """数据库中一条边的标识：(图编号, 边编号)，按字典序全序"""
    graph_id: int
    edge_id: int


class Neighbor(NamedTuple):
    vertex: int
    edge_id: int
    label: str


def intern_label(token: str) -> str:
    """校验并驻留标签字符串"""
    if not token or any(ch.isspace() for ch in token):
        raise ValueError(f"非法标签: {token!r}")
    return sys.intern(token)


def derive_edge_label(lu: str, lv: str) -> str:
    """
    为无标签的边推导标签：按字典序拼接两端顶点标签

    参数:
        lu: 一端顶点标签
        lv: 另一端顶点标签

    返回:
        "min(lu,lv).max(lu,lv)"
    """
    low, high = (lu, lv) if lu <= lv else (lv, lu)
    return sys.intern(f"{low}{LABEL_SEPARATOR}{high}")


def edge_key(u: int, v: int) -> Tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass
class Graph:
    """带标签的简单无向连通图；边在列表中的下标即稳定的边编号"""
    id: int
    vertices: List[str]
    edges: List[Tuple[int, int, str]] = field(default_factory=list)

    @cached_property
    def adjacency(self) -> List[List[Neighbor]]:
        """每个顶点的邻居列表，按邻居编号升序"""
        adj: List[List[Neighbor]] = [[] for _ in self.vertices]
        for eid, (u, v, label) in enumerate(self.edges):
            adj[u].append(Neighbor(v, eid, label))
            adj[v].append(Neighbor(u, eid, label))
        for neighbors in adj:
            neighbors.sort()
        return adj

    @cached_property
    def edge_lookup(self) -> Dict[Tuple[int, int], Tuple[int, str]]:
        """(较小端点, 较大端点) -> (边编号, 边标签)"""
        return {edge_key(u, v): (eid, label) for eid, (u, v, label) in enumerate(self.edges)}

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_refs(self) -> List[EdgeRef]:
        return [EdgeRef(self.id, eid) for eid in range(len(self.edges))]

    def same_structure(self, other: "Graph") -> bool:
        """顶点标签序列与边列表完全一致（不比较编号）"""
        return self.vertices == other.vertices and self.edges == other.edges


@dataclass
class GraphDatabase:
    """图数据库：编号 0..n-1 与列表位置一致"""
    graphs: List[Graph] = field(default_factory=list)

    @cached_property
    def total_edges(self) -> int:
        return sum(g.num_edges for g in self.graphs)

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self):
        return iter(self.graphs)

    def __getitem__(self, index: int) -> Graph:
        return self.graphs[index]

    def edge_ref_valid(self, ref: EdgeRef) -> bool:
        return 0 <= ref.graph_id < len(self.graphs) and 0 <= ref.edge_id < self.graphs[ref.graph_id].num_edges


def to_networkx(g: Graph) -> nx.Graph:
    """转换为 networkx 图，顶点与边的 label 属性保存标签"""
    gnx = nx.Graph()
    for vid, label in enumerate(g.vertices):
        gnx.add_node(vid, label=label)
    for u, v, label in g.edges:
        gnx.add_edge(u, v, label=label)
    return gnx


def validate_graph(g: Graph, graph_index: Optional[int] = None) -> Graph:
    """
    检查简单图与连通性约束

    参数:
        g: 待检查的图
        graph_index: 出错时报告的图序号

    返回:
        原图
    """
    where = g.id if graph_index is None else graph_index
    if not g.vertices:
        raise GraphStructureError("图中没有顶点", where)
    seen = set()
    for u, v, _ in g.edges:
        if not (0 <= u < g.num_vertices and 0 <= v < g.num_vertices):
            raise GraphStructureError(f"边 ({u}, {v}) 引用了不存在的顶点", where)
        if u == v:
            raise GraphStructureError(f"顶点 {u} 上存在自环", where)
        key = edge_key(u, v)
        if key in seen:
            raise GraphStructureError(f"重复的边 ({u}, {v})", where)
        seen.add(key)
    if not nx.is_connected(to_networkx(g)):
        raise GraphStructureError("图不连通", where)
    return g


class _GraphBuilder:
    """解析单个图时的中间状态"""

    def __init__(self, header_line: int):
        self.header_line = header_line
        self.vertex_ids: Dict[str, int] = {}
        self.vertices: List[str] = []
        self.edges: List[Tuple[int, int, str]] = []
        self.pairs = set()

    def add_vertex(self, token: str, label: str, line_number: int, graph_index: int):
        if token in self.vertex_ids:
            raise GraphStructureError(f"第 {line_number} 行: 顶点 {token} 重复声明", graph_index)
        self.vertex_ids[token] = len(self.vertices)
        self.vertices.append(label)

    def add_edge(self, tu: str, tv: str, label: Optional[str], line_number: int, graph_index: int):
        for token in (tu, tv):
            if token not in self.vertex_ids:
                raise GraphStructureError(f"第 {line_number} 行: 边引用了未声明的顶点 {token}", graph_index)
        u, v = self.vertex_ids[tu], self.vertex_ids[tv]
        if u == v:
            raise GraphStructureError(f"第 {line_number} 行: 顶点 {tu} 上存在自环", graph_index)
        key = edge_key(u, v)
        if key in self.pairs:
            raise GraphStructureError(f"第 {line_number} 行: 重复的边 ({tu}, {tv})", graph_index)
        self.pairs.add(key)
        if label is None:
            label = derive_edge_label(self.vertices[u], self.vertices[v])
        self.edges.append((u, v, label))

    def build(self, graph_index: int) -> Graph:
        return validate_graph(Graph(graph_index, self.vertices, self.edges), graph_index)


def _vertex_token(token: str, line_number: int) -> str:
    if not token.isdigit():
        raise GraphParseError(line_number, f"顶点编号必须是非负整数: {token!r}")
    return str(int(token))


def parse_database(text: Union[str, Iterable[str]]) -> GraphDatabase:
    """
    解析行格式的图数据库

    参数:
        text: 完整文本或逐行可迭代对象

    返回:
        GraphDatabase，图按文件顺序重新编号为 0..n-1
    """
    lines = text.splitlines() if isinstance(text, str) else text
    graphs: List[Graph] = []
    current: Optional[_GraphBuilder] = None

    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split()
        tag = cols[0]
        try:
            if tag == "t":
                if len(cols) != 3 or cols[1] != "#":
                    raise GraphParseError(line_number, f"图头格式应为 't # <id>': {line!r}")
                if current is not None:
                    graphs.append(current.build(len(graphs)))
                    current = None
                if cols[2] == "-1":
                    break
                int(cols[2])
                current = _GraphBuilder(line_number)
            elif tag == "v":
                if current is None:
                    raise GraphParseError(line_number, "顶点声明出现在任何图之前")
                if len(cols) != 3:
                    raise GraphParseError(line_number, f"顶点行格式应为 'v <vid> <label>': {line!r}")
                current.add_vertex(_vertex_token(cols[1], line_number), intern_label(cols[2]),
                                   line_number, len(graphs))
            elif tag == "e":
                if current is None:
                    raise GraphParseError(line_number, "边声明出现在任何图之前")
                if len(cols) not in (3, 4):
                    raise GraphParseError(line_number, f"边行格式应为 'e <u> <v> [<label>]': {line!r}")
                label = intern_label(cols[3]) if len(cols) == 4 else None
                current.add_edge(_vertex_token(cols[1], line_number), _vertex_token(cols[2], line_number),
                                 label, line_number, len(graphs))
            else:
                raise GraphParseError(line_number, f"未知的行类型 {tag!r}")
        except ValueError as e:
            raise GraphParseError(line_number, str(e)) from e

    if current is not None:
        graphs.append(current.build(len(graphs)))
    return GraphDatabase(graphs)


def read_database(path: Union[str, Path]) -> GraphDatabase:
    """从文件读取图数据库"""
    with open(path, "r", encoding="utf-8") as f:
        return parse_database(f)


def serialize_graph(g: Graph, annotations: Sequence[Tuple[str, object]] = (), graph_id: Optional[int] = None) -> str:
    """
    输出交换格式；注释以一行 "# key=value key=value ..." 写在图之前

    参数:
        g: 图
        annotations: 键值对列表
        graph_id: "t #" 行中使用的编号（默认为 g.id）

    返回:
        文本（以换行结尾）
    """
    lines = ["# " + " ".join(f"{key}={value}" for key, value in annotations)] if annotations else []
    lines.append(f"t # {g.id if graph_id is None else graph_id}")
    lines.extend(f"v {vid} {label}" for vid, label in enumerate(g.vertices))
    lines.extend(f"e {u} {v} {label}" for u, v, label in g.edges)
    return "\n".join(lines) + "\n"


def serialize_database(db: GraphDatabase) -> str:
    """输出整个数据库"""
    return "".join(serialize_graph(g) for g in db.graphs)
