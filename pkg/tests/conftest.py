"""
测试共享夹具：DB_toy、交换场景的覆盖状态和带种子的随机语料
"""

import random
import sys
from pathlib import Path

import pytest

# 添加项目根目录到路径
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from config import MiningConfig
from Ted_dfs.dfs_enum import DfsCode, DfsEdge, Pattern
from Ted_embedding.subgraph_matcher import CoverSet
from Ted_graph.graph_model import GraphDatabase
from Ted_graph.synthetic import TOY_DATABASE_TEXT, build_graph, random_database, toy_database


@pytest.fixture
def toy_db() -> GraphDatabase:
    return toy_database()


@pytest.fixture
def toy_file(tmp_path) -> Path:
    path = tmp_path / "toy.lg"
    path.write_text(TOY_DATABASE_TEXT, encoding="utf-8")
    return path


def synthetic_pattern(name: str, edge_ids, graph_id: int = 0) -> Pattern:
    """直接给定覆盖集的模式（编码只用于区分身份）"""
    code = DfsCode([DfsEdge(0, 1, "X", name, "X")])
    cov = CoverSet.from_edge_ids(graph_id, edge_ids)
    return Pattern(code, code.to_graph(), cov, (graph_id,))


class SwapScenario:
    """pCov = (2, 10, 8)，|Cov(P)| = 33，候选 p2 的收益为 7"""

    shared = set(range(20, 33))

    def __init__(self):
        self.db = GraphDatabase([build_graph(0, ["X"] * 61, [(i, i + 1) for i in range(60)])])
        self.g1 = synthetic_pattern("g1", {2, 6})
        self.p1 = synthetic_pattern("p1", set(range(40, 50)) | self.shared)
        self.p3 = synthetic_pattern("p3", set(range(50, 58)) | self.shared)
        self.p2 = synthetic_pattern("p2", {3, 4, 7, 9, 10, 11, 12})
        self.cfg = MiningConfig(k=3, emax=1, alpha="1")


@pytest.fixture
def swap_scenario() -> SwapScenario:
    return SwapScenario()


@pytest.fixture
def small_corpus():
    """100 个随机数据库（至多 3 个图，每图至多 8 条边）"""
    rng = random.Random(20240601)
    return [random_database(rng, graphs=(1, 3), edges=(2, 8), labels=(2, 3)) for _ in range(100)]
