"""
结果报告
运行指标报告、模式文件读写、模式包含矩阵和多算法对比表
"""

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd

# 添加父目录到路径
sys.path.append(str(Path(__file__).parent.parent))

from config import MiningConfig
from Ted_dfs.dfs_enum import Pattern
from Ted_embedding.subgraph_matcher import contains
from Ted_engine.ted_miner import MiningResult
from Ted_graph.graph_model import Graph, GraphDatabase, parse_database, serialize_graph

METRICS_SCHEMA = 1

# 报告中不参与确定性比较的计时字段
TIMING_KEYS = ("elapsed_ms", "index_time_ms")


def _fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


@dataclass
class RunReport:
    """一次运行的指标报告"""
    algorithm: str
    config: Dict[str, Any]
    total_coverage: int = 0
    total_edges: int = 0
    num_patterns: int = 0
    elapsed_ms: float = 0.0
    patterns_enumerated: int = 0
    swaps: int = 0
    prm_pruned: int = 0
    index_size_bytes: int = 0
    index_time_ms: float = 0.0
    input_size_bytes: int = 0
    complete: bool = True
    error: Optional[str] = None

    @property
    def coverage_rate(self) -> Fraction:
        if self.total_edges == 0:
            return Fraction(0)
        return Fraction(self.total_coverage, self.total_edges)

    @classmethod
    def from_result(cls, result: MiningResult, cfg: MiningConfig, input_size_bytes: int = 0) -> "RunReport":
        """
        由挖掘结果生成报告

        参数:
            result: 挖掘结果
            cfg: 挖掘参数
            input_size_bytes: 输入文件大小

        返回:
            RunReport
        """
        m = result.metrics
        elapsed_ms = m.elapsed_seconds * 1000
        return cls(
            algorithm=result.algorithm,
            config=cfg.to_dict(),
            total_coverage=result.total_coverage,
            total_edges=result.total_edges,
            num_patterns=len(result.patterns),
            elapsed_ms=elapsed_ms,
            patterns_enumerated=m.patterns_enumerated,
            swaps=m.swaps,
            prm_pruned=m.prm_pruned,
            index_size_bytes=m.index_size_bytes,
            index_time_ms=min(m.index_seconds * 1000, elapsed_ms),
            input_size_bytes=input_size_bytes,
            complete=result.complete,
        )

    @classmethod
    def failed(cls, algorithm: str, cfg: MiningConfig, error: str, total_edges: int = 0) -> "RunReport":
        return cls(algorithm=algorithm, config=cfg.to_dict(), total_edges=total_edges, complete=False, error=error)

    def to_dict(self) -> Dict[str, Any]:
        """指标文档（schema 1）"""
        doc = {
            "schema": METRICS_SCHEMA,
            "algorithm": self.algorithm,
            "complete": self.complete,
            "config": dict(self.config),
            "total_coverage": self.total_coverage,
            "total_edges": self.total_edges,
            "coverage_rate": {
                "fraction": _fraction_text(self.coverage_rate),
                "decimal": float(self.coverage_rate),
            },
            "num_patterns": self.num_patterns,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "patterns_enumerated": self.patterns_enumerated,
            "swaps": self.swaps,
            "prm_pruned": self.prm_pruned,
            "index_size_bytes": self.index_size_bytes,
            "index_time_ms": round(self.index_time_ms, 3),
            "input_size_bytes": self.input_size_bytes,
        }
        if self.error is not None:
            doc["error"] = self.error
        return doc


def write_pattern_file(patterns: Sequence[Pattern], db: GraphDatabase) -> str:
    """
    输出模式文件：每个模式前有一行 "# cov=<n> support=<num>/<den> marginal=<n>"

    参数:
        patterns: 模式列表（marginal 按列表顺序累计）
        db: 图数据库

    返回:
        文本
    """
    covered = set()
    blocks = []
    for idx, p in enumerate(patterns):
        refs = p.cov.as_frozenset()
        marginal = len(refs - covered)
        covered |= refs
        support = Fraction(p.support_count, len(db)) if len(db) else Fraction(0)
        annotations = [("cov", p.coverage), ("support", _fraction_text(support)), ("marginal", marginal)]
        blocks.append(serialize_graph(p.graph, annotations, graph_id=idx))
    return "".join(blocks)


def _parse_annotation(line: str) -> Dict[str, str]:
    fields = {}
    for token in line.lstrip("#").split():
        key, sep, value = token.partition("=")
        if sep:
            fields[key] = value
    return fields


def read_pattern_file(text: Union[str, Path]) -> List[Tuple[Graph, Dict[str, str]]]:
    """
    解析模式文件

    参数:
        text: 文件内容或文件路径

    返回:
        [(模式图, 注释字典)]，顺序与文件一致
    """
    if isinstance(text, Path):
        text = text.read_text(encoding="utf-8")
    annotations: List[Dict[str, str]] = []
    pending: Dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#"):
            pending = _parse_annotation(line)
        elif line.startswith("t ") and not line.endswith("-1"):
            annotations.append(pending)
            pending = {}
    db = parse_database(text)
    return list(zip(db.graphs, annotations))


def containment_matrix(patterns: Sequence[Union[Pattern, Graph]], db: GraphDatabase) -> pd.DataFrame:
    """
    模式包含矩阵：行 G_i，列 p_j，值为 contains(p_j, G_i)；最后一行为不包含该模式的图数

    参数:
        patterns: 模式或模式图
        db: 图数据库

    返回:
        DataFrame（行索引 "G0".."G{n-1}" 与 "pruned"，列为模式序号）
    """
    graphs = [p.graph if isinstance(p, Pattern) else p for p in patterns]
    if not graphs:
        return pd.DataFrame(index=pd.Index([], name="graph"))
    rows = {f"G{g.id}": [int(contains(pg, g)) for pg in graphs] for g in db}
    matrix = pd.DataFrame.from_dict(rows, orient="index", columns=list(range(len(graphs))), dtype=int)
    if (matrix.sum(axis=0) == 0).any():
        raise ValueError("存在不被任何数据图包含的模式")
    matrix.loc["pruned"] = len(db) - matrix.sum(axis=0)
    matrix.index.name = "graph"
    return matrix.astype(int)


def render_matrix(matrix: pd.DataFrame) -> str:
    """矩阵的文本形式：表头为模式序号，随后每个图一行 0/1，最后一行为剪枝计数"""
    if matrix.shape[1] == 0:
        return "graph\n"
    return matrix.to_csv()


def bench_table(reports: Sequence[RunReport]) -> pd.DataFrame:
    """
    多算法对比表；两个以上算法时附加 ratio_to_<algo> 覆盖比列

    参数:
        reports: 各算法的运行报告

    返回:
        DataFrame（每个算法一行）
    """
    rows = []
    for r in reports:
        rows.append({
            "algorithm": r.algorithm,
            "total_coverage": r.total_coverage if r.error is None else None,
            "total_edges": r.total_edges,
            "coverage_rate": float(r.coverage_rate) if r.error is None else None,
            "num_patterns": r.num_patterns,
            "elapsed_ms": round(r.elapsed_ms, 3),
            "patterns_enumerated": r.patterns_enumerated,
            "swaps": r.swaps,
            "prm_pruned": r.prm_pruned,
            "index_size_bytes": r.index_size_bytes,
            "index_time_ms": round(r.index_time_ms, 3),
            "error": r.error or "",
        })
    table = pd.DataFrame(rows, columns=["algorithm", "total_coverage", "total_edges", "coverage_rate",
                                        "num_patterns", "elapsed_ms", "patterns_enumerated", "swaps",
                                        "prm_pruned", "index_size_bytes", "index_time_ms", "error"])
    if len(reports) < 2:
        return table

    for base in reports:
        if base.error is not None:
            continue
        ratios = []
        for r in reports:
            if r.error is not None or base.total_coverage == 0:
                ratios.append(math.nan)
            else:
                ratios.append(r.total_coverage / base.total_coverage)
        table[f"ratio_to_{base.algorithm}"] = ratios
    return table
