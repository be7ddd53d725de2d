"""命令行入口测试：子命令输出、退出码与确定性"""

import json

import pandas as pd
import pytest

from config import Algorithms, ExitCodes
from main import main
from Ted_embedding.subgraph_matcher import cover_set_db
from Ted_graph.synthetic import motif_database
from Ted_graph.graph_model import read_database, serialize_database
from Ted_report.report import METRICS_SCHEMA, TIMING_KEYS, read_pattern_file


def run(*argv):
    return main([str(a) for a in argv])


def test_mine_writes_all_outputs(toy_file, tmp_path):
    pats, metrics, matrix = tmp_path / "pats.lg", tmp_path / "out" / "m.json", tmp_path / "matrix.csv"
    code = run("mine", "--input", toy_file, "--algo", "ted", "--k", 2, "--emax", 3, "--alpha", 1,
               "--output", pats, "--metrics", metrics, "--matrix", matrix, "-q")
    assert code == ExitCodes.OK

    doc = json.loads(metrics.read_text(encoding="utf-8"))
    assert doc["schema"] == METRICS_SCHEMA
    assert doc["algorithm"] == "ted"
    assert doc["complete"] is True
    assert doc["total_coverage"] == 4
    assert doc["coverage_rate"] == {"fraction": "1/1", "decimal": 1.0}
    assert doc["prm_pruned"] == 2
    assert doc["input_size_bytes"] == toy_file.stat().st_size
    assert doc["config"]["alpha"] == "1"

    lines = matrix.read_text(encoding="utf-8").splitlines()
    assert lines == ["graph,0,1", "G0,1,1", "G1,0,1", "pruned,1,0"]


def test_pattern_file_reparses(toy_file, tmp_path):
    pats = tmp_path / "pats.lg"
    assert run("mine", "--input", toy_file, "--k", 2, "--emax", 3, "--output", pats, "-q") == ExitCodes.OK
    db = read_database(toy_file)
    entries = read_pattern_file(pats)
    assert len(entries) == 2
    covered = set()
    for graph, notes in entries:
        cov = cover_set_db(graph, db)
        assert int(notes["cov"]) == len(cov)
        assert int(notes["marginal"]) == len(cov.as_frozenset() - covered)
        covered |= cov.as_frozenset()
    assert entries[1][1]["support"] == "1/1"
    assert len(covered) == 4


def test_matrix_from_pattern_file(toy_file, tmp_path):
    pats, matrix = tmp_path / "pats.lg", tmp_path / "matrix.csv"
    run("mine", "--input", toy_file, "--k", 2, "--emax", 3, "--output", pats, "-q")
    assert run("matrix", "--input", toy_file, "--patterns", pats, "--matrix", matrix, "-q") == ExitCodes.OK
    frame = pd.read_csv(matrix, index_col="graph")
    assert list(frame.loc["pruned"]) == [1, 0]


def test_bench_table(toy_file, tmp_path):
    table_path, metrics = tmp_path / "bench.csv", tmp_path / "bench.json"
    code = run("bench", "--input", toy_file, "--algos", "ted,all_g,opt,ted", "--k", 2, "--emax", 3,
               "--output", table_path, "--metrics", metrics, "-q")
    assert code == ExitCodes.OK
    table = pd.read_csv(table_path)
    assert list(table["algorithm"]) == ["ted", "all_g", "opt"]
    assert list(table["total_coverage"]) == [4, 4, 4]
    assert list(table["ratio_to_opt"]) == [1.0, 1.0, 1.0]
    assert {"ratio_to_ted", "ratio_to_all_g"} <= set(table.columns)
    docs = json.loads(metrics.read_text(encoding="utf-8"))
    assert [d["algorithm"] for d in docs] == ["ted", "all_g", "opt"]


def test_bench_keeps_going_when_opt_is_too_large(toy_file, tmp_path):
    metrics = tmp_path / "bench.json"
    code = run("bench", "--input", toy_file, "--algos", "ted,opt", "--k", 2, "--emax", 3,
               "--opt-candidate-cap", 2, "--metrics", metrics, "-q")
    assert code == ExitCodes.OK
    ted_doc, opt_doc = json.loads(metrics.read_text(encoding="utf-8"))
    assert ted_doc["total_coverage"] == 4
    assert "opt_candidate_cap" in opt_doc["error"]
    assert opt_doc["complete"] is False


@pytest.mark.parametrize("extra, expected", [
    (["--alpha", "1.5"], ExitCodes.CONFIG),
    (["--k", "0"], ExitCodes.CONFIG),
    (["--algo", "opt", "--opt-candidate-cap", "2"], ExitCodes.RESOURCE),
    (["--embedding-guard", "1"], ExitCodes.RESOURCE),
])
def test_mine_exit_codes(toy_file, extra, expected):
    assert run("mine", "--input", toy_file, "--emax", 3, "-q", *extra) == expected


def test_bench_rejects_unknown_algorithm(toy_file):
    assert run("bench", "--input", toy_file, "--algos", "ted,magic", "-q") == ExitCodes.CONFIG


def test_input_errors(tmp_path):
    assert run("mine", "--input", tmp_path / "missing.lg", "-q") == ExitCodes.INPUT
    bad = tmp_path / "bad.lg"
    bad.write_text("t # 0\nv 0 A\nq 1\n", encoding="utf-8")
    assert run("mine", "--input", bad, "-q") == ExitCodes.INPUT


def test_usage_without_command():
    assert main([]) == ExitCodes.USAGE


def test_time_limit_writes_partial_metrics(toy_file, tmp_path):
    metrics = tmp_path / "m.json"
    code = run("mine", "--input", toy_file, "--emax", 3, "--time-limit", "1e-9", "--metrics", metrics, "-q")
    assert code == ExitCodes.TIME_LIMIT
    doc = json.loads(metrics.read_text(encoding="utf-8"))
    assert doc["complete"] is False


@pytest.mark.parametrize("algorithm", Algorithms.ALL)
def test_threads_do_not_change_output(tmp_path, algorithm):
    source = tmp_path / "motif.lg"
    source.write_text(serialize_database(motif_database()), encoding="utf-8")
    outputs = []
    for threads in (1, 4):
        pats, metrics, matrix = (tmp_path / f"p{threads}.lg", tmp_path / f"m{threads}.json",
                                 tmp_path / f"x{threads}.csv")
        assert run("mine", "--input", source, "--algo", algorithm, "--k", 2, "--emax", 2, "--threads", threads,
                   "--opt-candidate-cap", 60, "--output", pats, "--metrics", metrics, "--matrix", matrix,
                   "-q") == ExitCodes.OK
        doc = json.loads(metrics.read_text(encoding="utf-8"))
        for key in TIMING_KEYS + ("config",):
            doc.pop(key)
        outputs.append((pats.read_bytes(), matrix.read_bytes(), doc))
    assert outputs[0] == outputs[1]
