"""PES-Index 维护、评分与交换判据测试"""

import random
from fractions import Fraction

import pytest

from exceptions import (AbsentPatternError, ConfigError, DuplicatePatternError, EmptyIndexError,
                        IndexCapacityError)
from Ted_dfs.dfs_enum import enum_all_subgraphs, materialize_pattern
from Ted_graph.graph_model import EdgeRef
from Ted_graph.synthetic import build_graph, random_database
from Ted_index.pes_index import PesIndex, benefit_score_naive, loss_score_naive, swap_decision


@pytest.fixture
def toy_patterns(toy_db):
    return {
        "AB": materialize_pattern(build_graph(0, "AB", [(0, 1)]), toy_db),
        "AA": materialize_pattern(build_graph(0, "AA", [(0, 1)]), toy_db),
        "ABA": materialize_pattern(build_graph(0, "ABA", [(0, 1), (1, 2)]), toy_db),
    }


def test_insert_sequence_on_toy(toy_patterns):
    idx = PesIndex(3)
    ab, aa, aba = toy_patterns["AB"], toy_patterns["AA"], toy_patterns["ABA"]

    idx.insert(ab)
    assert idx.total_coverage == 3
    assert idx.private_cov[ab.code] == 3
    assert idx.rcnt == {3: {ab.code}}

    idx.insert(aa)
    assert idx.total_coverage == 4
    assert idx.private_cov[aa.code] == 1
    assert idx.p_min == aa.code

    idx.insert(aba)
    assert idx.total_coverage == 4
    assert idx.private_cov[ab.code] == 1
    assert idx.private_cov[aba.code] == 0
    assert idx.rcov[EdgeRef(0, 1)] == {ab.code, aba.code}


def test_delete_releases_private_coverage(toy_patterns):
    idx = PesIndex.rebuild(3, [toy_patterns["AB"], toy_patterns["AA"], toy_patterns["ABA"]])
    idx.delete(toy_patterns["AB"])
    assert idx.private_cov[toy_patterns["ABA"].code] == 2
    assert idx.total_coverage == 3
    assert EdgeRef(1, 0) not in idx.rcov


def test_delete_inverts_insert(toy_patterns):
    idx = PesIndex.rebuild(3, [toy_patterns["AB"], toy_patterns["AA"]])
    before = idx.snapshot()
    idx.insert(toy_patterns["ABA"])
    idx.delete(toy_patterns["ABA"])
    assert idx.snapshot() == before


def test_precondition_errors(toy_patterns):
    idx = PesIndex(1)
    with pytest.raises(AbsentPatternError):
        idx.delete(toy_patterns["AB"])
    with pytest.raises(EmptyIndexError):
        idx.min_loss()
    idx.insert(toy_patterns["AB"])
    with pytest.raises(IndexCapacityError):
        idx.insert(toy_patterns["AA"])
    with pytest.raises(DuplicatePatternError):
        idx.swap(toy_patterns["AB"], toy_patterns["AB"])
    assert idx.patterns == [toy_patterns["AB"]]


def test_swap_scenario_scores(swap_scenario):
    idx = PesIndex.rebuild(3, [swap_scenario.g1, swap_scenario.p1, swap_scenario.p3])
    assert [idx.private_cov[p.code] for p in (swap_scenario.g1, swap_scenario.p1, swap_scenario.p3)] == [2, 10, 8]
    assert idx.total_coverage == 33
    assert idx.min_loss() == (2, swap_scenario.g1)
    assert idx.benefit(swap_scenario.p2.cov) == 7
    assert swap_decision(7, 2, Fraction(1), 33, 3)

    idx.swap(swap_scenario.g1, swap_scenario.p2)
    assert idx.total_coverage == 38
    assert idx.snapshot() == PesIndex.rebuild(3, idx.patterns).snapshot()


def test_min_loss_single_and_tied(toy_patterns, toy_db):
    idx = PesIndex.rebuild(2, [toy_patterns["AB"]])
    assert idx.min_loss() == (3, toy_patterns["AB"])

    # 覆盖集相同的两个模式：私有覆盖都为 0，取先插入者
    twin = materialize_pattern(build_graph(0, "AAB", [(0, 1), (0, 2), (1, 2)]), toy_db)
    path = materialize_pattern(build_graph(0, "AAB", [(0, 1), (1, 2)]), toy_db)
    assert twin.cov == path.cov
    idx = PesIndex.rebuild(2, [twin, path])
    assert idx.min_loss() == (0, twin)


def test_benefit_edge_cases(toy_patterns):
    idx = PesIndex(2)
    assert idx.benefit(toy_patterns["ABA"].cov) == 2
    idx.insert(toy_patterns["AB"])
    assert idx.benefit(toy_patterns["ABA"].cov) == 0


@pytest.mark.parametrize("args, expected", [
    ((7, 2, Fraction(1), 33, 3), True),
    ((4, 2, Fraction(1), 100, 3), False),
    ((5, 0, Fraction(0), 12, 3), True),
    ((4, 0, Fraction(0), 12, 3), False),
    ((3, 1, Fraction(1, 2), 4, 3), True),
])
def test_swap_decision(args, expected):
    assert swap_decision(*args) is expected


def test_swap_decision_is_exact():
    # 阈值 (1-α)·|Cov|/k 恰为 3
    assert not swap_decision(3, 0, "0.1", 10, 3)
    assert swap_decision(4, 0, "0.1", 10, 3)


@pytest.mark.parametrize("alpha", ["1.5", "-0.1"])
def test_swap_decision_rejects_alpha(alpha):
    with pytest.raises(ConfigError):
        swap_decision(1, 0, alpha, 1, 1)


def test_serialized_size_tracks_coverage(toy_patterns):
    idx = PesIndex(3)
    empty = idx.size_bytes()
    idx.insert(toy_patterns["AB"])
    assert idx.size_bytes() > empty
    assert isinstance(idx.serialize(), bytes)
    assert idx.maintenance_seconds >= 0


def test_naive_oracles_membership(toy_patterns):
    ab, aa = toy_patterns["AB"], toy_patterns["AA"]
    assert loss_score_naive([ab], ab) == 3
    assert benefit_score_naive([ab], aa) == 1
    with pytest.raises(AbsentPatternError):
        loss_score_naive([ab], aa)
    with pytest.raises(DuplicatePatternError):
        benefit_score_naive([ab], ab)


def test_random_operation_sequences_match_rebuild():
    rng = random.Random(99)
    pools = []
    while len(pools) < 20:
        pool = list(enum_all_subgraphs(random_database(rng), 3))
        if len(pool) >= 4:
            pools.append(pool)

    for _ in range(1000):
        pool = rng.choice(pools)
        k = rng.randint(1, 4)
        idx = PesIndex(k)
        for _ in range(rng.randint(1, 12)):
            resident = idx.patterns
            outside = [p for p in pool if p not in idx]
            choices = []
            if len(resident) < k and outside:
                choices.append("insert")
            if resident:
                choices.append("delete")
            if resident and outside and len(resident) == k:
                choices.append("swap")
            op = rng.choice(choices)
            if op == "insert":
                idx.insert(rng.choice(outside))
            elif op == "delete":
                idx.delete(rng.choice(resident))
            else:
                score_l, p_t = idx.min_loss()
                g = rng.choice(outside)
                score_b = idx.benefit(g.cov)
                before = idx.total_coverage
                accepted = swap_decision(score_b, score_l, 1, before, k)
                idx.swap(p_t, g)
                if accepted:
                    assert idx.total_coverage > before

            assert idx.snapshot() == PesIndex.rebuild(k, idx.patterns).snapshot()
            assert idx.total_coverage == len(set().union(*(p.cov.as_frozenset() for p in idx.patterns)))
            if idx.patterns:
                score_l, p_t = idx.min_loss()
                assert score_l == loss_score_naive(idx.patterns, p_t)
                assert score_l == min(loss_score_naive(idx.patterns, p) for p in idx.patterns)
            for g in outside[:3]:
                if g not in idx:
                    assert idx.benefit(g.cov) == benefit_score_naive(idx.patterns, g)
