"""TED挖掘引擎测试：交换维护、PRM、IPS 与组合算法"""

import random
from fractions import Fraction

import pytest

from config import Algorithms, MiningConfig
from exceptions import CapacityError, ResourceLimitError, TimeLimitExceeded
from Ted_baselines.baselines import brute_force_optimal, run_algorithm
from Ted_dfs.dfs_enum import min_dfs_code
from Ted_embedding.subgraph_matcher import contains
from Ted_graph.graph_model import EdgeRef
from Ted_graph.synthetic import build_graph, random_database
from Ted_engine.ted_miner import TedMiner, ted, ted_base
from conftest import synthetic_pattern

AB = min_dfs_code(build_graph(0, "AB", [(0, 1)]))
AA = min_dfs_code(build_graph(0, "AA", [(0, 1)]))
AAB = min_dfs_code(build_graph(0, "AAB", [(0, 1), (1, 2)]))


def codes(result):
    return set(result.codes())


class CheckedMiner(TedMiner):
    """每次 PRM 判定时按集合运算重新计算左侧并比较"""

    def prm_admit(self, g, child):
        full = self.index.is_full
        admitted = super().prm_admit(g, child)
        if full:
            decision = self.audit_log[-1]
            covered = set()
            for p in self.index.patterns:
                covered |= p.cov.as_frozenset()
            universe = {EdgeRef(i, e) for i in g.containing_ids for e in range(self.db[i].num_edges)}
            if g in self.index:
                expected = len(universe - covered)
            else:
                expected = len(universe - (covered | g.cov.difference(child.cov).as_frozenset()))
            assert decision.left == expected
            assert decision.admitted == (expected >= decision.threshold)
        return admitted


def test_ted_base_fill_only(toy_db):
    result = ted_base(toy_db, MiningConfig(k=2, emax=1, alpha="1"))
    assert codes(result) == {AA, AB}
    assert result.total_coverage == 4
    assert result.coverage_rate == 1


def test_ted_base_single_slot_swaps_in_larger_edge(toy_db):
    result = ted_base(toy_db, MiningConfig(k=1, emax=1, alpha="1"))
    assert result.codes() == [AB]
    assert result.total_coverage == 3
    assert result.metrics.swaps == 1


def test_ted_base_on_toy(toy_db):
    result = ted_base(toy_db, MiningConfig(k=2, emax=3, alpha="1"))
    assert codes(result) == {AAB, AB}
    assert result.total_coverage == 4
    assert result.metrics.patterns_enumerated == 5
    assert result.complete


def test_prm_keeps_result_and_prunes(toy_db):
    cfg = MiningConfig(k=2, emax=3, alpha="1", algorithm=Algorithms.PRM)
    base = ted_base(toy_db, cfg)
    prm = ted(toy_db, cfg)
    assert codes(prm) == codes(base)
    assert prm.total_coverage == base.total_coverage
    assert prm.metrics.prm_pruned == 1
    assert prm.metrics.patterns_enumerated == 4


def test_full_ted_on_toy(toy_db):
    cfg = MiningConfig(k=2, emax=3, alpha="1", algorithm=Algorithms.TED)
    result = ted(toy_db, cfg)
    assert codes(result) == {AAB, AB}
    assert result.total_coverage == 4
    assert result.metrics.prm_pruned == 2
    assert result.total_coverage == brute_force_optimal(toy_db, cfg).total_coverage


def test_ips_initial(toy_db):
    miner = TedMiner(toy_db, MiningConfig(k=2, emax=1))
    assert [p.code for p in miner.ips_initial()] == [AB, AA]
    miner = TedMiner(toy_db, MiningConfig(k=2, emax=3))
    initial = miner.ips_initial()
    assert [p.code for p in initial] == [AAB, AB]
    assert [p.coverage for p in initial] == [3, 3]
    miner = TedMiner(toy_db, MiningConfig(k=5, emax=3))
    assert len(miner.ips_initial()) == 2


def test_pattern_maintain_swap_scenario(swap_scenario):
    miner = TedMiner(swap_scenario.db, swap_scenario.cfg)
    for p in (swap_scenario.g1, swap_scenario.p1, swap_scenario.p3):
        assert miner.pattern_maintain(p)
    assert miner.index.total_coverage == 33
    assert miner.index.min_loss() == (2, swap_scenario.g1)
    assert miner.index.benefit(swap_scenario.p2.cov) == 7

    assert miner.pattern_maintain(swap_scenario.p2)
    assert swap_scenario.g1 not in miner.index
    assert swap_scenario.p2 in miner.index
    assert miner.index.total_coverage == 38
    assert miner.metrics.swaps == 1


def test_pattern_maintain_noops(swap_scenario):
    miner = TedMiner(swap_scenario.db, swap_scenario.cfg)
    for p in (swap_scenario.g1, swap_scenario.p1, swap_scenario.p3):
        miner.pattern_maintain(p)
    before = miner.index.snapshot()
    assert not miner.pattern_maintain(swap_scenario.p1)
    redundant = synthetic_pattern("dup", {40, 41, 20})
    assert not miner.pattern_maintain(redundant)
    assert miner.index.snapshot() == before


def test_prm_fill_phase_and_vacuous_threshold(toy_db):
    miner = TedMiner(toy_db, MiningConfig(k=2, emax=3, alpha="1"), audit=True)
    aa = miner._new_enumerator().one_edge_patterns()[0]
    child = miner._new_enumerator().rightmost_extend(aa)[0]
    assert miner.prm_admit(aa, child)
    assert miner.audit_log == []

    # 两个覆盖集相同的模式：SCORE_L = 0，α = 1 时阈值为 0
    path = child
    triangle = miner._new_enumerator().rightmost_extend(path)[0]
    miner.index.insert(path)
    miner.index.insert(triangle)
    assert miner.prm_admit(aa, path)
    assert miner.audit_log[-1].threshold == 0


def test_prm_decisions_match_set_algebra():
    rng = random.Random(7)
    fired = 0
    for _ in range(40):
        db = random_database(rng)
        cfg = MiningConfig(k=rng.randint(1, 3), emax=3, alpha=rng.choice(["0", "0.5", "1"]))
        miner = CheckedMiner(db, cfg, use_prm=True, use_ips=rng.random() < 0.5, audit=True)
        result = miner.mine()
        pruned = [d for d in miner.audit_log if not d.admitted]
        assert len(pruned) == result.metrics.prm_pruned
        assert all(d.left < d.threshold for d in pruned)
        fired += bool(pruned)
    assert fired > 0


def test_result_invariants_and_bound():
    rng = random.Random(11)
    checked = 0
    while checked < 30:
        db = random_database(rng)
        cfg = MiningConfig(k=rng.randint(1, 3), emax=rng.choice([2, 3]), alpha=rng.choice(["0", "0.5", "1"]),
                           opt_candidate_cap=60)
        try:
            opt = brute_force_optimal(db, cfg)
        except CapacityError:
            continue
        checked += 1
        for algorithm in Algorithms.SWAPPING:
            result = ted(db, cfg.replace(algorithm=algorithm))
            assert len(result.patterns) <= cfg.k
            assert len(set(result.codes())) == len(result.patterns)
            for p in result.patterns:
                assert 1 <= p.num_edges <= cfg.emax
                assert p.containing_ids
                assert all(contains(p.graph, db[i]) for i in p.containing_ids)
            assert Fraction(result.total_coverage, opt.total_coverage) >= Fraction(1, 4)
            assert result.total_coverage <= opt.total_coverage


@pytest.mark.parametrize("algorithm", Algorithms.ALL)
def test_mining_is_deterministic(small_corpus, algorithm):
    cfg = MiningConfig(k=3, emax=3, algorithm=algorithm, opt_candidate_cap=60)
    for db in small_corpus[:10]:
        try:
            first = run_algorithm(db, cfg)
        except CapacityError:
            with pytest.raises(CapacityError):
                run_algorithm(db, cfg)
            continue
        second = run_algorithm(db, cfg)
        assert first.codes() == second.codes()
        assert [p.cov for p in first.patterns] == [p.cov for p in second.patterns]
        assert first.total_coverage == second.total_coverage
        assert first.metrics.prm_pruned == second.metrics.prm_pruned


def test_time_limit_returns_partial(small_corpus):
    cfg = MiningConfig(k=2, emax=4, time_limit=1e-9)
    with pytest.raises(TimeLimitExceeded) as info:
        ted_base(small_corpus[0], cfg)
    assert info.value.partial is not None
    assert not info.value.partial.complete


def test_embedding_guard_trips(toy_db):
    with pytest.raises(ResourceLimitError):
        ted_base(toy_db, MiningConfig(k=2, emax=3, embedding_guard=1))
