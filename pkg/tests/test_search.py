from __future__ import annotations

import json

import pytest
from hypothesis import given, settings, strategies as st

from sidonlab.errors import CapExceeded, TimeBudgetExceeded
from sidonlab.search import (
    EXACT,
    LOWER_BOUND,
    SearchConfig,
    brute_force_oracle,
    clear_cache,
    max_bstar_subset,
    max_feasible_size,
    max_modular,
    min_n_for_size,
    min_n_witness,
    modular_size_refuted,
    shortest_sidon,
    sidon_size_refuted,
)
from sidonlab.sets import IntegerSet, ModularSet
from sidonlab.verify import is_bstar, is_bstar_mod

PLAIN = SearchConfig(symmetry=False, bounds=False)


@pytest.mark.parametrize("h,g", [(2, 2), (2, 3), (2, 4), (3, 6), (3, 4), (2, 1)])
def test_R_matches_oracle_with_counts(h, g):
    for n in range(1, 12):
        oracle = brute_force_oracle(n, h, g)
        res = max_bstar_subset(n, h, g, SearchConfig(mode="all"))
        assert res.optimum == oracle.optimum
        assert res.count == oracle.count
        assert tuple(w.elements for w in res.witnesses) == tuple(w.elements for w in oracle.witnesses)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_C_matches_oracle_with_counts(g):
    for n in range(1, 12):
        oracle = brute_force_oracle(n, 2, g, modular=True)
        res = max_modular(n, 2, g, SearchConfig(mode="all"))
        assert res.optimum == oracle.optimum
        # optimal sets through 0 versus all optimal sets: each set has k translates through 0
        k = oracle.optimum
        with_zero = [w for w in oracle.witnesses if 0 in w.elements]
        assert res.count == len(with_zero) == oracle.count * k // n
        assert {w.elements for w in res.witnesses} == {w.elements for w in with_zero}


def test_C_general_h_matches_oracle():
    for n in range(1, 11):
        assert max_modular(n, 3, 6).optimum == brute_force_oracle(n, 3, 6, modular=True).optimum


@pytest.mark.parametrize("h,g", [(2, 2), (2, 3), (3, 6)])
def test_pruning_switches_do_not_change_results(h, g):
    for n in range(1, 16):
        assert max_bstar_subset(n, h, g).optimum == max_bstar_subset(n, h, g, PLAIN).optimum
    for n in range(1, 14):
        assert max_modular(n, h, g).optimum == max_modular(n, h, g, PLAIN).optimum


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.sampled_from([(2, 2), (2, 3), (2, 4), (3, 6)]))
def test_witnesses_are_valid(n, hg):
    h, g = hg
    res = max_bstar_subset(n, h, g)
    (w,) = res.witnesses
    assert len(w) == res.optimum and all(1 <= a <= n for a in w)
    assert is_bstar(w, h, g)
    m = max_modular(min(n, 24), h, g)
    assert len(m.witnesses[0]) == m.optimum and is_bstar_mod(m.witnesses[0], h, g, min(n, 24))


@pytest.mark.parametrize("g", [2, 3, 4])
def test_R_monotone_with_unit_steps(g):
    vals = [max_bstar_subset(n, 2, g).optimum for n in range(1, 60 if g < 4 else 40)]
    for a, b in zip(vals, vals[1:]):
        assert a <= b <= a + 1


@pytest.mark.parametrize("g,k", [(2, 6), (3, 7), (4, 8), (5, 6)])
def test_min_n_consistent_with_R(g, k):
    n = min_n_for_size(2, g, k)
    assert max_bstar_subset(n, 2, g).optimum >= k
    assert max_bstar_subset(n - 1, 2, g).optimum < k
    w = min_n_witness(2, g, k)
    assert len(w) == k and max(w) <= n and is_bstar(w, 2, g)


def test_feasibility_caps():
    assert max_feasible_size(2, 1) == 1
    assert max_feasible_size(3, 3) == 2  # {a, b} has counts 1 and 3
    assert max_feasible_size(3, 5) == 2  # a third element forces 3! = 6
    assert max_feasible_size(2, 2) is None
    assert brute_force_oracle(8, 3, 3).optimum == 2
    with pytest.raises(ValueError):
        min_n_for_size(3, 3, 3)


def test_shortest_small():
    res = shortest_sidon(6, SearchConfig(mode="all"))
    assert res.optimum == 17 and res.count == 4 and res.exact
    for w in res.witnesses:
        assert w[0] == 0 and w[-1] == 17 and is_bstar(w, 2, 2)
        assert w.elements <= w.reflected().elements
    cnt = shortest_sidon(6, SearchConfig(mode="count"))
    assert cnt.count == 4 and cnt.witnesses == ()


def test_shortest_without_symmetry_finds_both_mirrors():
    res = shortest_sidon(5, SearchConfig(mode="all", symmetry=False))
    assert res.count == 2  # still reported once per mirror pair


def test_parallel_matches_serial():
    serial = shortest_sidon(9, SearchConfig(mode="all"))
    clear_cache()
    par = shortest_sidon(9, SearchConfig(mode="all", workers=2))
    assert par.optimum == serial.optimum == 44
    assert [w.elements for w in par.witnesses] == [w.elements for w in serial.witnesses]
    clear_cache()
    assert max_bstar_subset(30, 2, 3, SearchConfig(workers=2)).optimum == max_bstar_subset(30, 2, 3).optimum


def test_budget_exhaustion_gives_lower_bound():
    clear_cache()
    with pytest.raises(TimeBudgetExceeded) as ei:
        shortest_sidon(14, SearchConfig(time_budget=0.2))
    partial = ei.value.partial
    assert partial.status == LOWER_BOUND and not partial.exact
    assert partial.optimum <= 127
    with pytest.raises(TimeBudgetExceeded) as ei:
        max_bstar_subset(400, 2, 2, SearchConfig(time_budget=0.2))
    p = ei.value.partial
    assert p.status == LOWER_BOUND and is_bstar(p.witnesses[0], 2, 2) and len(p.witnesses[0]) == p.optimum


def test_budget_from_environment(monkeypatch):
    clear_cache()
    monkeypatch.setenv("SIDONLAB_BUDGET_SECS", "0.1")
    with pytest.raises(TimeBudgetExceeded):
        shortest_sidon(14)


def test_checkpoint_resume_matches_uninterrupted(tmp_path):
    clear_cache()
    straight = shortest_sidon(11, SearchConfig(mode="all"))
    path = str(tmp_path / "ck.json")
    cfg = SearchConfig(mode="all", time_budget=0.3, checkpoint=path, chunk_nodes=1 << 14)
    rounds = 0
    while True:
        clear_cache()  # a fresh process would start with an empty table
        rounds += 1
        try:
            res = shortest_sidon(11, cfg)
            break
        except TimeBudgetExceeded:
            data = json.load(open(path))
            assert data["format"] == "sidonlab-checkpoint" and data["k"] == 11
        assert rounds < 200
    assert rounds > 1
    assert res.optimum == straight.optimum == 72
    assert [w.elements for w in res.witnesses] == [w.elements for w in straight.witnesses]
    done = json.load(open(path))
    assert done["complete"] and done["phase"] == "done"


def test_checkpoint_for_other_k_is_rejected(tmp_path):
    path = str(tmp_path / "ck.json")
    shortest_sidon(5, SearchConfig(checkpoint=path))
    with pytest.raises(ValueError):
        shortest_sidon(6, SearchConfig(checkpoint=path))


def test_sidon_size_refuted_matches_oracle():
    clear_cache()
    for n in range(1, 19):
        best = brute_force_oracle(n, 2, 2).optimum
        assert not sidon_size_refuted(best, n)
        assert sidon_size_refuted(best + 1, n)


def test_modular_size_refuted_matches_optimum():
    for g in (2, 4):
        for n in range(1, 30):
            best = max_modular(n, 2, g).optimum
            assert not modular_size_refuted(best, n, 2, g)
            assert modular_size_refuted(best + 1, n, 2, g)


def test_oracle_cap_and_arguments():
    with pytest.raises(CapExceeded):
        brute_force_oracle(26)
    with pytest.raises(ValueError):
        max_bstar_subset(0)
    with pytest.raises(ValueError):
        shortest_sidon(1)
    with pytest.raises(ValueError):
        SearchConfig(mode="some")


def test_results_carry_types_and_stats():
    r = max_bstar_subset(20)
    assert r.status == EXACT and isinstance(r.witnesses[0], IntegerSet) and r.stats.nodes >= 0
    c = max_modular(21)
    assert isinstance(c.witnesses[0], ModularSet) and c.optimum == 5  # Singer set for q = 4
