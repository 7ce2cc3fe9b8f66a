import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ccnet import (Overlay, StrictMetric, check_hot_potato, derive_ibgp_safe_sets, gen_hitting_gadget,
                   gen_random_metric, simulate_ibgp, verify_safe_paths)
from ccnet.generators import GadgetParams, gadget_sidecar, gadget_solution, random_hitting_set
from ccnet.ibgp import visibility_failures
from ccnet.instance import complete_graph_edges

from conftest import naive_safe_sets


def random_overlay(n, rng, p=0.5):
    return Overlay(frozenset(e for e in itertools.combinations(range(n), 2) if rng.random() < p))


def test_two_routers():
    sys_ = derive_ibgp_safe_sets(StrictMetric(2, ((0, 3), (3, 0))))
    assert sys_.safe == {(0, 1): {0, 1}, (1, 0): {0, 1}}


@pytest.mark.parametrize("seed", range(10))
def test_safe_sets_match_definition(seed):
    m = gen_random_metric(5, seed, max_weight=4)
    assert derive_ibgp_safe_sets(m).safe == naive_safe_sets(m)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.integers(0, 10 ** 6))
def test_safe_sets_match_definition_property(n, seed):
    m = gen_random_metric(n, seed, max_weight=3)
    sys_ = derive_ibgp_safe_sets(m)
    assert sys_.safe == naive_safe_sets(m)
    for (x, y), s in sys_.safe.items():
        assert x in s and y in s


def test_gadget_safe_sets():
    hs = random_hitting_set(3, 3, seed=4)
    metric = gen_hitting_gadget(hs, GadgetParams())
    sys_ = derive_ibgp_safe_sets(metric)
    pred = gadget_sidecar(hs, metric)["predicted_safe_sets"]
    for key, members in pred.items():
        x, b = map(int, key.split(","))
        assert sorted(sys_.safe[(x, b)]) == members


def test_full_mesh_ok():
    sys_ = derive_ibgp_safe_sets(gen_random_metric(7, 3))
    assert verify_safe_paths(sys_, Overlay(complete_graph_edges(7))).ok


def test_empty_overlay_fails_everything():
    sys_ = derive_ibgp_safe_sets(gen_random_metric(5, 1))
    rep = verify_safe_paths(sys_, Overlay(frozenset()))
    assert sorted(rep.failures) == sorted(sys_.demands)


def test_witness_paths_stay_in_safe_sets():
    sys_ = derive_ibgp_safe_sets(gen_random_metric(6, 2))
    rep = verify_safe_paths(sys_, Overlay(complete_graph_edges(6)))
    for (x, y), path in rep.witness_paths.items():
        assert path[0] == y and path[-1] == x
        assert set(path) <= sys_.safe[(x, y)]


@pytest.mark.parametrize("variant", ["sum", "degree"])
def test_gadget_solution_verifies(variant):
    hs = random_hitting_set(3, 2, seed=7)
    metric = gen_hitting_gadget(hs, GadgetParams(ell=2, alpha=2), variant)
    sys_ = derive_ibgp_safe_sets(metric)
    assert verify_safe_paths(sys_, Overlay(frozenset(gadget_solution(hs, metric, variant=variant)))).ok


def test_single_egress_reaches_everyone():
    m = gen_random_metric(6, 5)
    path = Overlay(frozenset((i, i + 1) for i in range(5)))
    res = simulate_ibgp(m, path, {3})
    assert res.converged and all(res.chosen[r] == 3 for r in range(6))


@pytest.mark.parametrize("seed", range(5))
def test_full_mesh_picks_closest(seed):
    m = gen_random_metric(6, seed)
    rng = np.random.default_rng(seed)
    xf = {int(v) for v in rng.choice(6, size=3, replace=False)}
    res = simulate_ibgp(m, Overlay(complete_graph_edges(6)), xf)
    for r in range(6):
        assert res.chosen[r] == min(xf, key=lambda e: m.rank[r, e])


def _failing_line():
    line = Overlay(frozenset({(0, 1), (1, 2), (2, 3)}))
    for seed in range(200):
        m = gen_random_metric(4, seed)
        if not verify_safe_paths(derive_ibgp_safe_sets(m), line).ok:
            return m, line
    raise AssertionError("no failing line metric found")


def test_line_overlay_loses_visibility():
    m, line = _failing_line()
    assert not check_hot_potato(m, line, "witness").ok
    assert not check_hot_potato(m, line, "exhaustive").ok
    # the failing egress set fails under every activation order
    _, xf = check_hot_potato(m, line, "witness", first_only=True).failures[0]
    for order in itertools.permutations(range(4)):
        assert visibility_failures(m, simulate_ibgp(m, line, xf, order))


@pytest.mark.parametrize("seed", range(12))
def test_verdict_independent_of_order(seed):
    rng = np.random.default_rng(seed)
    n = 4 + seed % 2
    m = gen_random_metric(n, seed)
    ov = random_overlay(n, rng)
    correct = verify_safe_paths(derive_ibgp_safe_sets(m), ov).ok
    for k in (1, 2, 3):
        for xf in itertools.combinations(range(n), k):
            runs = [simulate_ibgp(m, ov, xf, order) for order in itertools.permutations(range(n))]
            verdicts = {bool(visibility_failures(m, r)) for r in runs}
            assert len(verdicts) == 1
            if correct:
                # every order lands on the same hot-potato choice
                assert len({tuple(sorted(r.chosen.items())) for r in runs}) == 1


def test_full_mesh_both_modes():
    m = gen_random_metric(6, 9)
    full = Overlay(complete_graph_edges(6))
    assert check_hot_potato(m, full, "witness").ok
    assert check_hot_potato(m, full, "exhaustive").ok


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.integers(0, 10 ** 6), st.floats(0.1, 0.9))
def test_static_check_equals_simulation(n, seed, p):
    m = gen_random_metric(n, seed)
    ov = random_overlay(n, np.random.default_rng(seed), p)
    ok = verify_safe_paths(derive_ibgp_safe_sets(m), ov).ok
    assert ok == check_hot_potato(m, ov, "exhaustive").ok
    assert ok == check_hot_potato(m, ov, "witness").ok


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 7), st.integers(0, 10 ** 6))
def test_adding_edges_is_monotone(n, seed):
    rng = np.random.default_rng(seed)
    sys_ = derive_ibgp_safe_sets(gen_random_metric(n, seed))
    ov = random_overlay(n, rng, 0.6)
    more = Overlay(ov.edges | random_overlay(n, rng, 0.3).edges)
    if verify_safe_paths(sys_, ov).ok:
        assert verify_safe_paths(sys_, more).ok


def test_exhaustive_mode_limit():
    m = gen_random_metric(17, 0)
    with pytest.raises(ValueError):
        check_hot_potato(m, Overlay(frozenset()), "exhaustive")


def test_overlay_outside_base_rejected():
    sys_ = derive_ibgp_safe_sets(gen_random_metric(3, 0)).with_base({(0, 1), (1, 2)})
    with pytest.raises(ValueError):
        verify_safe_paths(sys_, Overlay(frozenset({(0, 2)})))
