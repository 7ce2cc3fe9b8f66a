import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ccnet import (DisconnectedTopologyError, SafeSetSystem, StrictMetric, Topology, all_pairs_distances,
                   gen_minrep_cc, validate_instance)
from ccnet.generators import MinRepInstance, random_topology
from ccnet.instance import as_fraction

from conftest import all_pairs_system, bellman_ford


def test_triangle_unit_weights():
    m = all_pairs_distances(Topology(3, ((0, 1, 1), (1, 2, 1), (0, 2, 1))))
    assert all(m.dist[u][v] == 1 for u in range(3) for v in range(3) if u != v)


def test_path_distance_adds_up():
    m = all_pairs_distances(Topology(3, ((0, 1, 2), (1, 2, 3))))
    assert m.dist[0][2] == 5


@pytest.mark.parametrize("seed", range(8))
def test_distances_match_bellman_ford(seed):
    topo = random_topology(6, seed)
    m = all_pairs_distances(topo)
    assert [list(r) for r in m.dist] == bellman_ford(topo)


def test_rational_weights_stay_exact():
    m = all_pairs_distances(Topology(3, ((0, 1, "1/3"), (1, 2, "0.1"))))
    assert m.dist[0][2] == Fraction(13, 30)


def test_disconnected_topology_raises():
    with pytest.raises(DisconnectedTopologyError):
        all_pairs_distances(Topology(3, ((0, 1, 1),)))


@pytest.mark.parametrize("edges", [((0, 0, 1),), ((0, 1, 0),), ((0, 5, 1),), ((0, 1, 1), (1, 0, 2))])
def test_bad_topologies_rejected(edges):
    with pytest.raises(ValueError):
        Topology(3, edges)


def test_metric_rejects_asymmetry():
    with pytest.raises(ValueError):
        StrictMetric(2, ((0, 1), (2, 0)))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.integers(0, 10 ** 6))
def test_metric_properties(n, seed):
    m = all_pairs_distances(random_topology(n, seed, max_weight=3))
    assert m.triangle_violations() == []
    # the tie-broken order is a strict total order on ordered pairs
    ranks = sorted(int(r) for r in m.rank.flatten() if r >= 0)
    assert ranks == list(range(n * (n - 1)))
    for u, v, w in itertools.permutations(range(n), 3):
        assert m.closer(u, v, w) != m.closer(u, w, v)


def test_tiebreak_prefers_smaller_pair():
    m = all_pairs_distances(Topology(3, ((0, 1, 1), (1, 2, 1), (0, 2, 1))))
    assert m.closer(1, 0, 2)  # d equal, {0,1} < {1,2}
    assert m.closest(2, [0, 1]) == 0


def test_validate_single_demand():
    sys_ = SafeSetSystem(2, frozenset({(0, 1)}), ((0, 1),), {(0, 1): {0, 1}})
    assert validate_instance(sys_).feasible
    empty = sys_.with_base(())
    rep = validate_instance(empty)
    assert not rep.feasible and rep.failures == [(0, 1)]


def test_validate_minrep_instance():
    mr = MinRepInstance((("a", "b"),), (("c",),), (("a", "c"),), 1)
    assert validate_instance(gen_minrep_cc(mr)).feasible


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.data())
def test_complete_base_always_feasible(n, data):
    def safe(d):
        extra = data.draw(st.sets(st.integers(0, n - 1)))
        return frozenset(extra) | set(d)
    assert validate_instance(all_pairs_system(n, safe)).feasible


def test_safe_set_must_hold_endpoints():
    with pytest.raises(ValueError):
        SafeSetSystem(3, frozenset({(0, 1)}), ((0, 1),), {(0, 1): {0, 2}})


def test_as_fraction_forms():
    assert as_fraction("3/4") == Fraction(3, 4)
    assert as_fraction(0.1) == Fraction(1, 10)
    assert as_fraction("2.5") == Fraction(5, 2)
