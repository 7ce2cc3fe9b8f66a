import math

import numpy as np
import pytest

from ccnet import Overlay, SafeSetSystem, build_flow_lp, round_and_sample, solve_lp, verify_safe_paths
from ccnet.generators import gen_laminar_hierarchical, gen_unique_games_gap, ug_lp_bound
from ccnet.lp import (inclusion_probability, lp_value, max_residual, read_assignment, read_lp_text,
                      write_assignment, write_lp_text)
from ccnet.oracle import oracle_value
from ccnet.simplex import LpInfeasibleError, LpUnboundedError, simplex_solve

from conftest import all_pairs_system, cut_lp_value, random_ibgp


def single_edge():
    return SafeSetSystem(2, frozenset({(0, 1)}), ((0, 1),), {(0, 1): {0, 1}})


@pytest.mark.parametrize("engine", ["highs", "simplex"])
def test_forced_edge(engine):
    sol = solve_lp(build_flow_lp(single_edge()), engine)
    assert sol.capacities[(0, 1)] == pytest.approx(1.0)
    assert sol.objective == pytest.approx(1.0)


@pytest.mark.parametrize("engine", ["highs", "simplex"])
def test_triangle_value_is_three_halves(engine, k3):
    # half capacity on each edge gives every cut capacity 1; the cut LP agrees
    assert cut_lp_value(k3) == pytest.approx(1.5, abs=1e-9)
    assert lp_value(k3, engine=engine) == pytest.approx(1.5, abs=1e-9)


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("variant", ["sum", "degree"])
def test_flow_lp_equals_cut_lp(seed, variant):
    sys_ = random_ibgp(4 + seed % 2, seed)
    assert lp_value(sys_, variant) == pytest.approx(cut_lp_value(sys_, variant), abs=1e-7)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("variant", ["sum", "degree"])
def test_simplex_matches_highs(seed, variant):
    lp = build_flow_lp(random_ibgp(5, seed), variant)
    a, b = solve_lp(lp, "highs"), solve_lp(lp, "simplex")
    assert a.objective == pytest.approx(b.objective, abs=1e-7)


def test_simplex_small_programs():
    # max x + y st x + 2y <= 4, 3x + y <= 6
    x, obj = simplex_solve(np.array([-1.0, -1.0]), A_ub=np.array([[1.0, 2.0], [3.0, 1.0]]),
                           b_ub=np.array([4.0, 6.0]), bounds=[(0, None), (0, None)])
    assert obj == pytest.approx(-2.8) and x == pytest.approx([1.6, 1.2])
    with pytest.raises(LpInfeasibleError):
        simplex_solve(np.array([1.0]), A_eq=np.array([[1.0]]), b_eq=np.array([-1.0]), bounds=[(0, None)])
    with pytest.raises(LpUnboundedError):
        simplex_solve(np.array([-1.0]), A_ub=np.array([[-1.0]]), b_ub=np.array([0.0]), bounds=[(0, None)])


@pytest.mark.parametrize("seed", range(6))
def test_lp_below_optimum(seed):
    sys_ = random_ibgp(4 + seed % 2, seed)
    for variant in ("sum", "degree"):
        assert lp_value(sys_, variant) <= oracle_value(sys_, variant) + 1e-6


def test_gap_instance_bound():
    sys_, _ = gen_unique_games_gap(4, d=2, k=3, seed=0)
    assert lp_value(sys_) <= ug_lp_bound(4, 3, 2) + 1e-6


def test_flow_variables_stay_in_safe_sets():
    sys_ = gen_laminar_hierarchical(6, seed=2, branching=3)
    lp = build_flow_lp(sys_)
    for d, cols in lp.flow_index.items():
        for a, b in cols:
            assert a in sys_.safe[d] and b in sys_.safe[d]
    for name in lp.var_names:
        if name.startswith("f_"):
            head, arc = name[2:].split("__")
            x, y = map(int, head.split("_"))
            assert set(map(int, arc.split("_"))) <= sys_.safe[(x, y)]


def test_lp_text_round_trip():
    lp = build_flow_lp(random_ibgp(4, 1), "degree")
    obj, rows, bounds = read_lp_text(write_lp_text(lp))
    assert len(rows) == lp.num_rows and len(bounds) == lp.num_vars
    assert obj == {"lam": 1.0}
    index = {n: i for i, n in enumerate(lp.var_names)}
    eq = [r for r in rows if r[2] == "="]
    for r, (name, coeffs, _, rhs) in enumerate(eq):
        dense = np.zeros(lp.num_vars)
        for var, val in coeffs.items():
            dense[index[var]] = val
        assert np.allclose(dense, lp.A_eq.toarray()[r]) and rhs == lp.b_eq[r]


def test_assignment_round_trip():
    lp = build_flow_lp(random_ibgp(4, 2))
    sol = solve_lp(lp)
    back = read_assignment(write_assignment(lp, sol), lp)
    assert back.objective == pytest.approx(sol.objective)
    assert back.capacities == pytest.approx(sol.capacities)
    with pytest.raises(ValueError):
        read_assignment("c_0_1 0.5\n", lp)  # flows missing


def test_solution_satisfies_program():
    lp = build_flow_lp(random_ibgp(5, 3))
    sol = solve_lp(lp)
    x = np.zeros(lp.num_vars)
    x[list(lp.cap_index.values())] = list(sol.capacities.values())
    for d, cols in lp.flow_index.items():
        for arc, val in sol.flows[d].items():
            x[cols[arc]] = val
    assert max_residual(lp, x) <= 1e-9


def test_unit_capacity_always_kept():
    assert inclusion_probability(1.0, 10) == 1.0
    sys_ = single_edge()
    sol = solve_lp(build_flow_lp(sys_))
    for seed in range(20):
        assert round_and_sample(sys_, sol, seed=seed).edges == {(0, 1)}


def test_rounding_is_seeded():
    sys_ = random_ibgp(8, 4)
    sol = solve_lp(build_flow_lp(sys_))
    a = round_and_sample(sys_, sol, seed=11)
    assert a.edges == round_and_sample(sys_, sol, seed=11).edges


@pytest.mark.parametrize("variant", ["sum", "degree"])
def test_rounding_mostly_feasible(variant):
    sys_ = random_ibgp(8, 6)
    sol = solve_lp(build_flow_lp(sys_, variant), "highs")
    ok = sum(verify_safe_paths(sys_, round_and_sample(sys_, sol, variant, seed=s)).ok for s in range(30))
    assert ok >= 27


def test_rounding_cost_bound():
    sys_ = random_ibgp(9, 8)
    sol = solve_lp(build_flow_lp(sys_))
    n = sys_.n
    for seed in range(10):
        ov = round_and_sample(sys_, sol, seed=seed)
        phase1 = ov.provenance["phase1_edges"]
        assert phase1 <= len(sys_.base_edges)
        # phase 1 keeps only edges with positive capacity
        assert phase1 <= sum(1 for c in sol.capacities.values() if c > 0)
        assert ov.provenance["expected_phase1"] <= 12 * math.sqrt(n) * math.log(n) * sol.objective + 1e-9


def test_infeasible_instance_rejected():
    from ccnet import InfeasibleInstanceError
    with pytest.raises(InfeasibleInstanceError):
        build_flow_lp(single_edge().with_base(()))


def test_all_pairs_lp_is_half_per_edge_on_k4():
    # on K_n with S = V the LP can spread n/2 over the edges
    assert lp_value(all_pairs_system(4)) == pytest.approx(2.0, abs=1e-9)
