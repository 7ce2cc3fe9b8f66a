"""
Hardness gadgets at desk scale
==============================

The reduction instances are small enough to solve exactly, so their
predicted structure can be checked directly.
"""

from ccnet import Overlay, derive_ibgp_safe_sets, verify_safe_paths
from ccnet.generators import (GadgetParams, HittingSetInstance, MinRepInstance, gadget_sidecar,
                              gadget_solution, gen_hitting_gadget, gen_minrep_cc, gen_unique_games_gap,
                              minrep_predicted_size, minrep_solution, ug_lp_bound)
from ccnet.lp import lp_value
from ccnet.oracle import oracle_value

# Hitting-set metric: the safe set of (x, b_j) is exactly the elements of T_j.
hs = HittingSetInstance(3, (frozenset({1, 2}), frozenset({2, 3}), frozenset({3})))
metric = gen_hitting_gadget(hs, GadgetParams(ell=2))
sys_ = derive_ibgp_safe_sets(metric)
names = metric.names
for key in gadget_sidecar(hs, metric)["predicted_safe_sets"]:
    x, b = map(int, key.split(","))
    print(f"S({names[x]},{names[b]}) =", sorted(names[w] for w in sys_.safe[(x, b)]))
sol = Overlay(frozenset(gadget_solution(hs, metric)))
print("hitting set", sorted(hs.min_hitting_set()), "-> overlay of", len(sol), "edges, valid:",
      verify_safe_paths(sys_, sol).ok)

# Min-Rep: the optimum equals K d + (super edges) + 2 m d + n.
mr = MinRepInstance((("a", "b"), ("c",)), (("p",), ("q", "r")),
                    (("a", "p"), ("b", "q"), ("c", "r"), ("c", "p")), d=1)
cc = gen_minrep_cc(mr)
reps = mr.min_rep()
print("\nMin-Rep labels", sorted(reps), "| predicted", minrep_predicted_size(mr, len(reps)),
      "| oracle", oracle_value(cc),
      "| forward solution valid:", verify_safe_paths(cc, Overlay(frozenset(minrep_solution(mr, cc, reps)))).ok)

# Unique Games gap instance: the flow LP sits below its explicit fractional bound.
ug_sys, ug = gen_unique_games_gap(4, d=2, k=3, seed=0)
print(f"\nUG gap instance: {ug_sys.n} vertices, LP {lp_value(ug_sys):.3f},",
      f"bound 2dn + kn + C(n,2) = {ug_lp_bound(4, 3, 2)}")
