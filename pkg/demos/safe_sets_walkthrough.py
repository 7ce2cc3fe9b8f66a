"""
Safe sets and route visibility on a small network
=================================================

A six-router network, its iBGP safe sets, and what goes wrong when a
route-reflection overlay leaves a safe set uncovered.
"""

from ccnet import (Overlay, Topology, all_pairs_distances, check_hot_potato, derive_ibgp_safe_sets,
                   primal_dual_solve, simulate_ibgp, verify_safe_paths)
from ccnet.ibgp import visibility_failures

# Two triangles joined by a long link.
topo = Topology(6, ((0, 1, 1), (1, 2, 1), (0, 2, 2), (3, 4, 1), (4, 5, 1), (3, 5, 2), (2, 3, 5)))
metric = all_pairs_distances(topo)
print("distances from router 0:", [str(d) for d in metric.dist[0]])

# S(x, y) holds the routers that may relay y's route towards x.
sys_ = derive_ibgp_safe_sets(metric)
for y in range(1, 6):
    print(f"S(0,{y}) =", sorted(sys_.safe[(0, y)]))

# One route reflector at the far end, everybody else a client.
star = Overlay(frozenset((v, 5) for v in range(5)))
rep = verify_safe_paths(sys_, star)
print("\nstar at router 5 ok?", rep.ok, "- failing demands:", rep.failures[:6])

# Replay one failing demand in the protocol simulator.
hp = check_hot_potato(metric, star, "witness", first_only=True)
router, egress = hp.failures[0]
run = simulate_ibgp(metric, star, egress)
print(f"egress set {sorted(egress)}: router {router} settles on {run.chosen[router]},",
      f"closest is {metric.closest(router, egress)}")
print("routers missing their closest egress:", visibility_failures(metric, run))

# The primal-dual overlay fixes it with far fewer sessions than a full mesh.
ov, cert = primal_dual_solve(sys_)
print(f"\nprimal-dual overlay: {len(ov)} sessions (full mesh {6 * 5 // 2}),",
      f"dual lower bound {cert.dual_objective()}")
print("static check:", verify_safe_paths(sys_, ov).ok,
      "| every egress subset simulated:", check_hot_potato(metric, ov, "exhaustive").ok)
