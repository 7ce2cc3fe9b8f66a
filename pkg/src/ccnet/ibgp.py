"""iBGP semantics: safe sets from a metric, static verification, protocol simulation.

The static check asks, for every ordered pair (x, y), for an overlay path
from y to x that stays inside S(x, y). The simulator runs the hot-potato
route selection itself so the two views can be compared.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from ._graph import adjacency, restricted_path
from .instance import CCError, Overlay, SafeSetSystem, StrictMetric, complete_graph_edges

EXHAUSTIVE_LIMIT = 16


@dataclass
class VerificationReport:
    ok: bool
    failures: list
    witness_paths: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


@dataclass
class RouteAssignment:
    """Outcome of one protocol run for a fixed egress set.

    ``chosen[r]`` is the egress of the route r settled on (None if it has no
    route). ``next_hop[r]`` is the overlay neighbor it learned the route from
    (r itself for egress routers). ``converged`` is False when the run
    revisited a global state without reaching a fixpoint.
    """

    egress_set: frozenset
    chosen: dict
    next_hop: dict
    converged: bool
    passes: int


def far_sets(metric: StrictMetric, x):
    """Yield (y, D(x, y)) for every y != x, farthest y first."""
    rank = metric.rank
    others = [w for w in range(metric.n) if w != x]
    others.sort(key=lambda w: rank[x, w], reverse=True)
    farther = []
    for y in others:
        yield y, list(farther)
        farther.append(y)


def derive_ibgp_safe_sets(metric: StrictMetric) -> SafeSetSystem:
    """Safe sets S(x, y) = {w : d(w, y) < d(w, D(x, y))} + {y} over K_n."""
    n = metric.n
    rank = metric.rank
    big = np.iinfo(np.int64).max
    safe = {}
    for x in range(n):
        # nearest member of D(x, y) for every w, maintained as D grows
        nearest_far = np.full(n, big, dtype=np.int64)
        order = sorted((w for w in range(n) if w != x), key=lambda w: rank[x, w], reverse=True)
        for y in order:
            members = np.flatnonzero(rank[:, y] < nearest_far)
            s = frozenset(int(w) for w in members) | {y}
            if x not in s:
                raise CCError(f"internal error: {x} missing from S({x},{y})")
            safe[(x, y)] = s
            np.minimum(nearest_far, rank[:, y], out=nearest_far)
    demands = tuple((x, y) for x in range(n) for y in range(n) if x != y)
    return SafeSetSystem(n, complete_graph_edges(n), demands, safe, metric.names)


def verify_safe_paths(sys: SafeSetSystem, overlay: Overlay) -> VerificationReport:
    """Check each demand has an overlay path inside its safe set.

    Witness paths run from the demand's second endpoint to its first, the
    direction in which the route is announced.
    """
    outside = overlay.outside(sys)
    if outside:
        raise ValueError(f"overlay edges not in the base graph: {outside[:5]}")
    adj = adjacency(sys.n, overlay.sorted_edges())
    failures = []
    witnesses = {}
    for d in sys.demands:
        x, y = d
        path = restricted_path(adj, y, x, sys.safe[d])
        if path is None:
            failures.append(d)
        else:
            witnesses[d] = path
    return VerificationReport(not failures, failures, witnesses)


def _route_of(next_hop, r):
    """Follow next-hop pointers from r. Returns (egress, hops, chain) or None."""
    chain = [r]
    a = r
    while True:
        nh = next_hop[a]
        if nh is None:
            return None
        if nh == a:
            return a, len(chain) - 1, chain
        a = nh
        if a in chain:  # cannot happen while every update rejects looping routes
            return None
        chain.append(a)


def simulate_ibgp(metric: StrictMetric, overlay: Overlay, egress_set, order=None) -> RouteAssignment:
    """Round-robin hot-potato route selection over the overlay.

    A route is identified by its egress and the overlay path it was
    announced along; each router holds the latest route of each neighbor,
    discards routes whose path already contains itself, and picks the one
    whose egress is closest to it (then fewest hops, then lowest neighbor
    id). Egress routers always keep their own route. The run stops once a
    full pass changes nothing, or flags non-convergence if a global state
    repeats.
    """
    n = metric.n
    egress_set = frozenset(egress_set)
    if not egress_set:
        raise ValueError("egress set must be nonempty")
    rank = metric.rank
    adj = adjacency(n, overlay.sorted_edges())
    next_hop = [None] * n
    for e in egress_set:
        next_hop[e] = e
    routers = list(order) if order is not None else list(range(n))
    movable = [r for r in routers if r not in egress_set]

    seen = {tuple(next_hop)}
    passes = 0
    converged = True
    while True:
        passes += 1
        changed = False
        for r in movable:
            best = None
            best_nb = None
            for nb in adj[r]:
                route = _route_of(next_hop, nb)
                if route is None or r in route[2]:
                    continue
                cand = (rank[r, route[0]], route[1] + 1, nb)
                if best is None or cand < best:
                    best = cand
                    best_nb = nb
            if next_hop[r] != best_nb:
                next_hop[r] = best_nb
                changed = True
        if not changed:
            break
        state = tuple(next_hop)
        if state in seen:
            converged = False
            break
        seen.add(state)

    chosen = {}
    for r in range(n):
        route = _route_of(next_hop, r)
        chosen[r] = None if route is None else route[0]
    return RouteAssignment(egress_set, chosen, dict(enumerate(next_hop)), converged, passes)


def visibility_failures(metric: StrictMetric, assignment: RouteAssignment):
    """Routers that did not settle on their strictly closest egress."""
    rank = metric.rank
    bad = []
    members = sorted(assignment.egress_set)
    for r in range(metric.n):
        target = min(members, key=lambda e: rank[r, e])
        if not assignment.converged or assignment.chosen[r] != target:
            bad.append(r)
    return bad


def witness_egress_sets(metric: StrictMetric):
    """The egress sets D(x, y) + {y}, one per ordered pair."""
    for x in range(metric.n):
        for y, farther in far_sets(metric, x):
            yield (x, y), frozenset(farther) | {y}


def check_hot_potato(metric: StrictMetric, overlay: Overlay, mode="witness",
                     first_only=False) -> VerificationReport:
    """Simulate the protocol over many egress sets and report visibility failures.

    ``mode="witness"`` tries the n(n-1) sets D(x, y) + {y};
    ``mode="exhaustive"`` tries every nonempty vertex subset (n <= 16).
    Failures are (router, egress_set) pairs.
    """
    n = metric.n
    if mode == "exhaustive":
        if n > EXHAUSTIVE_LIMIT:
            raise ValueError(f"exhaustive mode supports n <= {EXHAUSTIVE_LIMIT}, got n={n}")
        sets = (frozenset(c) for k in range(1, n + 1)
                for c in itertools.combinations(range(n), k))
    elif mode == "witness":
        seen = set()
        sets = []
        for _, xf in witness_egress_sets(metric):
            if xf not in seen:
                seen.add(xf)
                sets.append(xf)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    failures = []
    for xf in sets:
        result = simulate_ibgp(metric, overlay, xf)
        for r in visibility_failures(metric, result):
            failures.append((r, xf))
            if first_only:
                return VerificationReport(False, failures)
    return VerificationReport(not failures, failures)
