"""Brute-force exact optimum for tiny instances, used as ground truth.

Only useful edges (both endpoints in some demand's safe set) are
considered. Demands whose safe set is just their two endpoints force the
direct edge, so forced edges are always taken and only the rest is
enumerated. The budget bounds the number of enumerated edges.
"""

import itertools
import time
from dataclasses import dataclass

from .instance import CCError, InfeasibleInstanceError, Overlay, SafeSetSystem, validate_instance


class OracleOutOfRange(CCError):
    """Instance too large (or too slow) for exhaustive search."""


@dataclass(frozen=True)
class OracleBudget:
    max_useful_edges: int = 24
    max_subset_size: int = 12
    time_limit: float = 120.0  # seconds

    def __post_init__(self):
        if self.max_useful_edges <= 0 or self.max_subset_size <= 0 or self.time_limit <= 0:
            raise ValueError("budget values must be positive")


def useful_edges(sys: SafeSetSystem):
    out = set()
    for d in sys.demands:
        out.update(sys.safe_edges(d))
    return sorted(out)


class _Search:
    def __init__(self, sys, budget):
        report = validate_instance(sys)
        if not report.feasible:
            raise InfeasibleInstanceError(report.failures)
        self.sys = sys
        self.budget = budget
        self.deadline = time.monotonic() + budget.time_limit
        forced = set()
        for d in sys.demands:
            if len(sys.safe[d]) == 2:
                forced.add(tuple(sorted(d)))
        self.forced = sorted(forced)
        self.free = [e for e in useful_edges(sys) if e not in forced]
        if len(self.free) > budget.max_useful_edges:
            raise OracleOutOfRange(f"oracle out of range: {len(self.free)} candidate edges "
                                   f"(budget {budget.max_useful_edges})")
        # per demand: forced edges and candidate indices inside its safe set
        self.checks = []
        for d in sys.demands:
            s = sys.safe[d]
            if len(s) == 2:
                continue
            fe = [e for e in self.forced if e[0] in s and e[1] in s]
            idx = [i for i, e in enumerate(self.free) if e[0] in s and e[1] in s]
            self.checks.append((d, fe, idx))
        self.ticks = 0

    def tick(self):
        self.ticks += 1
        if self.ticks & 0xFFF == 0 and time.monotonic() > self.deadline:
            raise OracleOutOfRange("oracle out of range: time limit exceeded")

    def _demand_ok(self, check, chosen):
        (u, v), fe, idx = check
        parent = {}

        def find(a):
            while parent.get(a, a) != a:
                a = parent[a]
            return a

        for a, b in fe:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        for i in idx:
            if i in chosen:
                a, b = self.free[i]
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
        return find(u) == find(v)

    def feasible(self, chosen):
        """chosen: set of free-edge indices. Failing demands move to the front."""
        for pos, check in enumerate(self.checks):
            if not self._demand_ok(check, chosen):
                if pos:
                    self.checks.insert(0, self.checks.pop(pos))
                return False
        return True

    def overlay(self, chosen, **prov):
        edges = set(self.forced) | {self.free[i] for i in chosen}
        return Overlay(frozenset(edges), {"solver": "oracle", **prov})

    def min_size(self, degree_cap=None):
        """Smallest feasible subset (lexicographic first), optionally degree-capped."""
        base_deg = {}
        for a, b in self.forced:
            base_deg[a] = base_deg.get(a, 0) + 1
            base_deg[b] = base_deg.get(b, 0) + 1
        if degree_cap is not None and base_deg and max(base_deg.values()) > degree_cap:
            return None
        m = len(self.free)
        for k in range(m + 1):
            if k > self.budget.max_subset_size:
                raise OracleOutOfRange(f"oracle out of range: optimum needs more than "
                                       f"{self.budget.max_subset_size} enumerated edges")
            for combo in itertools.combinations(range(m), k):
                self.tick()
                if degree_cap is not None and not self._degree_ok(combo, base_deg, degree_cap):
                    continue
                chosen = set(combo)
                if self.feasible(chosen):
                    return chosen
        return None

    def _degree_ok(self, combo, base_deg, cap):
        deg = dict(base_deg)
        for i in combo:
            for w in self.free[i]:
                deg[w] = deg.get(w, 0) + 1
                if deg[w] > cap:
                    return False
        return True

    def exists_with_degree(self, cap):
        """Depth-first include/exclude search for any feasible subset of max degree <= cap."""
        deg = {}
        for a, b in self.forced:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        if deg and max(deg.values()) > cap:
            return False
        m = len(self.free)
        chosen = set()

        def rec(i):
            self.tick()
            # optimistic graph: chosen plus every undecided edge
            optimistic = chosen | set(range(i, m))
            if not self.feasible(optimistic):
                return False
            if i == m:
                return True
            a, b = self.free[i]
            if deg.get(a, 0) < cap and deg.get(b, 0) < cap:
                chosen.add(i)
                deg[a] = deg.get(a, 0) + 1
                deg[b] = deg.get(b, 0) + 1
                if rec(i + 1):
                    return True
                chosen.discard(i)
                deg[a] -= 1
                deg[b] -= 1
            return rec(i + 1)

        return rec(0)


def oracle_min(sys: SafeSetSystem, variant="sum", budget: OracleBudget = None) -> Overlay:
    """Exact optimum: fewest edges (sum) or smallest maximum degree (degree).

    For the degree variant the returned overlay has the fewest edges among
    those attaining the optimal maximum degree.
    """
    budget = budget or OracleBudget()
    search = _Search(sys, budget)
    if variant == "sum":
        chosen = search.min_size()
        if chosen is None:
            raise InfeasibleInstanceError([], "no feasible subset found")
        return search.overlay(sorted(chosen), variant="sum", value=len(search.forced) + len(chosen))
    if variant != "degree":
        raise ValueError(f"unknown variant {variant!r}")
    lo, hi = 1, max(1, sys.n - 1)
    if not search.exists_with_degree(hi):
        raise InfeasibleInstanceError([], "no feasible subset found")
    while lo < hi:
        mid = (lo + hi) // 2
        if search.exists_with_degree(mid):
            hi = mid
        else:
            lo = mid + 1
    chosen = search.min_size(degree_cap=lo)
    return search.overlay(sorted(chosen), variant="degree", value=lo)


def oracle_value(sys, variant="sum", budget=None):
    ov = oracle_min(sys, variant, budget)
    return ov.provenance["value"]
