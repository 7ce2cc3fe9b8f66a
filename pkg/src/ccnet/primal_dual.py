"""Moat-growing primal-dual solver for the edge-count objective.

Only demands with |S(u, v)| <= t are handled. Every ordered demand (u, v)
starts an active moat {u}; all active moats grow at unit rate until some
base edge's dual constraint (the total value of moats whose safe-set
boundary it crosses) reaches 1. That edge enters H, each active moat
crossing it is frozen, and the demand continues with a fresh moat equal to
u's component of H restricted to S(u, v), unless u and v are now joined.

All arithmetic is exact (:class:`fractions.Fraction`).
"""

import heapq
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from ._graph import norm_edge
from .instance import InfeasibleInstanceError, Overlay, SafeSetSystem, validate_instance
from .sampling import star_sample


@dataclass
class Moat:
    demand: tuple
    cut: frozenset
    start: Fraction
    end: Fraction = None  # None while active

    @property
    def active(self):
        return self.end is None

    def value(self, now=None):
        stop = self.end if self.end is not None else now
        return stop - self.start


@dataclass
class DualCertificate:
    t: int
    demands: list
    moats: list
    tight_edges: list  # [(edge, time)] in insertion order
    final_time: Fraction = Fraction(0)
    event_checks: list = field(default_factory=list)

    def dual_objective(self):
        return sum((m.value(self.final_time) for m in self.moats), Fraction(0))

    def edge_loads(self, sys: SafeSetSystem):
        """Total moat value crossing each base edge (the dual constraint's left side)."""
        loads = {e: Fraction(0) for e in sys.base_edges}
        for m in self.moats:
            val = m.value(self.final_time)
            if val == 0:
                continue
            for e in _boundary(sys, m.demand, m.cut):
                loads[e] += val
        return loads

    def to_json(self):
        return json.dumps({
            "t": self.t,
            "demands": [list(d) for d in self.demands],
            "dual_objective": str(self.dual_objective()),
            "final_time": str(self.final_time),
            "tight_edges": [{"edge": list(e), "time": str(tm)} for e, tm in self.tight_edges],
            "moats": [{"demand": list(m.demand), "cut": sorted(m.cut), "start": str(m.start),
                       "end": str(m.end if m.end is not None else self.final_time),
                       "value": str(m.value(self.final_time))} for m in self.moats],
        }, indent=1)


def _boundary(sys, demand, cut):
    """Base edges with one endpoint in ``cut`` and the other in S(demand) - cut."""
    outside = sys.safe[demand] - cut
    if sys.is_complete:
        return [norm_edge(a, b) for a in cut for b in outside]
    adj = sys.adjacency
    return [norm_edge(a, b) for a in cut for b in adj[a] if b in outside]


def _component(h_adj, start, allowed):
    seen = {start}
    stack = [start]
    while stack:
        w = stack.pop()
        for nb in h_adj[w]:
            if nb not in seen and nb in allowed:
                seen.add(nb)
                stack.append(nb)
    return frozenset(seen)


def small_demands(sys: SafeSetSystem, t):
    return [d for d in sys.demands if len(sys.safe[d]) <= t]


def primal_dual_solve(sys: SafeSetSystem, t=None, check_every_event=False):
    """Run the primal-dual algorithm on demands with safe sets of size <= t.

    Returns ``(overlay, certificate)``. With ``check_every_event`` the exact
    dual constraints are recomputed after every added edge and the maximum
    load is stored in ``certificate.event_checks``.
    """
    if t is None:
        t = sys.n
    demands = small_demands(sys, t)
    if demands:
        report = validate_instance(sys.restrict(demands))
        if not report.feasible:
            raise InfeasibleInstanceError(report.failures)

    now = Fraction(0)
    # Load of edge e at time T is rate[e] * T - offset[e]. Every moat starts
    # and stops at the current time, so a change of c crossing moats moves
    # the offset by c * now and the tight time is (1 + offset) / rate.
    rate = {}
    offset = {}
    crossers = {}
    moats = []
    active = {}  # moat id -> boundary edges
    in_h = set()
    h_adj = [[] for _ in range(sys.n)]
    tight = []
    checks = []
    heap = []

    def apply(delta):
        for e, c in delta.items():
            if c == 0:
                continue
            r = rate.get(e, 0) + c
            off = offset.get(e, Fraction(0)) + c * now
            rate[e] = r
            offset[e] = off
            if r > 0 and e not in in_h:
                heapq.heappush(heap, ((1 + off) / r, e, r, off))

    def activate(demand, cut, delta):
        mid = len(moats)
        moats.append(Moat(demand, cut, now))
        boundary = _boundary(sys, demand, cut)
        active[mid] = boundary
        for e in boundary:
            delta[e] = delta.get(e, 0) + 1
            crossers.setdefault(e, set()).add(mid)

    def deactivate(mid, delta):
        moats[mid].end = now
        for e in active.pop(mid):
            delta[e] = delta.get(e, 0) - 1
            crossers[e].discard(mid)

    delta = {}
    for d in demands:
        activate(d, frozenset([d[0]]), delta)
    apply(delta)

    while active:
        e = None
        while heap:
            when, cand, r, off = heapq.heappop(heap)
            # skip stale entries
            if cand not in in_h and rate.get(cand) == r and offset[cand] == off:
                e = cand
                break
        if e is None:
            # unreachable for feasible instances: an active moat always has a boundary edge
            raise InfeasibleInstanceError([moats[m].demand for m in active])
        now = when
        in_h.add(e)
        tight.append((e, now))
        w, z = e
        h_adj[w].append(z)
        h_adj[z].append(w)
        delta = {}
        for mid in sorted(crossers.get(e, ())):
            m = moats[mid]
            deactivate(mid, delta)
            u, v = m.demand
            comp = _component(h_adj, u, sys.safe[m.demand])
            if v not in comp:
                activate(m.demand, comp, delta)
        apply(delta)
        if check_every_event:
            checks.append(_max_load(sys, moats, now))

    cert = DualCertificate(t, demands, moats, tight, now, checks)
    overlay = Overlay(frozenset(in_h), {"solver": "pd", "t": t})
    return overlay, cert


def _max_load(sys, moats, now):
    loads = {}
    for m in moats:
        val = m.value(now)
        if val:
            for e in _boundary(sys, m.demand, m.cut):
                loads[e] = loads.get(e, Fraction(0)) + val
    return max(loads.values(), default=Fraction(0))


def dual_lower_bound(cert: DualCertificate) -> Fraction:
    """Total dual value; lower-bounds any solution feasible for the certificate's demands."""
    return cert.dual_objective()


def theory_t(n):
    """ceil((n ln n)^(1/3)), the size threshold balancing moats against stars."""
    if n < 2:
        return 1
    return max(1, math.ceil((n * math.log(n)) ** (1 / 3)))


def pd_with_sampling(sys: SafeSetSystem, seed=None, t=None):
    """Primal-dual on small safe sets plus star sampling with s = t for the rest."""
    if t is None:
        t = theory_t(sys.n)
    overlay, cert = primal_dual_solve(sys, t)
    stars = star_sample(sys.n, t, seed) & sys.base_edges
    provenance = {"solver": "pd-sample", "t": t, "seed": seed,
                  "pd_edges": len(overlay), "star_edges": len(stars - overlay.edges)}
    return Overlay(overlay.edges | frozenset(stars), provenance), cert
