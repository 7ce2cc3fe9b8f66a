"""Core data types: topologies, tie-broken metrics, safe-set systems, overlays.

Distances are exact :class:`fractions.Fraction` values. Equal distances are
ordered by the sorted endpoint pair and then by the ordered pair, so every
comparison between two distinct ordered pairs is strict.
"""

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

import numpy as np

from ._graph import UnionFind, adjacency, norm_edge, restricted_component


class CCError(Exception):
    """Base class for errors raised by this package."""


class DisconnectedTopologyError(CCError):
    def __init__(self, u, v):
        super().__init__(f"topology is disconnected: no path between {u} and {v}")
        self.pair = (u, v)


class InfeasibleInstanceError(CCError):
    """Some demand cannot be connected inside its safe set."""

    def __init__(self, demands, message=None):
        demands = list(demands)
        if message is None:
            shown = ", ".join(f"({u},{v})" for u, v in demands[:5])
            more = "" if len(demands) <= 5 else f" (+{len(demands) - 5} more)"
            message = f"demand(s) not connectable inside their safe set: {shown}{more}"
        super().__init__(message)
        self.demands = demands


def as_fraction(value) -> Fraction:
    """Parse an int, decimal string or ``p/q`` string into an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class Topology:
    n: int
    edges: tuple  # ((u, v, Fraction), ...)
    names: tuple = ()

    def __post_init__(self):
        seen = set()
        clean = []
        for u, v, w in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) references a vertex outside 0..{self.n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            e = norm_edge(u, v)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            w = as_fraction(w)
            if w <= 0:
                raise ValueError(f"edge {e} has non-positive weight {w}")
            clean.append((e[0], e[1], w))
        object.__setattr__(self, "edges", tuple(sorted(clean)))
        if self.names and len(self.names) != self.n:
            raise ValueError("names must list one entry per vertex")
        object.__setattr__(self, "names", tuple(self.names))

    @property
    def num_links(self):
        return len(self.edges)

    def name(self, v):
        if self.names and self.names[v]:
            return self.names[v]
        return str(v)

    def is_connected(self):
        uf = UnionFind(range(self.n))
        for u, v, _ in self.edges:
            uf.union(u, v)
        return uf.num_components <= 1


@dataclass(frozen=True)
class StrictMetric:
    """All-pairs distances plus the strict tie-breaking order on ordered pairs."""

    n: int
    dist: tuple  # n x n tuple of Fractions
    names: tuple = ()

    def __post_init__(self):
        dist = tuple(tuple(as_fraction(x) for x in row) for row in self.dist)
        if len(dist) != self.n or any(len(row) != self.n for row in dist):
            raise ValueError("distance matrix must be n x n")
        for u in range(self.n):
            if dist[u][u] != 0:
                raise ValueError(f"nonzero diagonal at {u}")
            for v in range(u + 1, self.n):
                if dist[u][v] != dist[v][u]:
                    raise ValueError(f"asymmetric distance between {u} and {v}")
                if dist[u][v] <= 0:
                    raise ValueError(f"non-positive distance between {u} and {v}")
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "names", tuple(self.names))

    def key(self, u, v):
        """Sort key realizing the strict order on ordered pairs."""
        a, b = norm_edge(u, v)
        return (self.dist[u][v], a, b, u, v)

    @cached_property
    def rank(self) -> np.ndarray:
        """rank[u, v] = position of (u, v) in the strict order; diagonal is -1."""
        pairs = [(u, v) for u in range(self.n) for v in range(self.n) if u != v]
        pairs.sort(key=lambda p: self.key(*p))
        rank = np.full((self.n, self.n), -1, dtype=np.int64)
        for r, (u, v) in enumerate(pairs):
            rank[u, v] = r
        rank.setflags(write=False)
        return rank

    def closer(self, w, a, b):
        """True iff w is strictly closer to a than to b under the tie-broken order."""
        return self.rank[w, a] < self.rank[w, b]

    def closest(self, w, candidates):
        return min(candidates, key=lambda c: self.rank[w, c])

    def triangle_violations(self, limit=None):
        out = []
        d = self.dist
        for a, b, c in itertools.permutations(range(self.n), 3):
            if d[a][c] > d[a][b] + d[b][c]:
                out.append((a, b, c))
                if limit and len(out) >= limit:
                    break
        return out


@dataclass(frozen=True)
class SafeSetSystem:
    """A Constrained Connectivity instance.

    ``safe`` maps each ordered demand (u, v) to the frozenset S(u, v).
    """

    n: int
    base_edges: frozenset
    demands: tuple
    safe: dict = field(hash=False, compare=False)
    names: tuple = ()

    def __post_init__(self):
        base = frozenset(norm_edge(u, v) for u, v in self.base_edges)
        for u, v in base:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"bad base edge ({u},{v})")
        object.__setattr__(self, "base_edges", base)
        demands = tuple(tuple(d) for d in self.demands)
        if not demands:
            raise ValueError("demand set must be nonempty")
        safe = {}
        for d in demands:
            u, v = d
            if u == v:
                raise ValueError(f"demand ({u},{v}) has equal endpoints")
            if d not in self.safe:
                raise ValueError(f"no safe set given for demand {d}")
            s = frozenset(self.safe[d])
            if u not in s or v not in s:
                raise ValueError(f"safe set of {d} must contain both endpoints")
            if any(not (0 <= w < self.n) for w in s):
                raise ValueError(f"safe set of {d} has a vertex outside 0..{self.n - 1}")
            safe[d] = s
        object.__setattr__(self, "demands", demands)
        object.__setattr__(self, "safe", safe)
        object.__setattr__(self, "names", tuple(self.names))

    @cached_property
    def adjacency(self):
        return adjacency(self.n, sorted(self.base_edges))

    @cached_property
    def is_complete(self):
        return len(self.base_edges) == self.n * (self.n - 1) // 2

    def safe_edges(self, demand):
        """Base edges with both endpoints in the demand's safe set, sorted."""
        s = self.safe[demand]
        if self.is_complete:
            members = sorted(s)
            return list(itertools.combinations(members, 2))
        return sorted(e for e in self.base_edges if e[0] in s and e[1] in s)

    def restrict(self, demands):
        demands = tuple(demands)
        return SafeSetSystem(self.n, self.base_edges, demands,
                             {d: self.safe[d] for d in demands}, self.names)

    def with_base(self, edges):
        return SafeSetSystem(self.n, frozenset(edges), self.demands, self.safe, self.names)


@dataclass(frozen=True)
class Overlay:
    """A candidate solution H: a set of undirected edges."""

    edges: frozenset
    provenance: dict = field(default_factory=dict, hash=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(norm_edge(u, v) for u, v in self.edges))

    def __len__(self):
        return len(self.edges)

    def sorted_edges(self):
        return sorted(self.edges)

    def max_degree(self):
        deg = {}
        for u, v in self.edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        return max(deg.values(), default=0)

    def outside(self, sys):
        """Edges not present in the instance's base graph."""
        return sorted(self.edges - sys.base_edges)

    def union(self, other, **provenance):
        return Overlay(self.edges | other.edges, provenance or dict(self.provenance))


@dataclass
class FractionalSolution:
    capacities: dict  # edge -> c_e
    flows: dict  # demand -> {(u, v): amount}
    objective: float
    lam: Optional[float] = None
    status: str = "optimal"


@dataclass
class ValidationReport:
    feasible: bool
    failures: list

    def __bool__(self):
        return self.feasible


def complete_graph_edges(n):
    return frozenset(itertools.combinations(range(n), 2))


def all_pairs_distances(topology: Topology) -> StrictMetric:
    """Exact shortest-path metric of a weighted topology (Dijkstra per source)."""
    n = topology.n
    adj = [[] for _ in range(n)]
    for u, v, w in topology.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    rows = []
    for s in range(n):
        dist = [None] * n
        dist[s] = Fraction(0)
        heap = [(Fraction(0), s)]
        done = [False] * n
        while heap:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for v, w in adj[u]:
                nd = d + w
                if dist[v] is None or nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        for t in range(n):
            if dist[t] is None:
                raise DisconnectedTopologyError(s, t)
        rows.append(tuple(dist))
    return StrictMetric(n, tuple(rows), topology.names)


def validate_instance(sys: SafeSetSystem) -> ValidationReport:
    """Check every demand is connected in the base graph restricted to its safe set."""
    adj = sys.adjacency
    failures = []
    for d in sys.demands:
        u, v = d
        if v not in restricted_component(adj, u, sys.safe[d]):
            failures.append(d)
    return ValidationReport(not failures, failures)


def require_feasible(sys: SafeSetSystem):
    report = validate_instance(sys)
    if not report.feasible:
        raise InfeasibleInstanceError(report.failures)
