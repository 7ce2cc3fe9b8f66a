"""Shared fixtures and independent reference implementations for the tests."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from ccnet import Overlay, SafeSetSystem, derive_ibgp_safe_sets, gen_random_metric
from ccnet.instance import complete_graph_edges

ACCEPTANCE_LINES = []


def record(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


# ---------------------------------------------------------------- oracles

def bellman_ford(topo):
    """All-pairs distances by Bellman-Ford, one source at a time."""
    n = topo.n
    out = []
    for s in range(n):
        dist = [None] * n
        dist[s] = Fraction(0)
        for _ in range(n - 1):
            for u, v, w in topo.edges:
                for a, b in ((u, v), (v, u)):
                    if dist[a] is not None and (dist[b] is None or dist[a] + w < dist[b]):
                        dist[b] = dist[a] + w
        out.append(dist)
    return out


def naive_safe_sets(metric):
    """S(x, y) straight from the definition: w is safe when it prefers y to every far router."""
    n = metric.n
    key = metric.key
    safe = {}
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            far = [w for w in range(n) if w != x and key(x, w) > key(x, y)]
            safe[(x, y)] = frozenset(w for w in range(n)
                                     if w == y or all(key(w, y) < key(w, f) for f in far))
    return safe


def has_path(n, edges, a, b, allowed):
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen, stack = {a}, [a]
    while stack:
        w = stack.pop()
        for nb in adj[w]:
            if nb in allowed and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return b in seen


def brute_force_opt(sys, variant="sum"):
    """Exhaustive scan over every subset of the base graph (tiny n only)."""
    edges = sorted(sys.base_edges)
    best = None
    for k in range(len(edges) + 1):
        for combo in itertools.combinations(edges, k):
            if all(has_path(sys.n, combo, u, v, sys.safe[(u, v)]) for u, v in sys.demands):
                if variant == "sum":
                    return k
                val = Overlay(frozenset(combo)).max_degree()
                best = val if best is None else min(best, val)
    return best


def all_pairs_system(n, safe_fn=None):
    demands = tuple(itertools.permutations(range(n), 2))
    safe = {d: frozenset(range(n)) if safe_fn is None else safe_fn(d) for d in demands}
    return SafeSetSystem(n, complete_graph_edges(n), demands, safe)


def random_ibgp(n, seed):
    return derive_ibgp_safe_sets(gen_random_metric(n, seed))


@pytest.fixture
def k3():
    return all_pairs_system(3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def cut_lp_value(sys, variant="sum"):
    """Optimum of the cut formulation: every x-side cut inside S(x, y) needs capacity 1."""
    from scipy.optimize import linprog

    edges = sorted(sys.base_edges)
    col = {e: i for i, e in enumerate(edges)}
    m = len(edges)
    nv = m + (variant == "degree")
    rows = []
    for x, y in sys.demands:
        s = sorted(sys.safe[(x, y)] - {x, y})
        for k in range(len(s) + 1):
            for extra in itertools.combinations(s, k):
                cut = {x, *extra}
                row = np.zeros(nv)
                for a, b in edges:
                    inside = sys.safe[(x, y)]
                    if a in inside and b in inside and ((a in cut) != (b in cut)):
                        row[col[(a, b)]] = -1.0
                rows.append((row, -1.0))
    if variant == "degree":
        for v in range(sys.n):
            row = np.zeros(nv)
            for e in edges:
                if v in e:
                    row[col[e]] = 1.0
            row[m] = -1.0
            rows.append((row, 0.0))
    c = np.zeros(nv)
    if variant == "sum":
        c[:m] = 1.0
    else:
        c[m] = 1.0
    bounds = [(0, 1)] * m + ([(0, None)] if variant == "degree" else [])
    res = linprog(c, A_ub=np.array([r for r, _ in rows]), b_ub=np.array([b for _, b in rows]),
                  bounds=bounds, method="highs")
    assert res.status == 0
    return res.fun
