"""Instance families: hitting-set metric gadgets, Min-Rep and Unique-Games
constructions, laminar hierarchical systems, random metrics and synthetic
PoP-level topologies.

Every generator is deterministic given its arguments (including the seed).
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._graph import norm_edge
from .instance import (CCError, SafeSetSystem, StrictMetric, Topology, all_pairs_distances,
                       as_fraction)

MAX_GENERATED_VERTICES = 400


class GeneratorError(CCError):
    pass


class ParameterOverflowError(GeneratorError):
    """Requested parameters would materialize an unreasonably large instance."""


def _rng(seed):
    return np.random.default_rng(seed)


# ---------------------------------------------------------------- hitting set

@dataclass(frozen=True)
class HittingSetInstance:
    n_elems: int
    sets: tuple  # tuple of frozensets over 1..n_elems

    def __post_init__(self):
        sets = tuple(frozenset(t) for t in self.sets)
        for j, t in enumerate(sets, 1):
            if not t:
                raise ValueError(f"set T_{j} is empty")
            if any(not (1 <= i <= self.n_elems) for i in t):
                raise ValueError(f"set T_{j} has an element outside 1..{self.n_elems}")
        object.__setattr__(self, "sets", sets)

    @property
    def m(self):
        return len(self.sets)

    def is_hitting(self, chosen):
        chosen = set(chosen)
        return all(t & chosen for t in self.sets)

    def min_hitting_set(self):
        """Smallest hitting set by enumeration (lexicographically first)."""
        for k in range(self.n_elems + 1):
            for combo in itertools.combinations(range(1, self.n_elems + 1), k):
                if self.is_hitting(combo):
                    return frozenset(combo)
        raise ValueError("no hitting set exists")


def random_hitting_set(n_elems, m, seed=None):
    rng = _rng(seed)
    sets = []
    for _ in range(m):
        size = int(rng.integers(1, n_elems + 1))
        sets.append(frozenset(int(i) + 1 for i in rng.choice(n_elems, size=size, replace=False)))
    return HittingSetInstance(n_elems, tuple(sets))


@dataclass(frozen=True)
class GadgetParams:
    M: Fraction = Fraction(20)
    eps: Fraction = None  # default 1 / (100 (n + m + ell + alpha))
    ell: int = 1
    alpha: int = 1

    def resolved(self, hs):
        eps = self.eps
        if eps is None:
            eps = Fraction(1, 100 * (hs.n_elems + hs.m + self.ell + self.alpha))
        return GadgetParams(as_fraction(self.M), as_fraction(eps), self.ell, self.alpha)

    def check(self, hs):
        if self.M < 20:
            raise GeneratorError(f"M must be >= 20, got {self.M}")
        if self.eps <= 0 or self.eps * (hs.n_elems + hs.m) >= Fraction(1, 10):
            raise GeneratorError(f"eps={self.eps} too large: need eps*(n+m) < 0.1")
        if self.ell < 1 or self.alpha < 1:
            raise GeneratorError("ell and alpha must be >= 1")


def _gadget_copy_edges(hs, p, tag, names, index):
    """Add one copy of the x-free part of the gadget; return its weighted edges."""
    def vid(label):
        name = label + tag
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    eps = p.eps
    z, y, u, h = vid("z"), vid("y"), vid("u"), vid("h")
    a = {i: vid(f"a{i}") for i in range(1, hs.n_elems + 1)}
    b = {j: vid(f"b{j}") for j in range(1, hs.m + 1)}
    edges = [(z, y, Fraction(3, 2)), (z, u, Fraction(2))]
    for i, ai in a.items():
        edges.append((z, ai, 1 + i * eps))
        edges.append((ai, u, Fraction(11, 10)))
    for j, t in enumerate(hs.sets, 1):
        edges.append((b[j], h, 1 + j * eps))
        for i in sorted(t):
            edges.append((a[i], b[j], 1 + (i + j) * eps))
    return z, b, edges


def gen_hitting_gadget(hs: HittingSetInstance, params: GadgetParams = None, variant="sum") -> StrictMetric:
    """Metric gadget encoding a hitting-set instance.

    ``sum``: ``ell`` copies x1..x_ell of x with d(x_i, z) = M + i*eps and
    d(x_i, b_j) = M + 1.4 + (i+j)*eps. ``degree``: one x shared by
    ``alpha`` copies of everything else, with d(x, z) = M and
    d(x, b_j) = M + 1.4 + j*eps. All other distances are shortest paths
    over the specified pairs; every specified pair must keep its value.
    """
    p = (params or GadgetParams()).resolved(hs)
    p.check(hs)
    names, index = [], {}
    edges = []
    spec = {}
    if variant == "sum":
        xs = []
        for i in range(1, p.ell + 1):
            index[f"x{i}"] = len(names)
            names.append(f"x{i}")
            xs.append(i)
        z, b, body = _gadget_copy_edges(hs, p, "", names, index)
        edges += body
        for i in xs:
            x = index[f"x{i}"]
            edges.append((x, z, p.M + i * p.eps))
            for j in b:
                edges.append((x, b[j], p.M + Fraction(7, 5) + (i + j) * p.eps))
    elif variant == "degree":
        index["x"] = 0
        names.append("x")
        for c in range(1, p.alpha + 1):
            tag = "" if p.alpha == 1 else f"^{c}"
            z, b, body = _gadget_copy_edges(hs, p, tag, names, index)
            edges += body
            edges.append((0, z, p.M))
            for j in b:
                edges.append((0, b[j], p.M + Fraction(7, 5) + j * p.eps))
    else:
        raise ValueError(f"unknown variant {variant!r}")

    for u, v, w in edges:
        spec[norm_edge(u, v)] = w
    metric = all_pairs_distances(Topology(len(names), tuple(edges), tuple(names)))
    for (u, v), w in spec.items():
        if metric.dist[u][v] != w:
            raise GeneratorError(f"specified distance {names[u]}-{names[v]}={w} is not a shortest path "
                                 f"(got {metric.dist[u][v]}); parameters too coarse")
    bad = metric.triangle_violations(limit=1)
    if bad:
        raise GeneratorError(f"triangle inequality fails at {bad[0]}")
    return metric


def gadget_sidecar(hs: HittingSetInstance, metric: StrictMetric, variant="sum"):
    """Predicted S(x, b_j) = {x, b_j} + {a_i : i in T_j} for each x copy / gadget copy."""
    index = {name: i for i, name in enumerate(metric.names)}
    pred = {}
    if variant == "sum":
        xs = [index[nm] for nm in metric.names if nm.startswith("x")]
        tags = [""]
    else:
        xs = [index["x"]]
        tags = sorted({nm[nm.index("^"):] for nm in metric.names if "^" in nm}) or [""]
    for x in xs:
        for tag in tags:
            for j, t in enumerate(hs.sets, 1):
                b = index[f"b{j}{tag}"]
                s = {x, b} | {index[f"a{i}{tag}"] for i in t}
                pred[f"{x},{b}"] = sorted(s)
    return {"family": "gadget", "variant": variant, "names": list(metric.names),
            "sets": [sorted(t) for t in hs.sets], "predicted_safe_sets": pred}


def gadget_solution(hs: HittingSetInstance, metric: StrictMetric, hitting=None, variant="sum"):
    """The feasible overlay from the gadget's upper-bound argument.

    ``sum``: clique on all non-x vertices, each x_i to z and to a_k for k in
    the hitting set. ``degree``: per copy a clique on the non-x vertices,
    plus x to each copy's z and a_k.
    """
    if hitting is None:
        hitting = hs.min_hitting_set()
    index = {name: i for i, name in enumerate(metric.names)}
    edges = set()
    if variant == "sum":
        rest = [i for i, nm in enumerate(metric.names) if not nm.startswith("x")]
        edges |= {norm_edge(a, b) for a, b in itertools.combinations(rest, 2)}
        for nm, x in index.items():
            if nm.startswith("x"):
                edges.add(norm_edge(x, index["z"]))
                edges |= {norm_edge(x, index[f"a{k}"]) for k in hitting}
    else:
        tags = sorted({nm[nm.index("^"):] for nm in metric.names if "^" in nm}) or [""]
        x = index["x"]
        for tag in tags:
            part = [i for i, nm in enumerate(metric.names) if nm != "x" and (nm.endswith(tag) if tag else True)]
            edges |= {norm_edge(a, b) for a, b in itertools.combinations(part, 2)}
            edges.add(norm_edge(x, index["z" + tag]))
            edges |= {norm_edge(x, index[f"a{k}{tag}"]) for k in hitting}
    return edges


# -------------------------------------------------------------------- Min-Rep

@dataclass(frozen=True)
class MinRepInstance:
    """Bipartite graph with grouped sides; vertices are named by the groups' lists."""

    u_groups: tuple  # tuple of tuples of U-vertex labels
    v_groups: tuple
    edges: tuple  # (u_label, v_label)
    d: int = 1

    def __post_init__(self):
        ug = tuple(tuple(g) for g in self.u_groups)
        vg = tuple(tuple(g) for g in self.v_groups)
        us = [u for g in ug for u in g]
        vs = [v for g in vg for v in g]
        if len(set(us)) != len(us) or len(set(vs)) != len(vs):
            raise ValueError("groups must partition U and V disjointly")
        if set(us) & set(vs):
            raise ValueError("U and V labels must be distinct")
        for u, v in self.edges:
            if u not in us or v not in vs:
                raise ValueError(f"edge ({u},{v}) is not between U and V")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        object.__setattr__(self, "u_groups", ug)
        object.__setattr__(self, "v_groups", vg)
        object.__setattr__(self, "edges", tuple(sorted(set(tuple(e) for e in self.edges))))

    @property
    def n_vertices(self):
        return sum(map(len, self.u_groups)) + sum(map(len, self.v_groups))

    def group_of(self, label):
        for i, g in enumerate(self.u_groups):
            if label in g:
                return ("U", i)
        for j, g in enumerate(self.v_groups):
            if label in g:
                return ("V", j)
        raise KeyError(label)

    def super_edges(self):
        out = set()
        for u, v in self.edges:
            out.add((self.group_of(u)[1], self.group_of(v)[1]))
        return sorted(out)

    def is_solution(self, reps):
        reps = set(reps)
        for i, j in self.super_edges():
            if not any(u in reps and v in reps and u in self.u_groups[i] and v in self.v_groups[j]
                       for u, v in self.edges):
                return False
        return True

    def min_rep(self):
        """Smallest representative set by enumeration."""
        labels = [u for g in self.u_groups for u in g] + [v for g in self.v_groups for v in g]
        for k in range(len(labels) + 1):
            for combo in itertools.combinations(labels, k):
                if self.is_solution(combo):
                    return frozenset(combo)
        raise ValueError("no solution")


def random_minrep(groups, group_size, edge_prob, d=1, seed=None):
    rng = _rng(seed)
    ug = tuple(tuple(f"u{i}_{k}" for k in range(group_size)) for i in range(groups))
    vg = tuple(tuple(f"v{j}_{k}" for k in range(group_size)) for j in range(groups))
    edges = [(u, v) for g in ug for u in g for h in vg for v in h if rng.random() < edge_prob]
    if not edges:
        edges = [(ug[0][0], vg[0][0])]
    return MinRepInstance(ug, vg, tuple(edges), d)


@dataclass
class _Builder:
    names: list = field(default_factory=list)
    index: dict = field(default_factory=dict)
    edges: set = field(default_factory=set)

    def vertex(self, name):
        if name not in self.index:
            self.index[name] = len(self.names)
            self.names.append(name)
        return self.index[name]

    def edge(self, a, b):
        self.edges.add(norm_edge(self.index[a], self.index[b]))

    def check_size(self, what):
        if len(self.names) > MAX_GENERATED_VERTICES:
            raise ParameterOverflowError(f"{what}: {len(self.names)} vertices exceeds {MAX_GENERATED_VERTICES}")


def _overflow_guard(count, what):
    if count > MAX_GENERATED_VERTICES:
        raise ParameterOverflowError(f"{what} would need {count} vertices (limit {MAX_GENERATED_VERTICES})")


def gen_minrep_cc(mr: MinRepInstance, variant="sum") -> SafeSetSystem:
    """Constrained Connectivity instance from a Min-Rep instance.

    Sum variant vertices: x_j^i, the U and V vertices, y_j^i and z. Super-edge
    pairs (x_i^k, y_j^k) get {x_i^k, y_j^k} + U_i + V_j, every other pair
    gets its endpoints plus z.

    Degree variant: d^2 copies (i, k) of U, V and z. x_j^i attaches to the
    copies (i, *), y_j^l to the copies (*, l), and the pair (x_a^i, y_b^l)
    uses copy (i, l). Pairs inside one copy, or between an outer vertex and
    a copy it attaches to, get the endpoints plus that copy's z; every
    other pair may use all vertices.
    """
    d = mr.d
    mu, mv = len(mr.u_groups), len(mr.v_groups)
    supers = mr.super_edges()
    b = _Builder()
    if variant == "sum":
        _overflow_guard((mu + mv) * d + mr.n_vertices + 1, "Min-Rep reduction")
        for i in range(1, d + 1):
            for j in range(mu):
                b.vertex(f"x{j}^{i}")
        for g in mr.u_groups:
            for u in g:
                b.vertex(u)
        for g in mr.v_groups:
            for v in g:
                b.vertex(v)
        for i in range(1, d + 1):
            for j in range(mv):
                b.vertex(f"y{j}^{i}")
        b.vertex("z")
        for i in range(1, d + 1):
            for j, g in enumerate(mr.u_groups):
                for u in g:
                    b.edge(f"x{j}^{i}", u)
            for j, g in enumerate(mr.v_groups):
                for v in g:
                    b.edge(v, f"y{j}^{i}")
        for u, v in mr.edges:
            b.edge(u, v)
        for nm in b.names:
            if nm != "z":
                b.edge(nm, "z")
        n = len(b.names)
        z = b.index["z"]
        special = {}
        for i in range(1, d + 1):
            for gu, gv in supers:
                x, y = b.index[f"x{gu}^{i}"], b.index[f"y{gv}^{i}"]
                s = frozenset([x, y] + [b.index[u] for u in mr.u_groups[gu]]
                              + [b.index[v] for v in mr.v_groups[gv]])
                special[(x, y)] = special[(y, x)] = s
        safe = {}
        for p in itertools.permutations(range(n), 2):
            safe[p] = special.get(p, frozenset(p) | {z})
    elif variant == "degree":
        _overflow_guard((mu + mv) * d + d * d * (mr.n_vertices + 1), "Min-Rep degree reduction")
        for i in range(1, d + 1):
            for j in range(mu):
                b.vertex(f"x{j}^{i}")
            for j in range(mv):
                b.vertex(f"y{j}^{i}")
        copy_of = {}
        for i in range(1, d + 1):
            for k in range(1, d + 1):
                tag = f"^{i},{k}"
                for g in mr.u_groups + mr.v_groups:
                    for w in g:
                        copy_of[b.vertex(w + tag)] = (i, k)
                copy_of[b.vertex("z" + tag)] = (i, k)
                for j, g in enumerate(mr.u_groups):
                    b.edge(f"x{j}^{i}", "z" + tag)
                    for u in g:
                        b.edge(f"x{j}^{i}", u + tag)
                for j, g in enumerate(mr.v_groups):
                    b.edge(f"y{j}^{k}", "z" + tag)
                    for v in g:
                        b.edge(f"y{j}^{k}", v + tag)
                for u, v in mr.edges:
                    b.edge(u + tag, v + tag)
                for g in mr.u_groups + mr.v_groups:
                    for w in g:
                        b.edge(w + tag, "z" + tag)
        n = len(b.names)
        everything = frozenset(range(n))
        outer = {}
        for i in range(1, d + 1):
            for j in range(mu):
                outer[b.index[f"x{j}^{i}"]] = ("x", i)
            for j in range(mv):
                outer[b.index[f"y{j}^{i}"]] = ("y", i)

        def attached(o, c):
            side, i = outer[o]
            return c[0] == i if side == "x" else c[1] == i

        special = {}
        for i in range(1, d + 1):
            for l in range(1, d + 1):
                tag = f"^{i},{l}"
                for gu, gv in supers:
                    x, y = b.index[f"x{gu}^{i}"], b.index[f"y{gv}^{l}"]
                    s = frozenset([x, y] + [b.index[u + tag] for u in mr.u_groups[gu]]
                                  + [b.index[v + tag] for v in mr.v_groups[gv]])
                    special[(x, y)] = special[(y, x)] = s
        safe = {}
        for p in itertools.permutations(range(n), 2):
            if p in special:
                safe[p] = special[p]
                continue
            a, c = p
            ca, cc = copy_of.get(a), copy_of.get(c)
            copy = None
            if ca is not None and ca == cc:
                copy = ca
            elif ca is None and cc is not None and attached(a, cc):
                copy = cc
            elif cc is None and ca is not None and attached(c, ca):
                copy = ca
            if copy is None:
                safe[p] = everything
            else:
                safe[p] = frozenset(p) | {b.index[f"z^{copy[0]},{copy[1]}"]}
    else:
        raise ValueError(f"unknown variant {variant!r}")
    demands = tuple(sorted(safe))
    return SafeSetSystem(len(b.names), frozenset(b.edges), demands, safe, tuple(b.names))


def minrep_solution(mr: MinRepInstance, sys: SafeSetSystem, reps=None):
    """Forward-direction overlay (sum variant): star at z, representative edges, one edge per super-edge."""
    if reps is None:
        reps = mr.min_rep()
    idx = {nm: i for i, nm in enumerate(sys.names)}
    z = idx["z"]
    edges = {norm_edge(z, w) for w in range(sys.n) if w != z}
    for i in range(1, mr.d + 1):
        for j, g in enumerate(mr.u_groups):
            edges |= {norm_edge(idx[f"x{j}^{i}"], idx[u]) for u in g if u in reps}
        for j, g in enumerate(mr.v_groups):
            edges |= {norm_edge(idx[f"y{j}^{i}"], idx[v]) for v in g if v in reps}
    for gu, gv in mr.super_edges():
        for u, v in mr.edges:
            if u in reps and v in reps and u in mr.u_groups[gu] and v in mr.v_groups[gv]:
                edges.add(norm_edge(idx[u], idx[v]))
                break
    return edges


def minrep_predicted_size(mr: MinRepInstance, K):
    """K d + e_MR + 2 m d + n_MR (2 m counts the groups of both sides)."""
    outer = (len(mr.u_groups) + len(mr.v_groups)) * mr.d
    return K * mr.d + len(mr.super_edges()) + outer + mr.n_vertices


# ------------------------------------------------------------- Unique Games

@dataclass(frozen=True)
class UniqueGamesInstance:
    """Vertices 0..n-1, alphabet 0..k-1, perms[(u, v)] (u < v) maps u's label to v's."""

    n: int
    k: int
    perms: dict = field(hash=False, compare=False)
    left: tuple = ()  # bipartite instances list the left side

    def __post_init__(self):
        for (u, v), p in self.perms.items():
            if not u < v:
                raise ValueError("permutation keys must be (u, v) with u < v")
            if sorted(p) != list(range(self.k)):
                raise ValueError(f"pi_{u}{v} is not a bijection of the alphabet")

    def pi(self, u, v):
        """Permutation for the ordered edge; pi(v, u) is the inverse of pi(u, v)."""
        if u < v:
            return tuple(self.perms[(u, v)])
        p = self.perms[(v, u)]
        inv = [0] * self.k
        for a, b in enumerate(p):
            inv[b] = a
        return tuple(inv)

    def edges(self):
        return sorted(self.perms)

    def satisfied(self, labels):
        """labels: vertex -> set of labels."""
        for (u, v), p in self.perms.items():
            if not any(p[a] in labels.get(v, ()) for a in labels.get(u, ())):
                return False
        return True

    def min_labels(self):
        """Fewest labels covering every constraint, by exhaustive search over label subsets."""
        if self.k > 6 or self.n > 6:
            raise GeneratorError("exhaustive label search limited to n, k <= 6")
        subsets = sorted((frozenset(c) for r in range(self.k + 1)
                          for c in itertools.combinations(range(self.k), r)), key=len)
        best = [None]

        def rec(v, labels, total):
            if best[0] is not None and total >= best[0]:
                return
            if v == self.n:
                if self.satisfied(labels):
                    best[0] = total
                return
            for s in subsets:
                if best[0] is not None and total + len(s) >= best[0]:
                    break
                labels[v] = s
                # prune on constraints to earlier vertices
                ok = all(any(self.pi(u, v)[a] in s for a in labels[u])
                         for u in range(v) if (min(u, v), max(u, v)) in self.perms)
                if ok:
                    rec(v + 1, labels, total + len(s))
            labels.pop(v, None)

        rec(0, {}, 0)
        return best[0]


def random_unique_games(n, k, seed=None, bipartite=False):
    """Uniformly random permutation on every edge of K_n (or K_{n,n} when bipartite)."""
    rng = _rng(seed)
    perms = {}
    if bipartite:
        left = tuple(range(n))
        pairs = [(u, v) for u in range(n) for v in range(n, 2 * n)]
        size = 2 * n
    else:
        left = ()
        pairs = list(itertools.combinations(range(n), 2))
        size = n
    for e in pairs:
        perms[e] = tuple(int(a) for a in rng.permutation(k))
    return UniqueGamesInstance(size, k, perms, left)


def ug_default_params(n_ug, eps, variant="sum"):
    """Default (k, d): k = n^(2(1+eps)/(1-3eps)); d = k (sum) or 2 n^((3-eps)/(1-3eps)) (degree)."""
    if not 0 < eps < Fraction(1, 3):
        raise ValueError("eps must lie in (0, 1/3)")
    eps = float(eps)
    k = math.ceil(n_ug ** (2 * (1 + eps) / (1 - 3 * eps)))
    if variant == "sum":
        d = k
    else:
        d = math.ceil(2 * n_ug ** ((3 - eps) / (1 - 3 * eps)))
    return k, d


def gen_unique_games_gap(n_ug, eps=0.1, d=None, k=None, seed=None, variant="sum"):
    """Integrality-gap instance from a random Unique Games instance.

    Returns ``(SafeSetSystem, UniqueGamesInstance)``. The sum variant reads
    the pair set {x, y} in S(x_i, y_i) as {x_i, y_i}.
    """
    dk, dd = ug_default_params(n_ug, eps, variant) if (k is None or d is None) else (None, None)
    k = dk if k is None else k
    d = dd if d is None else d
    if k < 2 or d < 1:
        raise ValueError("need k >= 2 and d >= 1")
    if variant == "sum":
        count = n_ug * d + n_ug * k + 1
    else:
        count = 2 * n_ug * d + d * d * (2 * n_ug * k + 1)
    if count > MAX_GENERATED_VERTICES:
        raise ParameterOverflowError(
            f"unique-games gap instance with k={k}, d={d} would need {count} vertices "
            f"(limit {MAX_GENERATED_VERTICES}); pass smaller k and d explicitly")
    ug = random_unique_games(n_ug, k, seed, bipartite=(variant == "degree"))
    b = _Builder()
    if variant == "sum":
        for x in range(n_ug):
            for i in range(1, d + 1):
                b.vertex(f"x{x}^{i}")
        for x in range(n_ug):
            for a in range(k):
                b.vertex(f"L{x}:{a}")
        b.vertex("z")
        for x in range(n_ug):
            for i in range(1, d + 1):
                for a in range(k):
                    b.edge(f"x{x}^{i}", f"L{x}:{a}")
        for (x, y) in ug.edges():
            p = ug.pi(x, y)
            for a in range(k):
                b.edge(f"L{x}:{a}", f"L{y}:{p[a]}")
        for nm in b.names:
            if nm != "z":
                b.edge(nm, "z")
        z = b.index["z"]
        special = {}
        for x, y in itertools.combinations(range(n_ug), 2):
            labels = [b.index[f"L{w}:{a}"] for w in (x, y) for a in range(k)]
            for i in range(1, d + 1):
                xi, yi = b.index[f"x{x}^{i}"], b.index[f"x{y}^{i}"]
                s = frozenset([xi, yi] + labels)
                special[(xi, yi)] = special[(yi, xi)] = s
        n = len(b.names)
        safe = {p: special.get(p, frozenset(p) | {z}) for p in itertools.permutations(range(n), 2)}
    elif variant == "degree":
        L = range(n_ug)
        R = range(n_ug, 2 * n_ug)
        for i in range(1, d + 1):
            for x in L:
                b.vertex(f"x{x}^{i}")
            for y in R:
                b.vertex(f"y{y}^{i}")
        copy_of = {}
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                tag = f"^{i},{j}"
                for w in range(2 * n_ug):
                    for a in range(k):
                        copy_of[b.vertex(f"L{w}:{a}{tag}")] = (i, j)
                copy_of[b.vertex("z" + tag)] = (i, j)
                for x in L:
                    b.edge(f"x{x}^{i}", "z" + tag)
                    for a in range(k):
                        b.edge(f"x{x}^{i}", f"L{x}:{a}{tag}")
                for y in R:
                    b.edge(f"y{y}^{j}", "z" + tag)
                    for a in range(k):
                        b.edge(f"y{y}^{j}", f"L{y}:{a}{tag}")
                for (x, y) in ug.edges():
                    p = ug.pi(x, y)
                    for a in range(k):
                        b.edge(f"L{x}:{a}{tag}", f"L{y}:{p[a]}{tag}")
                for w in range(2 * n_ug):
                    for a in range(k):
                        b.edge(f"L{w}:{a}{tag}", "z" + tag)
        n = len(b.names)
        everything = frozenset(range(n))
        outer = {}
        for i in range(1, d + 1):
            for x in L:
                outer[b.index[f"x{x}^{i}"]] = ("x", i)
            for y in R:
                outer[b.index[f"y{y}^{i}"]] = ("y", i)

        def attached(o, c):
            side, i = outer[o]
            return c[0] == i if side == "x" else c[1] == i

        special = {}
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                tag = f"^{i},{j}"
                for x in L:
                    for y in R:
                        xi, yj = b.index[f"x{x}^{i}"], b.index[f"y{y}^{j}"]
                        s = frozenset([xi, yj] + [b.index[f"L{w}:{a}{tag}"] for w in (x, y) for a in range(k)])
                        special[(xi, yj)] = special[(yj, xi)] = s
        safe = {}
        for p in itertools.permutations(range(n), 2):
            if p in special:
                safe[p] = special[p]
                continue
            a, c = p
            ca, cc = copy_of.get(a), copy_of.get(c)
            copy = None
            if ca is not None and ca == cc:
                copy = ca
            elif ca is None and cc is not None and attached(a, cc):
                copy = cc
            elif cc is None and ca is not None and attached(c, ca):
                copy = ca
            safe[p] = everything if copy is None else frozenset(p) | {b.index[f"z^{copy[0]},{copy[1]}"]}
    else:
        raise ValueError(f"unknown variant {variant!r}")
    sys = SafeSetSystem(len(b.names), frozenset(b.edges), tuple(sorted(safe)), safe, tuple(b.names))
    return sys, ug


def ug_lp_bound(n_ug, k, d):
    """Explicit fractional solution value: 2 d |V| + k |V| + C(|V|, 2)."""
    return 2 * d * n_ug + k * n_ug + math.comb(n_ug, 2)


def ug_integral_lower_bound(n_ug, k, d, min_labels):
    """d * OPT_UG + C(|V|, 2) + d |V| + k |V|."""
    return d * min_labels + math.comb(n_ug, 2) + d * n_ug + k * n_ug


# -------------------------------------------------------- laminar families

def random_laminar_family(n, seed=None, branching=2, split_prob=0.8):
    """Random recursive partition of range(n); returns the list of sets (root first)."""
    rng = _rng(seed)
    family = []
    stack = [list(range(n))]
    if branching < 2:
        return [frozenset(range(n))]
    while stack:
        part = stack.pop()
        family.append(frozenset(part))
        # a 2-set split into singletons changes nothing
        if len(part) < 3 or (len(family) > 1 and rng.random() > split_prob):
            continue
        order = [part[i] for i in rng.permutation(len(part))]
        parts = int(rng.integers(2, min(branching, len(order)) + 1))
        cuts = sorted(int(c) for c in rng.choice(np.arange(1, len(order)), size=parts - 1, replace=False))
        pieces = [sorted(order[a:b]) for a, b in zip([0] + cuts, cuts + [len(order)])]
        for piece in pieces:
            if len(piece) >= 2:
                stack.append(piece)
    return family


def gen_laminar_hierarchical(n, seed=None, branching=2, extra_prob=0.2, split_prob=0.8, direct_prob=0.0):
    """Symmetric hierarchical instance from a random laminar family.

    S(x, y) is the smallest family set containing both; the base graph is a
    random spanning tree inside every family set plus random extra edges.
    ``branching < 2`` gives the trivial family {V}.

    With ``direct_prob > 0`` each family set is marked, with that
    probability, as direct: pairs whose smallest common set is a direct set
    get S(x, y) = {x, y} instead (and their edge joins the base graph). The
    result stays symmetric and hierarchical, and the optimum can exceed n-1.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = _rng(seed)
    family = random_laminar_family(n, rng, branching, split_prob)
    edges = set()
    for fs in family:
        members = sorted(fs)
        order = [members[i] for i in rng.permutation(len(members))]
        for i in range(1, len(order)):
            j = int(rng.integers(0, i))
            edges.add(norm_edge(order[i], order[j]))
    for e in itertools.combinations(range(n), 2):
        if rng.random() < extra_prob:
            edges.add(e)
    direct = set()
    if direct_prob > 0:
        direct = {fs for fs in family if rng.random() < direct_prob}
    by_size = sorted(family, key=len)
    safe = {}
    for x, y in itertools.permutations(range(n), 2):
        fs = next(f for f in by_size if x in f and y in f)
        if fs in direct:
            safe[(x, y)] = frozenset((x, y))
            edges.add(norm_edge(x, y))
        else:
            safe[(x, y)] = fs
    return SafeSetSystem(n, frozenset(edges), tuple(sorted(safe)), safe)


# -------------------------------------------------- random metrics / PoPs

def random_topology(n, seed=None, extra_prob=0.3, max_weight=10):
    """Random spanning tree plus G(n, p) extra links, integer weights in 1..max_weight."""
    rng = _rng(seed)
    edges = {}
    order = [int(v) for v in rng.permutation(n)]
    for i in range(1, n):
        j = int(rng.integers(0, i))
        edges[norm_edge(order[i], order[j])] = int(rng.integers(1, max_weight + 1))
    for e in itertools.combinations(range(n), 2):
        if e not in edges and rng.random() < extra_prob:
            edges[e] = int(rng.integers(1, max_weight + 1))
    return Topology(n, tuple((u, v, w) for (u, v), w in sorted(edges.items())))


def gen_random_metric(n, seed=None, extra_prob=0.3, max_weight=10) -> StrictMetric:
    return all_pairs_distances(random_topology(n, seed, extra_prob, max_weight))


def synthetic_pop_topology(n, links, seed=None, name_prefix="pop"):
    """PoP-level topology: PoPs clustered around cities, a minimum spanning
    tree over them, then the shortest remaining links up to ``links``.

    Weights are rounded Euclidean lengths (at least 1), as with
    latency-derived link weights.
    """
    if links < n - 1 or links > n * (n - 1) // 2:
        raise ValueError("link count must lie between n-1 and C(n,2)")
    rng = _rng(seed)
    cities = max(3, n // 6)
    centers = rng.random((cities, 2)) * np.array([100.0, 60.0])
    home = np.concatenate([np.arange(min(cities, n)), rng.integers(0, cities, size=max(0, n - cities))])
    pts = centers[home] + rng.normal(0.0, 3.0, size=(n, 2))
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    # Prim's algorithm on the complete Euclidean graph
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = dist[0].copy()
    parent = np.zeros(n, dtype=int)
    chosen = set()
    for _ in range(n - 1):
        cand = np.where(in_tree, np.inf, best)
        v = int(np.argmin(cand))
        chosen.add(norm_edge(int(parent[v]), v))
        in_tree[v] = True
        closer = dist[v] < best
        best = np.where(closer, dist[v], best)
        parent = np.where(closer, v, parent)
    iu, ju = np.triu_indices(n, k=1)
    for idx in np.argsort(dist[iu, ju], kind="stable"):
        if len(chosen) >= links:
            break
        chosen.add((int(iu[idx]), int(ju[idx])))
    edges = tuple((u, v, max(1, int(round(dist[u, v])))) for u, v in sorted(chosen))
    names = tuple(f"{name_prefix}{i}" for i in range(n))
    return Topology(n, edges, names)


# (label, PoPs, links) of the five ISP maps the synthetic topologies mimic
POP_SHAPES = (("1221", 44, 88), ("1239", 52, 168), ("2914", 70, 222),
              ("3257", 41, 174), ("3356", 63, 570))
