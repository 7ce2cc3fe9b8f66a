"""Exact greedy for symmetric, hierarchical safe sets.

A pair {x, y} is easy when some z in S(x, y) has both S(x, z) and S(y, z)
strictly inside S(x, y); otherwise it is hard. Connecting every hard pair's
safe set, smallest sets first, with as few edges as possible is optimal.
"""

from collections import namedtuple
from dataclasses import dataclass

from ._graph import UnionFind
from .instance import CCError, InfeasibleInstanceError, Overlay, SafeSetSystem

Violation = namedtuple("Violation", "kind pair detail")


class NotHierarchicalError(CCError):
    def __init__(self, violations):
        self.violations = list(violations)
        first = self.violations[0]
        super().__init__(f"safe sets are not symmetric/hierarchical "
                         f"({len(self.violations)} violations, first: {first.kind} {first.pair} {first.detail})")


@dataclass
class PairClassification:
    order: list  # hard pairs (x, y), x < y, in processing order
    easy: set

    @property
    def hard(self):
        return set(self.order)


def _pair_sets(sys: SafeSetSystem):
    """Unordered pair -> safe set, taking whichever orientation is given."""
    sets = {}
    for (u, v), s in sys.safe.items():
        key = (u, v) if u < v else (v, u)
        sets.setdefault(key, s)
    return sets


def check_symmetric_hierarchical(sys: SafeSetSystem, limit=None):
    """Return a list of violations; empty iff symmetric and hierarchical."""
    out = []

    def add(kind, pair, detail):
        out.append(Violation(kind, pair, detail))
        return limit is not None and len(out) >= limit

    for (u, v), s in sys.safe.items():
        rev = sys.safe.get((v, u))
        if rev is not None and rev != s and u < v:
            if add("symmetry", (u, v), f"S({u},{v}) != S({v},{u})"):
                return out
    sets = _pair_sets(sys)

    def lookup(a, b):
        return sets.get((a, b) if a < b else (b, a))

    for (x, y), s in sorted(sys.safe.items()):
        for z in sorted(s):
            if z == x or z == y:
                continue
            for a, b in ((x, z), (z, y)):
                sub = lookup(a, b)
                if sub is None:
                    if add("missing", (a, b), f"no safe set for pair ({a},{b}) needed by S({x},{y})"):
                        return out
                elif not sub <= s:
                    if add("hierarchy", (x, y, z), f"S({a},{b}) not contained in S({x},{y})"):
                        return out
    return out


def classify_pairs(sys: SafeSetSystem) -> PairClassification:
    violations = check_symmetric_hierarchical(sys)
    if violations:
        raise NotHierarchicalError(violations)
    sets = _pair_sets(sys)
    hard, easy = [], set()
    for (x, y), s in sets.items():
        is_easy = False
        for z in s:
            if z == x or z == y:
                continue
            sx = sets[(x, z) if x < z else (z, x)]
            sy = sets[(y, z) if y < z else (z, y)]
            if sx < s and sy < s:
                is_easy = True
                break
        if is_easy:
            easy.add((x, y))
        else:
            hard.append((x, y))
    hard.sort(key=lambda p: (len(sets[p]), p[0], p[1]))
    return PairClassification(hard, easy)


def hierarchical_greedy(sys: SafeSetSystem) -> Overlay:
    """Optimal overlay for symmetric hierarchical instances.

    For each hard pair in order, base edges inside its safe set are scanned
    lexicographically and kept when they join two components of the
    current overlay restricted to that set.
    """
    cls = classify_pairs(sys)
    sets = _pair_sets(sys)
    chosen = set()
    steps = []
    for pair in cls.order:
        s = sets[pair]
        uf = UnionFind(sorted(s))
        for a, b in chosen:
            if a in s and b in s:
                uf.union(a, b)
        added = []
        demand = pair if pair in sys.safe else pair[::-1]
        for e in sys.safe_edges(demand):
            if uf.num_components == 1:
                break
            if uf.union(*e):
                added.append(e)
        if uf.num_components > 1:
            raise InfeasibleInstanceError([pair], f"safe set of hard pair {pair} is disconnected in the base graph")
        chosen.update(added)
        if added:
            steps.append((pair, added))
    return Overlay(frozenset(chosen), {"solver": "hier", "hard_pairs": len(cls.order), "steps": steps})
