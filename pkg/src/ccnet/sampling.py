"""LP-independent random structures: star sampling and unions of G(n, p).

Probabilities use natural logs. The round count of :func:`edge_sample` uses
log base 2; another base only changes a constant factor before the ceiling.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SamplePlan:
    kind: str  # "star" or "edge"
    s: float
    p: float
    rounds: int
    seed: object

    def __post_init__(self):
        if self.kind not in ("star", "edge"):
            raise ValueError(f"unknown sample kind {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.rounds < 1 or self.s < 1:
            raise ValueError("rounds and s must be >= 1")


def _seed_sequence(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def star_plan(n, s, seed=None):
    if s < 1:
        raise ValueError("s must be >= 1")
    p = min(3 * math.log(n) / s, 1.0) if n > 1 else 0.0
    return SamplePlan("star", s, p, 1, seed)


def edge_plan(n, s, eps=0.5, seed=None):
    if s < 2:
        raise ValueError("s must be >= 2")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    p = min((1 + eps) * math.log(s) / s, 1.0)
    rounds = max(1, math.ceil(3 * math.log2(n))) if n > 1 else 1
    return SamplePlan("edge", s, p, rounds, seed)


def star_centers(n, s, seed=None):
    """Vertices sampled independently with probability min(3 ln n / s, 1)."""
    plan = star_plan(n, s, seed)
    rng = np.random.default_rng(_seed_sequence(seed))
    hits = rng.random(n) < plan.p
    return [int(v) for v in np.flatnonzero(hits)]


def star_sample(n, s, seed=None):
    """Union of spanning stars centred at the sampled vertices."""
    edges = set()
    for c in star_centers(n, s, seed):
        for v in range(n):
            if v != c:
                edges.add((min(c, v), max(c, v)))
    return edges


def edge_sample_rounds(n, s, eps=0.5, seed=None):
    """Per-round edge sets; round i draws from the i-th child seed stream."""
    plan = edge_plan(n, s, eps, seed)
    iu, ju = np.triu_indices(n, k=1)
    children = _seed_sequence(seed).spawn(plan.rounds)
    rounds = []
    for child in children:
        rng = np.random.default_rng(child)
        keep = rng.random(len(iu)) < plan.p
        rounds.append({(int(a), int(b)) for a, b in zip(iu[keep], ju[keep])})
    return rounds


def edge_sample(n, s, eps=0.5, seed=None):
    """Union of ceil(3 log2 n) independent G(n, p) graphs, p = (1+eps) ln s / s."""
    out = set()
    for r in edge_sample_rounds(n, s, eps, seed):
        out |= r
    return out
