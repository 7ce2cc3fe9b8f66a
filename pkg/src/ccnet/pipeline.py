"""One entry point per solver, shared by the command line and batch reports."""

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .hierarchical import hierarchical_greedy
from .ibgp import verify_safe_paths
from .instance import Overlay, SafeSetSystem
from .lp import build_flow_lp, round_and_sample, solve_lp
from .oracle import OracleBudget, oracle_min
from .primal_dual import primal_dual_solve, theory_t
from .sampling import star_sample

ALGORITHMS = ("pd", "pd-sample", "lp-round", "hier", "oracle")


@dataclass
class SolveResult:
    overlay: Overlay
    lower_bound: object = None
    certificate: object = None
    attempts: list = field(default_factory=list)  # [(seed, verified, size)]
    runtime_ms: float = 0.0
    verified: bool = False


def attempt_seed(seed, attempt):
    """Seed for retry ``attempt``; attempt 0 uses the seed unchanged."""
    if attempt == 0:
        return seed
    base = 0 if seed is None else seed
    return np.random.SeedSequence([base, attempt])


def _seed_repr(s):
    if isinstance(s, np.random.SeedSequence):
        return f"{s.entropy}+{list(s.spawn_key) or ''}"
    return s


def solve(sys: SafeSetSystem, algo="pd", variant="sum", t=None, seed=None, retries=0,
          engine="highs", budget=None) -> SolveResult:
    """Run one solver and re-verify its output against every demand."""
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}")
    if variant == "degree" and algo in ("pd", "pd-sample", "hier"):
        raise ValueError(f"{algo} solves the sum variant only")
    start = time.perf_counter()
    result = None
    if algo == "pd":
        overlay, cert = primal_dual_solve(sys, t if t is not None else sys.n)
        result = SolveResult(overlay, cert.dual_objective(), cert)
    elif algo == "pd-sample":
        tt = t if t is not None else theory_t(sys.n)
        pd_overlay, cert = primal_dual_solve(sys, tt)
        for attempt in range(retries + 1):
            s = attempt_seed(seed, attempt)
            stars = star_sample(sys.n, tt, s) & sys.base_edges
            overlay = Overlay(pd_overlay.edges | frozenset(stars),
                              {"solver": "pd-sample", "t": tt, "seed": _seed_repr(s),
                               "pd_edges": len(pd_overlay), "star_edges": len(stars - pd_overlay.edges)})
            ok = verify_safe_paths(sys, overlay).ok
            if result is None:
                result = SolveResult(overlay, cert.dual_objective(), cert)
            result.attempts.append((_seed_repr(s), ok, len(overlay)))
            result.overlay = overlay
            if ok:
                break
    elif algo == "lp-round":
        frac = solve_lp(build_flow_lp(sys, variant), engine)
        result = SolveResult(None, Fraction(frac.objective).limit_denominator(10 ** 6))
        for attempt in range(retries + 1):
            s = attempt_seed(seed, attempt)
            overlay = round_and_sample(sys, frac, variant, s)
            overlay.provenance["seed"] = _seed_repr(s)
            ok = verify_safe_paths(sys, overlay).ok
            result.attempts.append((_seed_repr(s), ok, len(overlay)))
            result.overlay = overlay
            if ok:
                break
    elif algo == "hier":
        overlay = hierarchical_greedy(sys)
        result = SolveResult(overlay, len(overlay))
    else:
        overlay = oracle_min(sys, variant, budget or OracleBudget())
        result = SolveResult(overlay, overlay.provenance["value"])
    result.runtime_ms = (time.perf_counter() - start) * 1000
    result.verified = verify_safe_paths(sys, result.overlay).ok
    return result
