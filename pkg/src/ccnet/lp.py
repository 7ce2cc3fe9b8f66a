"""Compact flow LP relaxation, LP solving, and randomized rounding.

Per demand (x, y) there is one flow variable for each direction of every
base edge inside S(x, y); flows conserve at every safe vertex except y, push
one unit out of x, and share the edge capacity c_e between directions.
The degree variant adds a bound lam on every vertex's fractional degree.
"""

import math
import re
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .instance import FractionalSolution, InfeasibleInstanceError, Overlay, SafeSetSystem, validate_instance
from .sampling import _seed_sequence, edge_sample, star_sample
from .simplex import LpInfeasibleError, LpUnboundedError, simplex_solve

ROUNDING_FACTOR = 12
RESIDUAL_TOL = 1e-9


@dataclass
class LpProgram:
    """``min c.x`` subject to equality rows, ``<=`` rows and variable bounds."""

    variant: str
    var_names: list
    c: np.ndarray
    A_eq: sparse.csr_matrix
    b_eq: np.ndarray
    eq_names: list
    A_ub: sparse.csr_matrix
    b_ub: np.ndarray
    ub_names: list
    bounds: list
    cap_index: dict = field(default_factory=dict)  # edge -> column
    flow_index: dict = field(default_factory=dict)  # demand -> {(u, v): column}
    lam_index: int = None

    @property
    def num_vars(self):
        return len(self.var_names)

    @property
    def num_rows(self):
        return len(self.eq_names) + len(self.ub_names)


class _Rows:
    def __init__(self):
        self.data, self.rows, self.cols, self.rhs, self.names = [], [], [], [], []

    def add(self, name, coeffs, rhs):
        r = len(self.rhs)
        for col, val in coeffs:
            self.rows.append(r)
            self.cols.append(col)
            self.data.append(val)
        self.rhs.append(rhs)
        self.names.append(name)

    def matrix(self, ncols):
        return sparse.csr_matrix((self.data, (self.rows, self.cols)), shape=(len(self.rhs), ncols))


def build_flow_lp(sys: SafeSetSystem, variant="sum") -> LpProgram:
    if variant not in ("sum", "degree"):
        raise ValueError(f"unknown variant {variant!r}")
    report = validate_instance(sys)
    if not report.feasible:
        raise InfeasibleInstanceError(report.failures)

    names = []
    bounds = []
    cap_index = {}
    for e in sorted(sys.base_edges):
        cap_index[e] = len(names)
        names.append(f"c_{e[0]}_{e[1]}")
        bounds.append((0.0, 1.0))

    eq, ub = _Rows(), _Rows()
    flow_index = {}
    for d in sys.demands:
        x, y = d
        cols = {}
        for u, v in sys.safe_edges(d):
            for a, b in ((u, v), (v, u)):
                cols[(a, b)] = len(names)
                names.append(f"f_{x}_{y}__{a}_{b}")
                bounds.append((0.0, None))
            ub.add(f"cap_{x}_{y}__{u}_{v}",
                   [(cols[(u, v)], 1.0), (cols[(v, u)], 1.0), (cap_index[(u, v)], -1.0)], 0.0)
        flow_index[d] = cols
        out_arcs = {}
        for (a, b), col in cols.items():
            out_arcs.setdefault(a, []).append((col, 1.0))
            out_arcs.setdefault(b, []).append((col, -1.0))
        # y's row is implied by the others
        for w in sorted(sys.safe[d]):
            if w == y:
                continue
            eq.add(f"flow_{x}_{y}__{w}", out_arcs.get(w, []), 1.0 if w == x else 0.0)

    lam_index = None
    if variant == "degree":
        lam_index = len(names)
        names.append("lam")
        bounds.append((0.0, None))
        incident = {}
        for e, col in cap_index.items():
            incident.setdefault(e[0], []).append(col)
            incident.setdefault(e[1], []).append(col)
        for u in range(sys.n):
            ub.add(f"deg_{u}", [(col, 1.0) for col in incident.get(u, [])] + [(lam_index, -1.0)], 0.0)

    c = np.zeros(len(names))
    if variant == "sum":
        c[list(cap_index.values())] = 1.0
    else:
        c[lam_index] = 1.0
    nv = len(names)
    return LpProgram(variant, names, c, eq.matrix(nv), np.array(eq.rhs, dtype=float), eq.names,
                     ub.matrix(nv), np.array(ub.rhs, dtype=float), ub.names, bounds,
                     cap_index, flow_index, lam_index)


def max_residual(lp: LpProgram, x):
    res = 0.0
    if lp.A_eq.shape[0]:
        res = max(res, float(np.abs(lp.A_eq @ x - lp.b_eq).max()))
    if lp.A_ub.shape[0]:
        res = max(res, float(np.maximum(lp.A_ub @ x - lp.b_ub, 0).max()))
    lo = np.array([b[0] for b in lp.bounds])
    hi = np.array([np.inf if b[1] is None else b[1] for b in lp.bounds])
    res = max(res, float(np.maximum(lo - x, 0).max()), float(np.maximum(x - hi, 0).max()))
    return res


def _to_solution(lp: LpProgram, x, objective):
    x = np.where(np.abs(x) < 1e-12, 0.0, x)
    caps = {e: float(x[col]) for e, col in lp.cap_index.items()}
    flows = {}
    for d, cols in lp.flow_index.items():
        flows[d] = {arc: float(x[col]) for arc, col in cols.items() if x[col] > 0}
    lam = None if lp.lam_index is None else float(x[lp.lam_index])
    return FractionalSolution(caps, flows, float(objective), lam)


def solve_lp(lp: LpProgram, engine="highs") -> FractionalSolution:
    """Optimal basic solution of the program.

    ``engine="highs"`` uses the HiGHS dual simplex shipped with SciPy;
    ``engine="simplex"`` uses the built-in dense revised simplex. Raises
    :class:`LpInfeasibleError` / :class:`LpUnboundedError`.
    """
    if engine == "highs":
        res = linprog(lp.c, A_ub=lp.A_ub if lp.A_ub.shape[0] else None,
                      b_ub=lp.b_ub if lp.A_ub.shape[0] else None,
                      A_eq=lp.A_eq if lp.A_eq.shape[0] else None,
                      b_eq=lp.b_eq if lp.A_eq.shape[0] else None,
                      bounds=lp.bounds, method="highs-ds",
                      options={"primal_feasibility_tolerance": 1e-10,
                               "dual_feasibility_tolerance": 1e-10})
        if res.status == 2:
            raise LpInfeasibleError(res.message)
        if res.status == 3:
            raise LpUnboundedError(res.message)
        if res.status != 0:
            raise RuntimeError(f"HiGHS failed: {res.message}")
        x, obj = res.x, res.fun
    elif engine == "simplex":
        x, obj = simplex_solve(lp.c, lp.A_eq.toarray(), lp.b_eq, lp.A_ub.toarray(), lp.b_ub, lp.bounds)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    resid = max_residual(lp, x)
    if resid > RESIDUAL_TOL:
        # snap tiny violations introduced by floating point, then re-check
        x = np.clip(x, [b[0] for b in lp.bounds], [np.inf if b[1] is None else b[1] for b in lp.bounds])
        resid = max_residual(lp, x)
        if resid > RESIDUAL_TOL:
            raise RuntimeError(f"LP solution violates constraints by {resid:.3g}")
    return _to_solution(lp, x, obj)


def lp_value(sys: SafeSetSystem, variant="sum", engine="highs"):
    return solve_lp(build_flow_lp(sys, variant), engine).objective


# ---- LP text format -------------------------------------------------------

def _fmt(v):
    return repr(float(v)) if v != int(v) else str(int(v))


def _row_text(matrix, r, names):
    start, end = matrix.indptr[r], matrix.indptr[r + 1]
    terms = []
    for col, val in sorted(zip(matrix.indices[start:end], matrix.data[start:end])):
        sign = "-" if val < 0 else "+"
        mag = abs(val)
        coef = "" if mag == 1 else f"{_fmt(mag)} "
        terms.append(f"{sign} {coef}{names[col]}")
    text = " ".join(terms) if terms else "0 " + names[0]
    return text[2:] if text.startswith("+ ") else text


def write_lp_text(lp: LpProgram) -> str:
    """Render the program in the CPLEX-style LP text format."""
    lines = [f"\\ constrained connectivity flow LP ({lp.variant} variant)", "Minimize"]
    obj = sparse.csr_matrix(lp.c.reshape(1, -1))
    lines.append(" obj: " + _row_text(obj, 0, lp.var_names))
    lines.append("Subject To")
    for r, name in enumerate(lp.eq_names):
        lines.append(f" {name}: {_row_text(lp.A_eq, r, lp.var_names)} = {_fmt(lp.b_eq[r])}")
    for r, name in enumerate(lp.ub_names):
        lines.append(f" {name}: {_row_text(lp.A_ub, r, lp.var_names)} <= {_fmt(lp.b_ub[r])}")
    lines.append("Bounds")
    for name, (lo, hi) in zip(lp.var_names, lp.bounds):
        if hi is None:
            lines.append(f" {name} >= {_fmt(lo)}")
        else:
            lines.append(f" {_fmt(lo)} <= {name} <= {_fmt(hi)}")
    lines.append("End")
    return "\n".join(lines) + "\n"


_TERM = re.compile(r"([+-])?\s*(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)?\s*([A-Za-z_][\w.]*)")


def _parse_expr(text):
    coeffs = {}
    for sign, num, name in _TERM.findall(text):
        val = float(num) if num else 1.0
        coeffs[name] = coeffs.get(name, 0.0) + (-val if sign == "-" else val)
    return coeffs


def read_lp_text(text):
    """Parse the subset of LP text emitted by :func:`write_lp_text`.

    Returns (objective, rows, bounds) with rows as (name, coeffs, sense, rhs).
    """
    section = None
    objective, rows, bounds = {}, [], {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low in ("minimize", "subject to", "bounds", "end"):
            section = low
            continue
        if section == "minimize":
            objective = _parse_expr(line.split(":", 1)[1])
        elif section == "subject to":
            name, body = line.split(":", 1)
            m = re.match(r"(.*?)(<=|>=|=)\s*(\S+)$", body)
            rows.append((name.strip(), _parse_expr(m.group(1)), m.group(2), float(m.group(3))))
        elif section == "bounds":
            parts = line.split()
            if len(parts) == 3:
                bounds[parts[0]] = (float(parts[2]), None)
            else:
                bounds[parts[2]] = (float(parts[0]), float(parts[4]))
    return objective, rows, bounds


def read_assignment(text, lp: LpProgram) -> FractionalSolution:
    """Read a ``name value`` per line assignment produced by an external solver."""
    index = {name: i for i, name in enumerate(lp.var_names)}
    x = np.zeros(lp.num_vars)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0] not in index:
            raise ValueError(f"line {lineno}: expected '<variable> <value>', got {raw!r}")
        x[index[parts[0]]] = float(parts[1])
    resid = max_residual(lp, x)
    if resid > 1e-6:
        raise ValueError(f"assignment violates the program by {resid:.3g}")
    return _to_solution(lp, x, float(lp.c @ x))


def write_assignment(lp: LpProgram, sol: FractionalSolution) -> str:
    x = np.zeros(lp.num_vars)
    for e, col in lp.cap_index.items():
        x[col] = sol.capacities[e]
    for d, cols in lp.flow_index.items():
        for arc, val in sol.flows.get(d, {}).items():
            x[cols[arc]] = val
    if lp.lam_index is not None:
        x[lp.lam_index] = sol.lam
    return "".join(f"{name} {float(x[i])!r}\n" for i, name in enumerate(lp.var_names) if x[i] != 0)


# ---- rounding ---------------------------------------------------------------

def inclusion_probability(c_e, n, factor=ROUNDING_FACTOR):
    return min(factor * c_e * math.sqrt(n) * math.log(n), 1.0) if n > 1 else 1.0


def round_and_sample(sys: SafeSetSystem, frac: FractionalSolution, variant="sum", seed=None,
                     factor=ROUNDING_FACTOR, eps=0.5) -> Overlay:
    """Independent rounding with inflated probabilities, then random sampling.

    Phase 1 keeps base edge e with probability min(factor * c_e * sqrt(n) ln n, 1).
    Phase 2 adds star sampling with s = sqrt(n) (sum) or the G(n, p) union with
    s = sqrt(n) (degree), restricted to base edges.
    """
    n = sys.n
    ss = _seed_sequence(seed)
    phase1_seq, phase2_seq = ss.spawn(2)
    rng = np.random.default_rng(phase1_seq)
    edges = sorted(sys.base_edges)
    probs = np.array([inclusion_probability(frac.capacities.get(e, 0.0), n, factor) for e in edges])
    draws = rng.random(len(edges))
    phase1 = {e for e, p, u in zip(edges, probs, draws) if u < p}
    if variant == "sum":
        phase2 = star_sample(n, math.sqrt(n), phase2_seq)
    elif variant == "degree":
        phase2 = edge_sample(n, max(math.sqrt(n), 2.0), eps, phase2_seq)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    phase2 &= sys.base_edges
    provenance = {"solver": "lp-round", "seed": seed, "variant": variant,
                  "phase1_edges": len(phase1), "phase2_edges": len(phase2 - phase1),
                  "expected_phase1": float(probs.sum())}
    return Overlay(frozenset(phase1 | phase2), provenance)
