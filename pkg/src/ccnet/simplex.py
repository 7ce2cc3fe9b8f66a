"""Dense two-phase revised simplex, the built-in LP engine.

Solves ``min c.x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  lo <= x <= hi`` with
finite lower bounds. Pricing is Dantzig's rule with a fall back to Bland's
rule after a run of degenerate pivots, which rules out cycling. Intended for
small programs and as an independent cross-check of external engines.
"""

import numpy as np


class LpInfeasibleError(Exception):
    pass


class LpUnboundedError(Exception):
    pass


def _standard_form(c, A_eq, b_eq, A_ub, b_ub, bounds):
    """Shift to x' = x - lo >= 0, add slacks for <= rows and finite upper bounds."""
    nvar = len(c)
    lo = np.array([b[0] for b in bounds], dtype=float)
    hi = np.array([np.inf if b[1] is None else b[1] for b in bounds], dtype=float)
    if np.any(~np.isfinite(lo)):
        raise ValueError("baseline simplex needs finite lower bounds")
    A_eq = np.zeros((0, nvar)) if A_eq is None else np.asarray(A_eq, dtype=float)
    A_ub = np.zeros((0, nvar)) if A_ub is None else np.asarray(A_ub, dtype=float)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float)

    upper = np.flatnonzero(np.isfinite(hi))
    A_up = np.zeros((len(upper), nvar))
    A_up[np.arange(len(upper)), upper] = 1.0
    A_le = np.vstack([A_ub, A_up])
    b_le = np.concatenate([b_ub - A_ub @ lo, hi[upper] - lo[upper]])
    b_eq = b_eq - A_eq @ lo

    m_eq, m_le = A_eq.shape[0], A_le.shape[0]
    A = np.zeros((m_eq + m_le, nvar + m_le))
    A[:m_eq, :nvar] = A_eq
    A[m_eq:, :nvar] = A_le
    A[m_eq:, nvar:] = np.eye(m_le)
    b = np.concatenate([b_eq, b_le])
    cost = np.concatenate([np.asarray(c, dtype=float), np.zeros(m_le)])
    return A, b, cost, lo


class _Revised:
    def __init__(self, A, b, tol):
        self.A = A
        self.b = b
        self.tol = tol
        self.m, self.ncol = A.shape

    def run(self, cost, basis, allowed, max_iter):
        A, tol = self.A, self.tol
        B_inv = np.linalg.inv(A[:, basis])
        degenerate_run = 0
        for it in range(max_iter):
            if it and it % 64 == 0:
                B_inv = np.linalg.inv(A[:, basis])
            x_b = np.maximum(B_inv @ self.b, 0.0)
            y = cost[basis] @ B_inv
            reduced = cost - y @ A
            reduced[basis] = 0.0
            reduced[~allowed] = 0.0
            candidates = np.flatnonzero(reduced < -tol)
            if len(candidates) == 0:
                return basis, B_inv
            if degenerate_run > 50:
                enter = candidates[0]
            else:
                enter = candidates[np.argmin(reduced[candidates])]
            d = B_inv @ A[:, enter]
            pos = np.flatnonzero(d > tol)
            if len(pos) == 0:
                raise LpUnboundedError("objective is unbounded below")
            ratios = x_b[pos] / d[pos]
            best = ratios.min()
            ties = pos[ratios <= best + tol]
            # Bland tie-break on the leaving variable: smallest column index
            leave = ties[np.argmin(np.asarray(basis)[ties])]
            degenerate_run = degenerate_run + 1 if best <= tol else 0
            basis[leave] = enter
            # product-form update of the basis inverse
            pivot = d[leave]
            row = B_inv[leave] / pivot
            B_inv -= np.outer(d, row)
            B_inv[leave] = row
        raise RuntimeError("simplex iteration limit reached")


def simplex_solve(c, A_eq=None, b_eq=None, A_ub=None, b_ub=None, bounds=None,
                  tol=1e-10, max_iter=200000):
    """Return (x, objective) for the program, raising on infeasible/unbounded."""
    nvar = len(c)
    if bounds is None:
        bounds = [(0.0, None)] * nvar
    A, b, cost, lo = _standard_form(c, A_eq, b_eq, A_ub, b_ub, bounds)
    m, ncol = A.shape
    if m == 0:
        if np.any(np.asarray(c) < 0):
            raise LpUnboundedError("objective is unbounded below")
        return lo.copy(), float(np.dot(c, lo))

    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1
    # phase I: artificial column per row
    A1 = np.hstack([A, np.eye(m)])
    cost1 = np.concatenate([np.zeros(ncol), np.ones(m)])
    solver = _Revised(A1, b, tol)
    basis = list(range(ncol, ncol + m))
    allowed = np.ones(ncol + m, dtype=bool)
    basis, B_inv = solver.run(cost1, basis, allowed, max_iter)
    x_b = B_inv @ b
    infeas = sum(x_b[i] for i, j in enumerate(basis) if j >= ncol)
    if infeas > 1e-7 * max(1.0, np.abs(b).max()):
        raise LpInfeasibleError(f"program is infeasible (phase I residual {infeas:.3g})")

    # drive zero-valued artificials out of the basis where possible
    for i, j in enumerate(basis):
        if j < ncol:
            continue
        row = B_inv[i] @ A1[:, :ncol]
        in_basis = set(basis)
        nonbasic = [k for k in np.flatnonzero(np.abs(row) > 1e-9) if k not in in_basis]
        if nonbasic:
            enter = nonbasic[0]
            d = B_inv @ A1[:, enter]
            pivot_row = B_inv[i] / d[i]
            B_inv -= np.outer(d, pivot_row)
            B_inv[i] = pivot_row
            basis[i] = enter
    # remaining artificials sit on redundant rows; keep them at zero
    allowed = np.concatenate([np.ones(ncol, dtype=bool), np.zeros(m, dtype=bool)])
    cost2 = np.concatenate([cost, np.zeros(m)])
    basis, B_inv = solver.run(cost2, basis, allowed, max_iter)
    x_b = B_inv @ b
    x = np.zeros(ncol + m)
    x[basis] = x_b
    x = np.where(np.abs(x) < 1e-12, 0.0, x)
    sol = x[:nvar] + lo
    return sol, float(np.dot(c, sol))
