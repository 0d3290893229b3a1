"""Dense two-phase tableau simplex for small linear programs.

Solves

    maximize    c @ x
    subject to  A_ub @ x <= b_ub
                A_eq @ x == b_eq
                x >= 0

The problems built by :mod:`macrorealism.support` and :mod:`macrorealism.bounds`
have at most a few hundred columns, so a dense tableau with Bland's
anti-cycling rule is plenty.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LPResult", "linprog_max", "InfeasibleError", "UnboundedError"]

PIVOT_TOL = 1e-11


class InfeasibleError(ValueError):
    """Raised by callers that require a feasible program."""


class UnboundedError(ValueError):
    """Raised by callers that require a bounded program."""


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: np.ndarray | None
    value: float | None
    iterations: int

    @property
    def success(self) -> bool:
        return self.status == "optimal"


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            T[i] -= T[i, col] * T[row]


def _iterate(T: np.ndarray, basis: list[int], ncols: int, tol: float, max_iter: int) -> tuple[str, int]:
    """Run simplex pivots on tableau ``T`` restricted to the first ``ncols`` columns.

    The last row of ``T`` is the objective row (negated costs); the last
    column is the right-hand side.
    """
    m = T.shape[0] - 1
    for it in range(max_iter):
        obj = T[-1, :ncols]
        entering = -1
        for j in range(ncols):
            if obj[j] < -tol:
                entering = j
                break
        if entering < 0:
            return "optimal", it
        col = T[:m, entering]
        rhs = T[:m, -1]
        best_row = -1
        best_ratio = np.inf
        for i in range(m):
            if col[i] > tol:
                ratio = rhs[i] / col[i]
                if ratio < best_ratio - tol or (
                    abs(ratio - best_ratio) <= tol and basis[i] < basis[best_row]
                ):
                    best_ratio = ratio
                    best_row = i
        if best_row < 0:
            return "unbounded", it
        _pivot(T, best_row, entering)
        basis[best_row] = entering
    raise RuntimeError(f"simplex did not terminate within {max_iter} pivots")


def linprog_max(
    c,
    A_ub=None,
    b_ub=None,
    A_eq=None,
    b_eq=None,
    tol: float = PIVOT_TOL,
    max_iter: int = 50_000,
) -> LPResult:
    """Maximize ``c @ x`` over ``x >= 0`` with inequality and equality rows.

    Returns an :class:`LPResult`; infeasibility and unboundedness are reported
    through ``status`` rather than raised.
    """
    c = np.asarray(c, dtype=float).ravel()
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, dtype=float))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    A_eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, dtype=float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    if A_ub.shape != (b_ub.size, n) or A_eq.shape != (b_eq.size, n):
        raise ValueError("constraint matrix shapes do not match objective / right-hand sides")

    m_ub, m_eq = b_ub.size, b_eq.size
    m = m_ub + m_eq

    # Column layout: [x (n) | slacks (m_ub) | artificials (n_art) | rhs]
    rows = np.zeros((m, n + m_ub))
    rhs = np.zeros(m)
    rows[:m_ub, :n] = A_ub
    rows[:m_ub, n : n + m_ub] = np.eye(m_ub)
    rhs[:m_ub] = b_ub
    rows[m_ub:, :n] = A_eq
    rhs[m_ub:] = b_eq
    flip = rhs < 0
    rows[flip] *= -1.0
    rhs[flip] *= -1.0

    # A slack with +1 in a row with nonnegative rhs is already a basic column.
    needs_art = [i >= m_ub or flip[i] for i in range(m)]
    art_rows = [i for i in range(m) if needs_art[i]]
    n_art = len(art_rows)
    n_struct = n + m_ub
    T = np.zeros((m + 1, n_struct + n_art + 1))
    T[:m, :n_struct] = rows
    T[:m, -1] = rhs
    basis = [0] * m
    for i in range(m):
        if not needs_art[i]:
            basis[i] = n + i
    for k, i in enumerate(art_rows):
        T[i, n_struct + k] = 1.0
        basis[i] = n_struct + k

    iterations = 0
    if n_art:
        # Phase 1: maximize -sum(artificials).
        T[-1, n_struct : n_struct + n_art] = 1.0
        for i in art_rows:
            T[-1] -= T[i]
        status, it = _iterate(T, basis, n_struct + n_art, tol, max_iter)
        iterations += it
        if T[-1, -1] < -1e-9:
            return LPResult("infeasible", None, None, iterations)
        # Drive remaining artificials out of the basis; drop redundant rows.
        keep = []
        for i in range(m):
            if basis[i] >= n_struct:
                candidates = np.flatnonzero(np.abs(T[i, :n_struct]) > tol)
                if candidates.size == 0:
                    continue
                _pivot(T, i, int(candidates[0]))
                basis[i] = int(candidates[0])
            keep.append(i)
        T = np.vstack([T[keep], T[-1:]])
        T = np.hstack([T[:, :n_struct], T[:, -1:]])
        basis = [basis[i] for i in keep]
        m = len(keep)

    # Phase 2.
    T[-1] = 0.0
    T[-1, :n] = -c
    for i, b in enumerate(basis):
        if T[-1, b] != 0.0:
            T[-1] -= T[-1, b] * T[i]
    status, it = _iterate(T, basis, n_struct, tol, max_iter)
    iterations += it
    if status == "unbounded":
        return LPResult("unbounded", None, None, iterations)

    x = np.zeros(n_struct)
    for i, b in enumerate(basis):
        x[b] = T[i, -1]
    x = np.maximum(x[:n], 0.0)
    return LPResult("optimal", x, float(c @ x), iterations)
