"""(alpha, beta)-support of preparations on the cells of the macro-observable.

A preparation ``P`` is (alpha, beta)-supported on the cell of ``q`` when

    sup_{f_q in hull(Pi_q)} omega(f_P, alpha f_q) + beta >= P(q | Q, P)

for every density ``f_P`` modelling ``P``.  The supremum over the convex hull
of finitely many generators is a small linear program.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ontic import OnticModel
from .overlap import symmetric_overlap
from .simplex import linprog_max

__all__ = [
    "AbPair",
    "SupportVerdict",
    "sup_overlap",
    "best_mixture",
    "beta_min",
    "is_ab_supported",
    "ab_verdict",
    "model_support_curve",
    "is_eigenpreparation_supported",
]


@dataclass(frozen=True)
class AbPair:
    alpha: float
    beta: float

    def __post_init__(self):
        if not self.alpha >= 0.0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")


def best_mixture(f_p, generators: Sequence, alpha: float) -> tuple[float, np.ndarray]:
    """Optimal value and mixing weights for ``max_c omega(f_p, alpha * sum_i c_i g_i)``.

    The program is

        maximize    sum(m)
        subject to  m <= f_p,   m - G.T @ y <= 0,   sum(y) <= alpha,   m, y >= 0

    with ``y = alpha * c``, restricted to states where both ``f_p`` and some generator are positive
    (every other state contributes nothing).
    """
    if len(generators) == 0:
        raise ValueError("need at least one eigen density")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    f_p = np.asarray(f_p, dtype=float)
    G = np.array([np.asarray(g, dtype=float) for g in generators])
    if G.shape[1:] != f_p.shape:
        raise ValueError("generators and f_p must have equal length")
    k = G.shape[0]
    if k == 1:
        return symmetric_overlap(f_p, alpha * G[0]), np.ones(1)
    if alpha == 0.0:
        return 0.0, np.full(k, 1.0 / k)

    live = (f_p > 0.0) & (G > 0.0).any(axis=0)
    n = int(live.sum())
    if n == 0:
        return 0.0, np.full(k, 1.0 / k)
    fp, Gl = f_p[live], G[:, live]

    # Variables: [m (n) | y (k)] with y = alpha * c.  Adding mass to a generator never
    # lowers the overlap, so sum(y) <= alpha is as good as equality and keeps the
    # relevant weights on the scale of f_p even when alpha is huge.
    c = np.concatenate([np.ones(n), np.zeros(k)])
    A_ub = np.zeros((2 * n + 1, n + k))
    A_ub[:n, :n] = np.eye(n)
    A_ub[n : 2 * n, :n] = np.eye(n)
    A_ub[n : 2 * n, n:] = -Gl.T
    A_ub[-1, n:] = 1.0
    b_ub = np.concatenate([fp, np.zeros(n), [alpha]])
    res = linprog_max(c, A_ub, b_ub)
    if not res.success:
        raise RuntimeError(f"overlap program unexpectedly {res.status}")
    y = np.clip(res.x[n:], 0.0, None)
    y += max(alpha - y.sum(), 0.0) / k
    weights = y / y.sum()
    # Report the overlap the weights actually achieve rather than the tableau value.
    return symmetric_overlap(f_p, alpha * (weights @ G)), weights


def sup_overlap(f_p, generators: Sequence, alpha: float) -> float:
    """Supremum of ``omega(f_p, alpha f)`` over convex combinations ``f`` of ``generators``."""
    return best_mixture(f_p, generators, alpha)[0]


def _sup_for(model: OnticModel, f_p: np.ndarray, q: str, alpha: float) -> float:
    gens = model.eigen_densities.get(q, ())
    return sup_overlap(f_p, gens, alpha) if gens else 0.0


def _check_outcome(model: OnticModel, q: str) -> None:
    if q not in model.space.outcomes:
        raise KeyError(f"unknown Q outcome {q!r}")


def beta_min(model: OnticModel, prep: str, q: str, alpha: float) -> float:
    """Smallest beta for which ``prep`` is (alpha, beta)-supported on the cell of ``q``."""
    _check_outcome(model, q)
    cell = model.space.cell_mask(q)
    worst = 0.0
    for f_p in model.densities(prep):
        slack = float(f_p[cell].sum()) - _sup_for(model, f_p, q, alpha)
        worst = max(worst, slack)
    return min(worst, 1.0)


@dataclass(frozen=True)
class SupportVerdict:
    alpha: float
    beta: float
    supported: bool
    witness_prep: str | None
    witness_q: str | None
    witness_beta_min: float

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "supported": self.supported,
            "witness": {"prep": self.witness_prep, "q": self.witness_q, "beta_min": self.witness_beta_min},
        }


def ab_verdict(model: OnticModel, alpha: float, beta: float, tol: float = 1e-12) -> SupportVerdict:
    """Check every preparation (eigenpreparations included) against every Q outcome.

    The witness is the (preparation, outcome) pair with the largest beta_min.
    """
    AbPair(alpha, beta)
    best = (-1.0, None, None)
    for prep in model.preparation_labels:
        for q in model.space.outcomes:
            b = beta_min(model, prep, q, alpha)
            if b > best[0]:
                best = (b, prep, q)
    b, prep, q = best
    return SupportVerdict(alpha, beta, beta >= b - tol, prep, q, b)


def is_ab_supported(model: OnticModel, alpha: float, beta: float, tol: float = 1e-12) -> bool:
    return ab_verdict(model, alpha, beta, tol).supported


def model_support_curve(model: OnticModel, prep: str, q: str, alpha_grid) -> list[tuple[float, float]]:
    """``(alpha, sup_overlap)`` on a grid; with several densities for ``prep`` the smallest value is kept."""
    _check_outcome(model, q)
    grid = np.asarray(alpha_grid, dtype=float)
    if np.any(grid < 0) or np.any(np.diff(grid) < 0):
        raise ValueError("alpha grid must be sorted and nonnegative")
    out = []
    for a in grid:
        value = min(_sup_for(model, f_p, q, float(a)) for f_p in model.densities(prep))
        out.append((float(a), value))
    return out


def is_eigenpreparation_supported(model: OnticModel, transformed: bool = False) -> bool:
    """Whether every preparation density lives inside the union of eigen-density supports.

    With ``transformed=True`` the images of every preparation and eigenpreparation
    under each kernel are checked as well, since those are preparations too.
    """
    covered = np.zeros(model.size, dtype=bool)
    for fs in model.eigen_densities.values():
        for f in fs:
            covered |= f > 0.0
    dens = [f for fs in model.prep_densities.values() for f in fs]
    if transformed:
        base = dens + [f for fs in model.eigen_densities.values() for f in fs]
        dens += [f @ K for K in model.kernels.values() for f in base]
    return all(not np.any((f > 0.0) & ~covered) for f in dens)
