"""Overlaps of discrete densities and the exact support curve ``alpha -> omega(f_P, alpha f_q)``.

On a finite space the curve is piecewise linear and concave: state ``l`` with
``f_q[l] > 0`` contributes ``alpha * f_q[l]`` until ``alpha`` reaches the ratio
``f_P[l] / f_q[l]`` and ``f_P[l]`` afterwards.  The breakpoints are therefore
the distinct ratios, and the curve saturates at the mass ``f_P`` puts on the
support of ``f_q``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SupportCurve",
    "symmetric_overlap",
    "asymmetric_overlap",
    "total_variation_identity_check",
    "support_curve",
    "curve_eval",
    "RATIO_DEDUP_TOL",
]

RATIO_DEDUP_TOL = 1e-14


def _pair(f, g) -> tuple[np.ndarray, np.ndarray]:
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != g.shape:
        raise ValueError(f"length mismatch: {f.shape} vs {g.shape}")
    return f, g


def symmetric_overlap(f, g) -> float:
    """Sum of pointwise minima.  Inputs need not be normalized."""
    f, g = _pair(f, g)
    return float(np.minimum(f, g).sum())


def asymmetric_overlap(f_nu, f_mu) -> float:
    """Mass that ``f_mu`` assigns to the (strict) support of ``f_nu``."""
    f_nu, f_mu = _pair(f_nu, f_mu)
    return float(f_mu[f_nu > 0.0].sum())


def total_variation_identity_check(f, g) -> tuple[float, float, float]:
    """Three evaluations of the overlap of two normalized densities.

    Returns ``(sum min(f, g), 1 - sup_D [F(D) - G(D)], 1 - TV(f, g))``.  The
    supremum over events is attained at ``D = {f > g}``.
    """
    f, g = _pair(f, g)
    omega = float(np.minimum(f, g).sum())
    one_minus_sup = 1.0 - float(np.maximum(f - g, 0.0).sum())
    one_minus_half_l1 = 1.0 - 0.5 * float(np.abs(f - g).sum())
    return omega, one_minus_sup, one_minus_half_l1


@dataclass(frozen=True)
class SupportCurve:
    """Piecewise-linear concave curve given by its breakpoints.

    ``unreachable_mass`` is the part of ``f_P`` sitting where ``f_q`` vanishes;
    no scaling of ``f_q`` ever covers it.
    """

    alphas: np.ndarray
    values: np.ndarray
    unreachable_mass: float = 0.0

    def __post_init__(self):
        a = np.array(self.alphas, dtype=float)
        v = np.array(self.values, dtype=float)
        if a.ndim != 1 or a.shape != v.shape or a.size == 0:
            raise ValueError("breakpoint arrays must be equal-length, nonempty vectors")
        if a[0] != 0.0 or v[0] != 0.0:
            raise ValueError("curve must start at (0, 0)")
        if np.any(np.diff(a) <= 0.0):
            raise ValueError("breakpoint alphas must be strictly increasing")
        a.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "values", v)

    @property
    def asymptote(self) -> float:
        return float(self.values[-1])

    @property
    def breakpoints(self) -> list[tuple[float, float]]:
        return list(zip(self.alphas.tolist(), self.values.tolist()))

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.alphas)

    def __call__(self, alpha):
        return curve_eval(self, alpha)

    def to_csv(self) -> str:
        """``alpha,omega`` rows: the breakpoints, then one row past the last one at the asymptote."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["alpha", "omega"])
        for a, v in self.breakpoints:
            writer.writerow([f"{a:.17g}", f"{v:.17g}"])
        tail = 2.0 * self.alphas[-1] if self.alphas[-1] > 0.0 else 1.0
        writer.writerow([f"{tail:.17g}", f"{self.asymptote:.17g}"])
        return buf.getvalue()


def support_curve(f_p, f_q) -> SupportCurve:
    """Exact breakpoint representation of ``alpha -> omega(f_p, alpha * f_q)``."""
    f_p, f_q = _pair(f_p, f_q)
    on = f_q > 0.0
    unreachable = float(f_p[~on].sum())
    if not on.any():
        return SupportCurve(np.zeros(1), np.zeros(1), unreachable)

    ratios = f_p[on] / f_q[on]
    order = np.argsort(ratios, kind="stable")
    ratios, fp_on, fq_on = ratios[order], f_p[on][order], f_q[on][order]

    # Past ratio r the states with ratio <= r contribute f_p, the rest alpha * f_q.
    covered = np.cumsum(fp_on)
    remaining_q = fq_on.sum() - np.cumsum(fq_on)

    alphas = [0.0]
    values = [0.0]
    for i, r in enumerate(ratios):
        last = i == ratios.size - 1 or ratios[i + 1] - r > RATIO_DEDUP_TOL
        if not last:
            continue
        value = covered[i] + r * max(remaining_q[i], 0.0)
        if r - alphas[-1] <= RATIO_DEDUP_TOL:
            # Ratio ~0 (f_p vanishes where f_q lives) coincides with the origin.
            continue
        alphas.append(float(r))
        values.append(float(value))
    # Same summation as asymmetric_overlap so the asymptote matches it bit for bit.
    values[-1] = float(f_p[on].sum())
    return SupportCurve(np.array(alphas), np.array(values), unreachable)


def curve_eval(curve: SupportCurve, alpha):
    """Linear interpolation between breakpoints, constant past the last one."""
    a = np.asarray(alpha, dtype=float)
    if np.any(a < 0.0):
        raise ValueError("alpha must be nonnegative")
    out = np.interp(a, curve.alphas, curve.values, right=curve.asymptote)
    return float(out) if out.ndim == 0 else out
