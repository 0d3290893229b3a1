"""Macrorealism inequalities, experimental exclusion lines and noise thresholds.

All functions read a fixed set of entries from a :class:`~macrorealism.ptm.PtmTable`:

=================  ==========================
``p_q1_P``         P(q1 | Q, P)
``p_q2_TP``        P(q2 | Q, T(P))
``p_a1_TP``        P(a1 | A, T(P))
``p_a2_Pq1``       P(a2 | A, P_q1)
``p_a3_TPq1``      P(a3 | A, T(P_q1))
``p_q3_TPq1``      P(q3 | Q, T(P_q1))
=================  ==========================

The first three give the *gap* ``p_q1_P - p_q2_TP - p_a1_TP``; the last three
are the *premises*, whose sum is the slope of the bound ``alpha * premises + beta``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, fields
from typing import Mapping, Sequence, Union

import numpy as np

from .ontic import OnticModel
from .overlap import SupportCurve
from .ptm import PtmTable
from .simplex import linprog_max
from .support import beta_min

__all__ = [
    "ExperimentFrequencies",
    "ExclusionLine",
    "ExclusionRegion",
    "RuledOutVerdict",
    "MixtureVerdict",
    "EpsilonQuadratic",
    "table_quantities",
    "theorem1_premises_hold",
    "premise_sum",
    "gap",
    "theorem2_rhs",
    "theorem2_violated",
    "strict_premise_sum",
    "theorem2_rhs_strict",
    "exclusion_line",
    "ruled_out",
    "excluded_region",
    "em_ruled_out",
    "epsilon_quadratic",
    "worst_case_epsilon",
    "epsilon_residual",
    "mixture_feasible",
    "lemma1_check",
    "CROSSING_MARGIN",
]

CROSSING_MARGIN = 1e-12
MIXTURE_TOL = 1e-9

_ROLES = {
    "p_q1_P": ("q1", "Q", "P"),
    "p_q2_TP": ("q2", "Q", "T(P)"),
    "p_a1_TP": ("a1", "A", "T(P)"),
    "p_a2_Pq1": ("a2", "A", "P_q1"),
    "p_a3_TPq1": ("a3", "A", "T(P_q1)"),
    "p_q3_TPq1": ("q3", "Q", "T(P_q1)"),
}


def table_quantities(table: PtmTable) -> dict[str, float]:
    """The six table entries the inequalities use, keyed as in the module docstring."""
    try:
        return {name: table.prob(*role) for name, role in _ROLES.items()}
    except KeyError as exc:
        raise KeyError(f"table is missing a required entry: {exc.args[0]}") from None


@dataclass(frozen=True)
class ExperimentFrequencies:
    """Relative frequencies estimating the six table entries."""

    fQ1_P: float
    fQ2_TP: float
    fA1_TP: float
    fA2_Pq1: float
    fA3_TPq1: float
    fQ3_TPq1: float

    def __post_init__(self):
        for f in fields(self):
            v = float(getattr(self, f.name))
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{f.name}={v} is not a frequency in [0, 1]")
            object.__setattr__(self, f.name, v)

    @classmethod
    def from_table(cls, table: PtmTable) -> "ExperimentFrequencies":
        q = table_quantities(table)
        return cls(q["p_q1_P"], q["p_q2_TP"], q["p_a1_TP"], q["p_a2_Pq1"], q["p_a3_TPq1"], q["p_q3_TPq1"])

    @classmethod
    def from_dict(cls, data: Mapping[str, float]) -> "ExperimentFrequencies":
        names = [f.name for f in fields(cls)]
        missing = [n for n in names if n not in data]
        extra = [k for k in data if k not in names]
        if missing or extra:
            raise ValueError(f"frequencies: missing {missing}, unexpected {extra}")
        return cls(**{n: data[n] for n in names})

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    def adversarial(self, epsilon: float) -> "ExperimentFrequencies":
        """Shift every frequency by ``epsilon`` in the direction that hurts exclusion, clipped to [0, 1]."""

        def clip(x):
            return min(max(x, 0.0), 1.0)

        return ExperimentFrequencies(
            clip(self.fQ1_P - epsilon),
            clip(self.fQ2_TP + epsilon),
            clip(self.fA1_TP + epsilon),
            clip(self.fA2_Pq1 + epsilon),
            clip(self.fA3_TPq1 + epsilon),
            clip(self.fQ3_TPq1 + epsilon),
        )


Observations = Union[PtmTable, ExperimentFrequencies]


def _values(obs: Observations) -> tuple[float, float, float]:
    """``(p_q1_P, p_q2_TP + p_a1_TP, premise sum)`` from a table or frequencies."""
    if isinstance(obs, ExperimentFrequencies):
        return obs.fQ1_P, obs.fQ2_TP + obs.fA1_TP, obs.fA2_Pq1 + obs.fA3_TPq1 + obs.fQ3_TPq1
    q = table_quantities(obs)
    return q["p_q1_P"], q["p_q2_TP"] + q["p_a1_TP"], q["p_a2_Pq1"] + q["p_a3_TPq1"] + q["p_q3_TPq1"]


def theorem1_premises_hold(table: PtmTable, tol: float = 1e-12) -> bool:
    """All three premise probabilities vanish to within ``tol``."""
    q = table_quantities(table)
    return all(q[k] <= tol for k in ("p_a2_Pq1", "p_a3_TPq1", "p_q3_TPq1"))


def premise_sum(table: PtmTable) -> float:
    return _values(table)[2]


def gap(table: PtmTable) -> float:
    """P(q1|Q,P) - P(q2|Q,T,P) - P(a1|A,T,P)."""
    q = table_quantities(table)
    return q["p_q1_P"] - q["p_q2_TP"] - q["p_a1_TP"]


def _check_ab(alpha: float, beta: float) -> None:
    if not alpha >= 0.0:
        raise ValueError("alpha must be nonnegative")
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")


def theorem2_rhs(table: PtmTable, alpha: float, beta: float) -> float:
    _check_ab(alpha, beta)
    return alpha * premise_sum(table) + beta


def strict_premise_sum(table: PtmTable) -> float:
    """Premise sum with P(a2|A,T,P_q1) in place of P(a2|A,P_q1).

    This is the quantity the supremum argument actually controls.  The two
    coincide whenever the eigenpreparation's image under T never answers a2.
    """
    try:
        a2 = table.prob("a2", "A", "T(P_q1)")
    except KeyError as exc:
        raise KeyError(f"table is missing a required entry: {exc.args[0]}") from None
    q = table_quantities(table)
    return a2 + q["p_a3_TPq1"] + q["p_q3_TPq1"]


def theorem2_rhs_strict(table: PtmTable, alpha: float, beta: float) -> float:
    """``alpha * strict_premise_sum + beta``; a bound every finite ontic model obeys.

    :func:`theorem2_rhs` uses the untransformed a2 entry and can be beaten by
    models whose kernel moves the q1 cell onto a2 states (see the tests).
    """
    _check_ab(alpha, beta)
    return alpha * strict_premise_sum(table) + beta


def theorem2_violated(table: PtmTable, alpha: float, beta: float) -> bool:
    """True when no ontic model can make P (alpha, beta)-supported on the q1 cell."""
    return gap(table) > theorem2_rhs(table, alpha, beta)


@dataclass(frozen=True)
class ExclusionLine:
    """``E(alpha) = intercept + slope * alpha``; ``target`` is the observed f^Q_1(P)."""

    intercept: float
    slope: float
    target: float

    def __post_init__(self):
        for name in ("intercept", "slope", "target"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")

    def __call__(self, alpha):
        return self.intercept + self.slope * np.asarray(alpha, dtype=float)


def exclusion_line(freqs: ExperimentFrequencies) -> ExclusionLine:
    return ExclusionLine(
        intercept=freqs.fQ2_TP + freqs.fA1_TP,
        slope=freqs.fA2_Pq1 + freqs.fA3_TPq1 + freqs.fQ3_TPq1,
        target=freqs.fQ1_P,
    )


@dataclass(frozen=True)
class RuledOutVerdict:
    ruled_out: bool
    witness_alpha: float | None
    crossing_alpha: float | None = None  # first alpha where the curve meets the line from below

    def to_dict(self) -> dict:
        return asdict(self)


def ruled_out(curve: SupportCurve | Sequence[tuple[float, float]], line: ExclusionLine) -> RuledOutVerdict:
    """Does the support curve rise strictly above ``line`` anywhere?

    For a :class:`SupportCurve` the test is exact: curve minus line is concave
    and piecewise linear with a nonincreasing tail, so its maximum sits at a
    breakpoint.  For plain ``(alpha, value)`` samples only the samples are
    checked.
    """
    if isinstance(curve, SupportCurve):
        alphas, values = curve.alphas, curve.values
    else:
        pts = np.asarray(curve, dtype=float).reshape(-1, 2)
        alphas, values = pts[:, 0], pts[:, 1]
    excess = values - line(alphas)
    above = np.flatnonzero(excess > CROSSING_MARGIN)
    if above.size == 0:
        return RuledOutVerdict(False, None, None)
    i = int(above[0])
    witness = float(alphas[i])
    crossing = witness
    if i > 0 and excess[i - 1] <= 0.0:
        # Exact intersection on the segment ending at the witness.
        t = -excess[i - 1] / (excess[i] - excess[i - 1])
        crossing = float(alphas[i - 1] + t * (alphas[i] - alphas[i - 1]))
    return RuledOutVerdict(True, witness, crossing)


@dataclass(frozen=True)
class ExclusionRegion:
    """Pairs with ``beta < beta_bound(alpha)`` are excluded by the data."""

    line: ExclusionLine

    def beta_bound(self, alpha):
        raw = self.line.target - self.line(alpha)
        out = np.clip(raw, 0.0, 1.0)
        return float(out) if out.ndim == 0 else out

    def excludes(self, alpha: float, beta: float) -> bool:
        return beta < self.beta_bound(alpha)

    @property
    def zero_alpha(self) -> float | None:
        """Alpha beyond which nothing is excluded (None if the bound never reaches 0)."""
        room = self.line.target - self.line.intercept
        if room <= 0.0:
            return 0.0
        if self.line.slope <= 0.0:
            return None
        return room / self.line.slope

    def default_alphas(self) -> list[float]:
        z = self.zero_alpha
        if z is None or z == 0.0:
            return [0.0, 1.0]
        return [0.0, z, 2.0 * z]

    def to_csv(self, alphas: Sequence[float] | None = None) -> str:
        alphas = self.default_alphas() if alphas is None else list(alphas)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["alpha", "beta_bound"])
        for a in alphas:
            writer.writerow([f"{a:.17g}", f"{self.beta_bound(a):.17g}"])
        return buf.getvalue()


def excluded_region(freqs: ExperimentFrequencies) -> ExclusionRegion:
    return ExclusionRegion(exclusion_line(freqs))


def em_ruled_out(freqs: ExperimentFrequencies) -> bool:
    """Mixing-model exclusion test: the line evaluated at alpha = f^Q_1(P) lies below f^Q_1(P)."""
    line = exclusion_line(freqs)
    return line.intercept + freqs.fQ1_P * line.slope < freqs.fQ1_P


@dataclass(frozen=True)
class EpsilonQuadratic:
    """``a eps^2 + b eps + c > 0`` is the worst-case exclusion condition."""

    a: float
    b: float
    c: float

    def smallest_positive_root(self) -> float:
        if self.c <= 0.0:
            return 0.0
        disc = self.b * self.b - 4.0 * self.a * self.c
        if disc < 0.0:
            return math.inf
        # c > 0 and b < 0: the smaller root is c / (a * larger root); avoids cancellation.
        return 2.0 * self.c / (-self.b + math.sqrt(disc))

    def to_dict(self) -> dict:
        return asdict(self)


def epsilon_quadratic(obs: Observations) -> EpsilonQuadratic:
    """Coefficients of the worst-case condition as a quadratic in epsilon.

    Every small entry is pushed up by epsilon, P(q1|Q,P) is pushed down:

        s + 2 eps + (p - eps)(pi + 3 eps) < p - eps

    with ``p = P(q1|Q,P)``, ``s = P(q2|Q,T,P) + P(a1|A,T,P)`` and ``pi`` the
    premise sum.  Rearranged: ``3 eps^2 - (3 + 3p - pi) eps + (p - s - p pi) > 0``.
    """
    p, s, pi = _values(obs)
    return EpsilonQuadratic(3.0, -(3.0 + 3.0 * p - pi), p - s - p * pi)


def epsilon_residual(obs: Observations, epsilon: float) -> float:
    """Left side minus right side of the worst-case condition at ``epsilon``."""
    p, s, pi = _values(obs)
    lhs = s + 2.0 * epsilon + (p - epsilon) * (pi + 3.0 * epsilon)
    return lhs - (p - epsilon)


def worst_case_epsilon(obs: Observations) -> float:
    """Largest uniform adversarial deviation that still excludes mixing models (0 if none)."""
    return epsilon_quadratic(obs).smallest_positive_root()


@dataclass(frozen=True)
class MixtureVerdict:
    feasible: bool
    weights: np.ndarray | None
    max_deviation: float

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "weights": None if self.weights is None else self.weights.tolist(),
            "max_deviation": self.max_deviation,
        }


def mixture_feasible(
    table: PtmTable,
    prep: str,
    eigenpreps: Sequence[str],
    measurements: Sequence[str] | None = None,
    tol: float = MIXTURE_TOL,
) -> MixtureVerdict:
    """Can ``prep``'s statistics be written as a convex mixture of the eigenpreparations'?

    Solved as the program ``min t`` subject to ``|sum_i w_i P(m|M,e_i) - P(m|M,prep)| <= t``
    over every listed measurement outcome, ``w >= 0``, ``sum(w) == 1``; feasible
    when the optimum is within ``tol``.
    """
    if not eigenpreps:
        raise ValueError("need at least one eigenpreparation")
    measurements = list(table.outcomes) if measurements is None else list(measurements)
    rows, target = [], []
    for meas in measurements:
        try:
            base = table.distribution(meas, prep)
            cols = [table.distribution(meas, e) for e in eigenpreps]
        except KeyError as exc:
            raise KeyError(f"label mismatch: {exc.args[0]}") from None
        rows.append(np.column_stack(cols))
        target.append(base)
    M = np.vstack(rows)
    b = np.concatenate(target)
    k = len(eigenpreps)
    n_rows = M.shape[0]

    # Variables: [w (k) | t]
    c = np.zeros(k + 1)
    c[-1] = -1.0
    A_ub = np.block([[M, -np.ones((n_rows, 1))], [-M, -np.ones((n_rows, 1))]])
    b_ub = np.concatenate([b, -b])
    A_eq = np.concatenate([np.ones(k), [0.0]])[None, :]
    res = linprog_max(c, A_ub, b_ub, A_eq, np.ones(1))
    if not res.success:
        raise RuntimeError(f"mixture program unexpectedly {res.status}")
    w = res.x[:k] / res.x[:k].sum()
    dev = float(np.max(np.abs(M @ w - b)))
    return MixtureVerdict(dev <= tol, w if dev <= tol else None, dev)


def lemma1_check(
    model: OnticModel,
    prep: str,
    q: str,
    g,
    alpha: float,
    beta: float,
    tol: float = 1e-10,
) -> bool:
    """Check ``sum_cell g f_P <= alpha * max_i sum_cell g f_i + beta`` for every density of ``prep``.

    The supremum of a linear functional over the hull of the eigen densities is
    attained at a generator.  Raises ``ValueError`` if ``prep`` is not
    (alpha, beta)-supported on the cell of ``q``.
    """
    _check_ab(alpha, beta)
    g = np.asarray(g, dtype=float)
    if g.shape != (model.size,) or np.any(g < 0.0) or np.any(g > 1.0):
        raise ValueError("g must be a vector in [0, 1]^size")
    needed = beta_min(model, prep, q, alpha)
    if beta < needed - 1e-12:
        raise ValueError(f"hypothesis fails: beta={beta} < beta_min={needed}")
    cell = model.space.cell_mask(q)
    gens = model.eigen_densities.get(q, ())
    best = max((float((g * f)[cell].sum()) for f in gens), default=0.0)
    rhs = alpha * best + beta
    return all(float((g * f_p)[cell].sum()) <= rhs + tol for f_p in model.densities(prep))
