"""Finite ontic models over a discrete state space with counting measure.

Densities are probability mass vectors over ``range(size)``.  Transformations
are row-stochastic matrices ``K[l, l2] = gamma(l2 | l)``.  Measurements are
row-stochastic response matrices ``R[l, m] = xi(m | l)``.  The macro-observable
``Q`` is always the deterministic indicator of the state's ``q_value`` label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .errors import InvalidModelError, Violation
from .ptm import PtmTable, compose_label, parse_prep_label

__all__ = [
    "MASS_TOL",
    "OnticSpace",
    "ResponseFunction",
    "OnticModel",
    "AmbiguousModelError",
    "ReproductionReport",
    "push_forward",
    "model_probability",
    "model_distribution",
    "model_to_ptm",
    "reproduces_ptm",
    "partition_indicator",
    "mixing_model",
    "perturb_eigen_density",
    "perturb_prep_density",
    "random_density",
    "random_kernel",
    "random_model",
    "validate_model",
    "total_variation",
]

MASS_TOL = 1e-10


class AmbiguousModelError(ValueError):
    """Densities modelling the same preparation disagree on a prediction."""


@dataclass(frozen=True)
class OnticSpace:
    """Ontic states ``0..size-1`` with the Q-outcome carried by each state."""

    q_value: tuple[str, ...]
    outcomes: tuple[str, ...] = ()

    def __post_init__(self):
        qv = tuple(str(q) for q in self.q_value)
        if not qv:
            raise ValueError("ontic space must have at least one state")
        outs = tuple(self.outcomes) if self.outcomes else tuple(dict.fromkeys(sorted(set(qv))))
        unknown = set(qv) - set(outs)
        if unknown:
            raise ValueError(f"states carry undeclared Q outcomes {sorted(unknown)}")
        object.__setattr__(self, "q_value", qv)
        object.__setattr__(self, "outcomes", outs)

    @property
    def size(self) -> int:
        return len(self.q_value)

    def cell_mask(self, q: str) -> np.ndarray:
        if q not in self.outcomes:
            raise KeyError(f"unknown Q outcome {q!r}")
        return np.array([v == q for v in self.q_value])

    def q_response(self) -> "ResponseFunction":
        rows = np.zeros((self.size, len(self.outcomes)))
        for lam, q in enumerate(self.q_value):
            rows[lam, self.outcomes.index(q)] = 1.0
        return ResponseFunction(self.outcomes, rows)


@dataclass(frozen=True)
class ResponseFunction:
    outcomes: tuple[str, ...]
    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != len(self.outcomes):
            raise ValueError(f"response rows must have shape (size, {len(self.outcomes)})")
        rows.setflags(write=False)
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "rows", rows)

    @property
    def is_deterministic(self) -> bool:
        return bool(np.all((self.rows == 0.0) | (self.rows == 1.0)))


def _frozen(x) -> np.ndarray:
    arr = np.array(x, dtype=float)
    arr.setflags(write=False)
    return arr


def _stochastic_defect(rows: np.ndarray) -> float:
    """Largest violation of nonnegativity / unit row sums."""
    neg = float(max(0.0, -rows.min())) if rows.size else 0.0
    sums = float(np.max(np.abs(rows.sum(axis=-1) - 1.0))) if rows.size else 0.0
    return max(neg, sums)


@dataclass(frozen=True)
class OnticModel:
    """Ontic space plus finite generator lists for each preparation.

    ``eigen_densities[q]`` generates the eigenpreparation set for outcome ``q``
    and is addressed as preparation ``"P_q"``.  A ``"Q"`` response is added
    automatically from the space when absent.
    """

    space: OnticSpace
    eigen_densities: Mapping[str, Sequence[np.ndarray]]
    prep_densities: Mapping[str, Sequence[np.ndarray]] = field(default_factory=dict)
    kernels: Mapping[str, np.ndarray] = field(default_factory=dict)
    responses: Mapping[str, ResponseFunction] = field(default_factory=dict)

    def __post_init__(self):
        eig = {q: tuple(_frozen(f) for f in fs) for q, fs in self.eigen_densities.items()}
        preps = {p: tuple(_frozen(f) for f in fs) for p, fs in self.prep_densities.items()}
        kernels = {t: _frozen(k) for t, k in self.kernels.items()}
        responses = dict(self.responses)
        responses.setdefault("Q", self.space.q_response())
        object.__setattr__(self, "eigen_densities", eig)
        object.__setattr__(self, "prep_densities", preps)
        object.__setattr__(self, "kernels", kernels)
        object.__setattr__(self, "responses", responses)
        violations = validate_model(self)
        if violations:
            raise InvalidModelError(violations)

    @property
    def size(self) -> int:
        return self.space.size

    @property
    def preparation_labels(self) -> list[str]:
        return list(self.prep_densities) + [f"P_{q}" for q in self.eigen_densities]

    def densities(self, prep: str) -> tuple[np.ndarray, ...]:
        """Generator densities for a base preparation label (``"P"`` or ``"P_q1"``)."""
        if prep in self.prep_densities:
            return self.prep_densities[prep]
        if prep.startswith("P_") and prep[2:] in self.eigen_densities:
            return self.eigen_densities[prep[2:]]
        raise KeyError(f"unknown preparation {prep!r}")

    def eigen_generators(self, q: str) -> tuple[np.ndarray, ...]:
        if q not in self.eigen_densities:
            raise KeyError(f"no eigenpreparation densities for outcome {q!r}")
        return self.eigen_densities[q]

    def to_dict(self) -> dict:
        return {
            "space": {"size": self.size, "q_value": list(self.space.q_value), "outcomes": list(self.space.outcomes)},
            "eigen_densities": {q: [f.tolist() for f in fs] for q, fs in self.eigen_densities.items()},
            "prep_densities": {p: [f.tolist() for f in fs] for p, fs in self.prep_densities.items()},
            "kernels": {t: k.tolist() for t, k in self.kernels.items()},
            "responses": {
                m: {"outcomes": list(r.outcomes), "rows": r.rows.tolist()} for m, r in self.responses.items()
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "OnticModel":
        sp = data["space"]
        space = OnticSpace(tuple(sp["q_value"]), tuple(sp.get("outcomes", ())))
        if "size" in sp and int(sp["size"]) != space.size:
            raise InvalidModelError([Violation("space size matches q_value length", abs(int(sp["size"]) - space.size))])
        responses = {
            m: ResponseFunction(tuple(r["outcomes"]), r["rows"]) for m, r in data.get("responses", {}).items()
        }
        return cls(
            space=space,
            eigen_densities=data["eigen_densities"],
            prep_densities=data.get("prep_densities", {}),
            kernels=data.get("kernels", {}),
            responses=responses,
        )


def validate_model(model: OnticModel, tol: float = MASS_TOL) -> list[Violation]:
    """Every violated type invariant of ``model``, with its magnitude."""
    out: list[Violation] = []
    n = model.space.size

    def density_checks(name: str, f: np.ndarray, cell: np.ndarray | None = None):
        if f.shape != (n,):
            out.append(Violation(f"{name} has length {n}", abs(f.size - n)))
            return
        d = _stochastic_defect(f)
        if d > tol:
            out.append(Violation(f"{name} is a probability density", d))
        if cell is not None:
            outside = float(f[~cell].sum())
            if outside > tol:
                out.append(Violation(f"{name} has unit mass on its partition cell", outside))

    for q, fs in model.eigen_densities.items():
        if q not in model.space.outcomes:
            out.append(Violation(f"eigen densities keyed by known outcome ({q})", 1.0))
            continue
        if not fs:
            out.append(Violation(f"eigen_densities[{q}] nonempty", 1.0))
        cell = model.space.cell_mask(q)
        for i, f in enumerate(fs):
            density_checks(f"eigen_densities[{q}][{i}]", f, cell)
    for p, fs in model.prep_densities.items():
        if not fs:
            out.append(Violation(f"prep_densities[{p}] nonempty", 1.0))
        for i, f in enumerate(fs):
            density_checks(f"prep_densities[{p}][{i}]", f)
    for t, k in model.kernels.items():
        if k.shape != (n, n):
            out.append(Violation(f"kernel {t} has shape ({n}, {n})", 1.0))
            continue
        d = _stochastic_defect(k)
        if d > tol:
            out.append(Violation(f"kernel {t} is row-stochastic", d))
    for m, r in model.responses.items():
        if r.rows.shape[0] != n:
            out.append(Violation(f"response {m} has {n} rows", abs(r.rows.shape[0] - n)))
            continue
        d = _stochastic_defect(r.rows)
        if d > tol:
            out.append(Violation(f"response {m} is row-stochastic", d))
    q_resp = model.responses.get("Q")
    if q_resp is not None and q_resp.rows.shape[0] == n:
        expected = model.space.q_response()
        if q_resp.outcomes != expected.outcomes:
            out.append(Violation("Q response outcomes match the ontic space", 1.0))
        else:
            d = float(np.max(np.abs(q_resp.rows - expected.rows)))
            if d > 0.0:
                out.append(Violation("Q response is the indicator of q_value", d))
    return out


def push_forward(kernel, f) -> np.ndarray:
    """Density of the state after one transformation: ``f @ kernel``."""
    kernel = np.asarray(kernel, dtype=float)
    f = np.asarray(f, dtype=float)
    if kernel.ndim != 2 or kernel.shape != (f.size, f.size):
        raise ValueError(f"dimension mismatch: kernel {kernel.shape} vs density of length {f.size}")
    return f @ kernel


def _evolve(model: OnticModel, f: np.ndarray, kernel_seq: Sequence[str]) -> np.ndarray:
    for t in kernel_seq:
        if t not in model.kernels:
            raise KeyError(f"unknown transformation {t!r}")
        f = push_forward(model.kernels[t], f)
    return f


def model_distribution(model: OnticModel, prep: str, kernel_seq: Sequence[str], meas: str) -> np.ndarray:
    """Outcome distribution of ``meas`` after ``kernel_seq`` acts on ``prep``.

    Raises :class:`AmbiguousModelError` when the densities for ``prep``
    disagree by more than ``MASS_TOL``.
    """
    if meas not in model.responses:
        raise KeyError(f"unknown measurement {meas!r}")
    resp = model.responses[meas].rows
    dists = np.array([_evolve(model, f, kernel_seq) @ resp for f in model.densities(prep)])
    spread = dists.max(axis=0) - dists.min(axis=0)
    if np.any(spread > MASS_TOL):
        worst = int(np.argmax(spread))
        raise AmbiguousModelError(
            f"densities for {compose_label(list(kernel_seq), prep)} disagree on "
            f"P({model.responses[meas].outcomes[worst]}|{meas}) by {spread[worst]:.3g}"
        )
    return dists[0]


def model_probability(model: OnticModel, prep: str, kernel_seq: Sequence[str], meas: str, outcome: str) -> float:
    outcomes = model.responses[meas].outcomes if meas in model.responses else ()
    if outcome not in outcomes:
        raise KeyError(f"measurement {meas!r} has no outcome {outcome!r}")
    return float(model_distribution(model, prep, kernel_seq, meas)[outcomes.index(outcome)])


def model_to_ptm(model: OnticModel, preparations: Sequence[str] | None = None) -> PtmTable:
    """Table of every measurement on the given (possibly composed) preparation labels.

    By default: every base preparation, alone and after each single transformation.
    """
    if preparations is None:
        bases = model.preparation_labels
        preparations = bases + [compose_label([t], p) for p in bases for t in model.kernels]
    probs = {}
    for label in preparations:
        base, seq = parse_prep_label(label)
        for meas in model.responses:
            probs[(meas, label)] = model_distribution(model, base, seq, meas)
    return PtmTable({m: r.outcomes for m, r in model.responses.items()}, probs)


class ReproductionReport(NamedTuple):
    reproduces: bool
    max_deviation: float
    worst_entry: tuple[str, str, str] | None  # (measurement, preparation, outcome)

    def __bool__(self) -> bool:
        return self.reproduces


def reproduces_ptm(model: OnticModel, table: PtmTable, tol: float = 1e-10) -> ReproductionReport:
    """Compare every table entry with the model's prediction."""
    worst = 0.0
    worst_entry = None
    for (meas, label), dist in table.probabilities.items():
        if meas not in model.responses:
            raise KeyError(f"model has no measurement {meas!r}")
        if model.responses[meas].outcomes != table.outcomes[meas]:
            raise KeyError(f"outcome labels for {meas!r} differ between model and table")
        base, seq = parse_prep_label(label)
        predicted = model_distribution(model, base, seq, meas)
        dev = np.abs(predicted - dist)
        i = int(np.argmax(dev))
        if worst_entry is None or dev[i] > worst:
            worst = float(dev[i])
            worst_entry = (meas, label, table.outcomes[meas][i])
    return ReproductionReport(worst <= tol, worst, worst_entry)


def partition_indicator(space: OnticSpace, q: str) -> set[int]:
    """Indices of the states on which Q takes the value ``q``."""
    return {int(i) for i in np.flatnonzero(space.cell_mask(q))}


def mixing_model(space: OnticSpace, eigen_densities: Mapping[str, np.ndarray], weights: Mapping[str, float]) -> OnticModel:
    """Model whose preparation ``"P"`` is the weighted mixture of one eigen density per outcome."""
    w = {q: float(weights.get(q, 0.0)) for q in space.outcomes}
    extra = set(weights) - set(space.outcomes)
    if extra:
        raise ValueError(f"weights for unknown outcomes {sorted(extra)}")
    if any(v < 0 for v in w.values()) or abs(sum(w.values()) - 1.0) > MASS_TOL:
        raise ValueError(f"weights must form a probability distribution, got {w}")
    missing = [q for q in space.outcomes if q not in eigen_densities]
    if missing:
        raise ValueError(f"missing eigen densities for {missing}")
    f_p = sum(w[q] * np.asarray(eigen_densities[q], dtype=float) for q in space.outcomes)
    return OnticModel(
        space=space,
        eigen_densities={q: [eigen_densities[q]] for q in space.outcomes},
        prep_densities={"P": [f_p]},
    )


def perturb_eigen_density(f_q, f_p, q_support, epsilon: float) -> np.ndarray:
    """``(1 - eps) f_q + (eps / p) f_p`` restricted to ``q_support``, where ``p`` is f_p's mass there.

    Makes the eigen density strictly positive wherever ``f_p`` is, inside the cell.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError("epsilon must lie in [0, 1]")
    f_q = np.asarray(f_q, dtype=float)
    f_p = np.asarray(f_p, dtype=float)
    if f_q.shape != f_p.shape:
        raise ValueError("densities must have equal length")
    mask = np.zeros(f_p.size, dtype=bool)
    mask[list(q_support)] = True
    restricted = np.where(mask, f_p, 0.0)
    p = restricted.sum()
    if p <= 0.0:
        raise ValueError("f_p has no mass on q_support; perturbation undefined")
    return (1.0 - epsilon) * f_q + (epsilon / p) * restricted


def perturb_prep_density(f_s, f_u, epsilon: float) -> np.ndarray:
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError("epsilon must lie in [0, 1]")
    f_s = np.asarray(f_s, dtype=float)
    f_u = np.asarray(f_u, dtype=float)
    if f_s.shape != f_u.shape:
        raise ValueError("densities must have equal length")
    return (1.0 - epsilon) * f_s + epsilon * f_u


def total_variation(f, g) -> float:
    return 0.5 * float(np.abs(np.asarray(f, dtype=float) - np.asarray(g, dtype=float)).sum())


def random_density(rng: np.random.Generator, size: int, mask=None, keep: float = 0.6) -> np.ndarray:
    """Dirichlet(1) density on a random nonempty subset of ``mask`` (default: all states)."""
    allowed = np.ones(size, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    idx = np.flatnonzero(allowed)
    if idx.size == 0:
        raise ValueError("no states available for the density")
    chosen = idx[rng.random(idx.size) < keep]
    if chosen.size == 0:
        chosen = idx[[rng.integers(idx.size)]]
    f = np.zeros(size)
    f[chosen] = rng.dirichlet(np.ones(chosen.size))
    return f


def random_kernel(rng: np.random.Generator, size: int, keep: float = 0.5) -> np.ndarray:
    return np.array([random_density(rng, size, keep=keep) for _ in range(size)])


def random_model(
    seed: int,
    space_size: int,
    outcomes: Sequence[str] = ("q1", "q2", "q3"),
    eigen_count_per_outcome: int = 1,
    prep_count: int = 1,
    *,
    a_outcomes: Sequence[str] = ("a1", "a2", "a3"),
    transformations: Sequence[str] = ("T",),
    sparsity: float | None = None,
) -> OnticModel:
    """Random finite ontic model, deterministic in ``seed``.

    Every outcome owns at least one state, so ``space_size`` must be at least
    ``len(outcomes)``.  Preparations are labelled ``"P"``, ``"P2"``, ...; the
    model has a random response for ``"A"`` (deterministic with probability
    1/2) and one random kernel per transformation label.  ``sparsity`` is the
    probability that a state is dropped from a density's support; drawn at
    random per model when omitted.
    """
    if space_size < 1 or eigen_count_per_outcome < 1 or prep_count < 1:
        raise ValueError("sizes must be at least 1")
    outcomes = tuple(outcomes)
    if space_size < len(outcomes):
        raise ValueError(f"need at least one ontic state per outcome ({len(outcomes)}), got {space_size}")
    rng = np.random.default_rng(seed)
    keep = 1.0 - (rng.uniform(0.0, 0.8) if sparsity is None else sparsity)

    labels = list(outcomes) + [outcomes[i] for i in rng.integers(len(outcomes), size=space_size - len(outcomes))]
    labels = [labels[i] for i in rng.permutation(space_size)]
    space = OnticSpace(tuple(labels), outcomes)

    eigen = {
        q: [random_density(rng, space_size, space.cell_mask(q), keep) for _ in range(eigen_count_per_outcome)]
        for q in outcomes
    }
    prep_labels = ["P"] + [f"P{i}" for i in range(2, prep_count + 1)]
    preps = {p: [random_density(rng, space_size, keep=keep)] for p in prep_labels}
    kernels = {t: random_kernel(rng, space_size, keep) for t in transformations}

    a_outcomes = tuple(a_outcomes)
    if rng.random() < 0.5:
        rows = np.eye(len(a_outcomes))[rng.integers(len(a_outcomes), size=space_size)]
    else:
        rows = np.array([random_density(rng, len(a_outcomes), keep=keep) for _ in range(space_size)])
    return OnticModel(space, eigen, preps, kernels, {"A": ResponseFunction(a_outcomes, rows)})
