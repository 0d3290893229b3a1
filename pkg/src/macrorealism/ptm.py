"""Operational probability tables P(m | M, P) for preparation-transformation-measurement models."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

__all__ = ["PtmTable", "compose_label", "parse_prep_label", "ROW_SUM_TOL"]

ROW_SUM_TOL = 1e-10

_COMPOSED = re.compile(r"^(?P<t>[^()]+)\((?P<inner>.+)\)$")


def compose_label(transforms: list[str] | tuple[str, ...], prep: str) -> str:
    """Label of the preparation obtained by applying ``transforms`` in order to ``prep``.

    >>> compose_label(["T"], "P_q1")
    'T(P_q1)'
    >>> compose_label(["T", "S"], "P")
    'S(T(P))'
    """
    label = prep
    for t in transforms:
        label = f"{t}({label})"
    return label


def parse_prep_label(label: str) -> tuple[str, list[str]]:
    """Inverse of :func:`compose_label`: returns ``(base, transforms)``."""
    transforms: list[str] = []
    while True:
        match = _COMPOSED.match(label)
        if match is None:
            break
        transforms.append(match.group("t"))
        label = match.group("inner")
    return label, transforms[::-1]


@dataclass(frozen=True)
class PtmTable:
    """Outcome distributions keyed by ``(measurement, preparation)``.

    ``outcomes`` maps each measurement label to its ordered outcome labels.
    Preparation labels may be composed, e.g. ``"T(P_q1)"``.
    """

    outcomes: Mapping[str, tuple[str, ...]]
    probabilities: Mapping[tuple[str, str], np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        outs = {m: tuple(o) for m, o in self.outcomes.items()}
        probs = {}
        for (meas, prep), dist in self.probabilities.items():
            if meas not in outs:
                raise ValueError(f"unknown measurement {meas!r}")
            arr = np.asarray(dist, dtype=float).copy()
            if arr.shape != (len(outs[meas]),):
                raise ValueError(f"distribution for ({meas}, {prep}) has wrong length {arr.shape}")
            if np.any(arr < -ROW_SUM_TOL) or np.any(arr > 1 + ROW_SUM_TOL):
                raise ValueError(f"distribution for ({meas}, {prep}) has entries outside [0, 1]")
            if abs(arr.sum() - 1.0) > ROW_SUM_TOL:
                raise ValueError(f"distribution for ({meas}, {prep}) sums to {arr.sum()!r}")
            arr.setflags(write=False)
            probs[(meas, prep)] = arr
        object.__setattr__(self, "outcomes", outs)
        object.__setattr__(self, "probabilities", probs)

    @property
    def preparations(self) -> list[str]:
        seen: dict[str, None] = {}
        for _, prep in self.probabilities:
            seen.setdefault(prep)
        return list(seen)

    def distribution(self, meas: str, prep: str) -> np.ndarray:
        try:
            return self.probabilities[(meas, prep)]
        except KeyError:
            raise KeyError(f"table has no entry for measurement {meas!r} on preparation {prep!r}") from None

    def prob(self, outcome: str, meas: str, prep: str) -> float:
        """P(outcome | meas, prep)."""
        outs = self.outcomes.get(meas)
        if outs is None:
            raise KeyError(f"unknown measurement {meas!r}")
        if outcome not in outs:
            raise KeyError(f"measurement {meas!r} has no outcome {outcome!r}")
        return float(self.distribution(meas, prep)[outs.index(outcome)])

    def with_entry(self, meas: str, prep: str, dist) -> "PtmTable":
        probs = dict(self.probabilities)
        probs[(meas, prep)] = np.asarray(dist, dtype=float)
        return PtmTable(self.outcomes, probs)

    def to_dict(self) -> dict:
        return {
            "outcomes": {m: list(o) for m, o in self.outcomes.items()},
            "probabilities": [
                {"measurement": m, "preparation": p, "distribution": d.tolist()}
                for (m, p), d in self.probabilities.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "PtmTable":
        probs = {(e["measurement"], e["preparation"]): e["distribution"] for e in data["probabilities"]}
        return cls(data["outcomes"], probs)
