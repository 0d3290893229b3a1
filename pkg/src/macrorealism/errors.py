"""Validation reports shared by the fragment and ontic-model loaders."""

from __future__ import annotations

from typing import NamedTuple

__all__ = ["Violation", "InvalidModelError"]


class Violation(NamedTuple):
    invariant: str
    magnitude: float

    def to_dict(self) -> dict:
        return {"invariant": self.invariant, "magnitude": self.magnitude}


class InvalidModelError(ValueError):
    """An input object violates its type invariants; ``violations`` lists them."""

    def __init__(self, violations: list[Violation], what: str = "model"):
        self.violations = list(violations)
        detail = "; ".join(f"{v.invariant} (off by {v.magnitude:.3g})" for v in self.violations)
        super().__init__(f"invalid {what}: {detail}")
