"""JSON/CSV readers and writers for fragments, ontic models and frequency data."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .bounds import ExperimentFrequencies
from .errors import InvalidModelError, Violation
from .fragment import QuantumFragment, validate_fragment
from .ontic import OnticModel

__all__ = [
    "InputError",
    "read_json",
    "dumps",
    "load_fragment",
    "load_model",
    "load_frequencies",
    "save_json",
]


class InputError(ValueError):
    """A user-supplied file is unreadable or violates its format; ``violations`` may be attached."""

    def __init__(self, message: str, violations: list[Violation] | None = None):
        super().__init__(message)
        self.violations = violations or []

    def to_dict(self) -> dict:
        return {"error": str(self), "violations": [v.to_dict() for v in self.violations]}


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def save_json(obj: Any, path: str | Path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def load_fragment(path: str | Path, tol: float = 1e-10) -> QuantumFragment:
    data = read_json(path)
    try:
        frag = QuantumFragment.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path} is not a fragment: {exc}") from exc
    violations = validate_fragment(frag, tol)
    if violations:
        raise InputError(f"{path} violates fragment invariants", violations)
    return frag


def load_model(path: str | Path) -> OnticModel:
    data = read_json(path)
    try:
        return OnticModel.from_dict(data)
    except InvalidModelError as exc:
        raise InputError(f"{path} violates model invariants", exc.violations) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path} is not an ontic model: {exc}") from exc


def load_frequencies(path: str | Path) -> ExperimentFrequencies:
    data = read_json(path)
    try:
        return ExperimentFrequencies.from_dict(data)
    except (TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"{path} is not a frequencies file: {exc}") from exc
