"""Finite-dimensional quantum fragments and their Born-rule statistics.

A fragment fixes an orthonormal eigenbasis for the macro-observable ``Q``,
a second orthonormal basis for ``A``, one unitary transformation ``T`` and
one pure preparation ``P``.  The eigenpreparation ``P_qi`` of each outcome
is the basis vector ``|q_i>`` itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidModelError, Violation
from .ptm import PtmTable, compose_label

__all__ = [
    "QuantumFragment",
    "Violation",
    "born_probability",
    "apply_unitary",
    "paper_fragment_theorem1",
    "paper_fragment_theorem2",
    "fragment_to_ptm",
    "validate_fragment",
    "random_unitary",
    "NORM_TOL",
]

NORM_TOL = 1e-12


def _vec(x) -> np.ndarray:
    arr = np.asarray(x, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"expected a nonempty 1-d vector, got shape {arr.shape}")
    return arr


def born_probability(state, basis_vector) -> float:
    """|<basis_vector|state>|^2, clamped to [0, 1]."""
    state = _vec(state)
    basis_vector = _vec(basis_vector)
    if state.shape != basis_vector.shape:
        raise ValueError(f"dimension mismatch: {state.size} vs {basis_vector.size}")
    amp = np.vdot(basis_vector, state)
    return float(min(max(abs(amp) ** 2, 0.0), 1.0))


def apply_unitary(u, state) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    state = _vec(state)
    if u.ndim != 2 or u.shape != (state.size, state.size):
        raise ValueError(f"dimension mismatch: matrix {u.shape} vs vector {state.size}")
    return u @ state


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


@dataclass(frozen=True)
class QuantumFragment:
    """Two bases, one unitary and one preparation on C^dim.

    ``q_basis[i]`` and ``a_basis[i]`` are the eigenvectors for outcomes
    ``q{i+1}`` and ``a{i+1}``.  ``eigenprep_index`` is 1-based.
    """

    q_basis: np.ndarray
    a_basis: np.ndarray
    unitary: np.ndarray
    psi: np.ndarray
    eigenprep_index: int = 1

    def __post_init__(self):
        for name in ("q_basis", "a_basis", "unitary", "psi"):
            arr = np.array(getattr(self, name), dtype=complex)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        d = self.psi.size
        if self.psi.ndim != 1:
            raise ValueError("psi must be a vector")
        for name in ("q_basis", "a_basis", "unitary"):
            if getattr(self, name).shape != (d, d):
                raise ValueError(f"{name} must have shape ({d}, {d})")
        if not 1 <= self.eigenprep_index <= d:
            raise ValueError(f"eigenprep_index must lie in 1..{d}")

    @property
    def dim(self) -> int:
        return self.psi.size

    @property
    def q_labels(self) -> tuple[str, ...]:
        return tuple(f"q{i + 1}" for i in range(self.dim))

    @property
    def a_labels(self) -> tuple[str, ...]:
        return tuple(f"a{i + 1}" for i in range(self.dim))

    def eigenprep(self, index: int | None = None) -> np.ndarray:
        i = self.eigenprep_index if index is None else index
        return self.q_basis[i - 1]

    def to_dict(self) -> dict:
        def c(z):
            return [float(z.real), float(z.imag)]

        return {
            "dim": self.dim,
            "q_basis": [[c(z) for z in v] for v in self.q_basis],
            "a_basis": [[c(z) for z in v] for v in self.a_basis],
            "unitary": [[c(z) for z in row] for row in self.unitary],
            "psi": [c(z) for z in self.psi],
            "eigenprep_index": self.eigenprep_index,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuantumFragment":
        def arr(x):
            a = np.asarray(x, dtype=float)
            if a.shape[-1] != 2:
                raise ValueError("complex numbers must be [re, im] pairs")
            return a[..., 0] + 1j * a[..., 1]

        frag = cls(
            q_basis=arr(data["q_basis"]),
            a_basis=arr(data["a_basis"]),
            unitary=arr(data["unitary"]),
            psi=arr(data["psi"]),
            eigenprep_index=int(data.get("eigenprep_index", 1)),
        )
        if "dim" in data and int(data["dim"]) != frag.dim:
            raise ValueError(f"declared dim {data['dim']} does not match vector length {frag.dim}")
        return frag


def paper_fragment_theorem1() -> QuantumFragment:
    """Qutrit fragment with gap exactly 1/10 and all three premises zero."""
    r2, r3, r6 = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(6.0)
    q = np.eye(3)
    a = np.array([[2.0, 1.0, -1.0] / r6, [0.0, 1.0, 1.0] / r2, [-1.0, 1.0, -1.0] / r3])
    u = np.array([[r2 / 2, r2 / 2, 0.0], [r2 / 2, -r2 / 2, 0.0], [0.0, 0.0, 1.0]])
    psi = np.array([1.0, 1.0, 2.0 * r2]) / np.sqrt(10.0)
    return QuantumFragment(q, a, u, psi, eigenprep_index=1)


def paper_fragment_theorem2() -> QuantumFragment:
    """Qutrit fragment with gap (10*sqrt(3) - 7)/48 and all three premises zero."""
    r2, r3, r6 = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(6.0)
    q = np.eye(3)
    a = np.array([[2.0, 1.0, -1.0] / r6, [0.0, 1.0, 1.0] / r2, [-1.0, 1.0, -1.0] / r3])
    u = np.array([[r2 / 2, -r2 / 2, 0.0], [r2 / 2, r2 / 2, 0.0], [0.0, 0.0, 1.0]])
    psi = np.array([1.0 + r3, 1.0 - r3, 2.0 * r2]) / 4.0
    return QuantumFragment(q, a, u, psi, eigenprep_index=1)


def _orthonormality_defect(rows: np.ndarray) -> float:
    gram = rows.conj() @ rows.T
    return float(np.max(np.abs(gram - np.eye(rows.shape[0]))))


def validate_fragment(frag: QuantumFragment, tol: float = 1e-10) -> list[Violation]:
    """Invariants of ``frag`` violated by more than ``tol``; empty means valid."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    report = []
    checks = {
        "q_basis orthonormal": _orthonormality_defect(frag.q_basis),
        "a_basis orthonormal": _orthonormality_defect(frag.a_basis),
        "unitary": float(np.max(np.abs(frag.unitary.conj().T @ frag.unitary - np.eye(frag.dim)))),
        "psi normalized": float(abs(np.vdot(frag.psi, frag.psi).real - 1.0)),
    }
    for name, defect in checks.items():
        if not defect <= tol:
            report.append(Violation(name, defect))
    return report


def fragment_to_ptm(frag: QuantumFragment, tol: float = 1e-10) -> PtmTable:
    """Born-rule table for Q and A on P, T(P) and every eigenpreparation P_qi, T(P_qi).

    Preparation labels are ``"P"``, ``"T(P)"``, ``"P_q1"``, ``"T(P_q1)"``, ...
    """
    violations = validate_fragment(frag, tol)
    if violations:
        raise InvalidModelError(violations, what="fragment")

    states = {"P": frag.psi}
    for i, label in enumerate(frag.q_labels):
        states[f"P_{label}"] = frag.q_basis[i]
    for base in list(states):
        states[compose_label(["T"], base)] = apply_unitary(frag.unitary, states[base])

    probs = {}
    for prep, state in states.items():
        for meas, basis in (("Q", frag.q_basis), ("A", frag.a_basis)):
            dist = np.array([born_probability(state, b) for b in basis])
            # Clamping can push the sum off 1 by ~1e-16; renormalize only that noise.
            probs[(meas, prep)] = dist / dist.sum()
    return PtmTable({"Q": frag.q_labels, "A": frag.a_labels}, probs)
