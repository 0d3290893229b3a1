"""Small hand-built ontic models illustrating the kinds of macrorealist model.

All fixtures use nine ontic states split into three Q cells
``{0,1,2} -> q1``, ``{3,4,5} -> q2``, ``{6,7,8} -> q3``.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .ontic import OnticModel, OnticSpace, mixing_model, perturb_eigen_density

__all__ = [
    "SPACE",
    "point_mass",
    "mixing_fixture",
    "psi_ontic_fixture",
    "undermining_fixture",
    "perturbed_undermining_fixture",
]

SPACE = OnticSpace(("q1",) * 3 + ("q2",) * 3 + ("q3",) * 3, ("q1", "q2", "q3"))


def point_mass(i: int, size: int = 9) -> np.ndarray:
    f = np.zeros(size)
    f[i] = 1.0
    return f


def _uniform(idx, size: int = 9) -> np.ndarray:
    f = np.zeros(size)
    f[list(idx)] = 1.0 / len(idx)
    return f


def mixing_fixture(weights: Mapping[str, float] | None = None) -> OnticModel:
    """Eigen densities uniform on their cells; ``P`` mixes them with ``weights``."""
    weights = {"q1": 0.2, "q2": 0.3, "q3": 0.5} if weights is None else dict(weights)
    eig = {q: _uniform(np.flatnonzero(SPACE.cell_mask(q))) for q in SPACE.outcomes}
    return mixing_model(SPACE, eig, weights)


def psi_ontic_fixture() -> OnticModel:
    """Eigen densities are point masses that ``P`` never visits."""
    eig = {q: [point_mass(3 * i)] for i, q in enumerate(SPACE.outcomes)}
    f_p = _uniform([1, 2, 4, 5, 7, 8])
    return OnticModel(SPACE, eig, {"P": [f_p]})


_UNDERMINING_P = np.array([0.1, 0.5, 0.0, 0.1, 0.1, 0.0, 0.1, 0.1, 0.0])


def undermining_fixture() -> OnticModel:
    """``P`` puts mass 0.5 on state 1, where no eigen density lives."""
    eig = {q: [point_mass(3 * i)] for i, q in enumerate(SPACE.outcomes)}
    return OnticModel(SPACE, eig, {"P": [_UNDERMINING_P.copy()]})


def perturbed_undermining_fixture(epsilon: float) -> OnticModel:
    """:func:`undermining_fixture` with every eigen density blended toward ``P`` on its cell."""
    base = undermining_fixture()
    f_p = base.prep_densities["P"][0]
    eig = {}
    for q in SPACE.outcomes:
        cell = np.flatnonzero(SPACE.cell_mask(q))
        eig[q] = [perturb_eigen_density(base.eigen_densities[q][0], f_p, cell, epsilon)]
    return OnticModel(SPACE, eig, {"P": [f_p]})
