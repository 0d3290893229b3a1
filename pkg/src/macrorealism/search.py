"""Search for real qutrit fragments with a large macrorealism gap.

Fragments are decoded from angles so that the three premise probabilities
vanish identically:

* ``q`` is the standard basis, so ``P_q1 = e1``;
* the first column of ``U`` is ``(cos t, sin t, 0)``, so ``T(P_q1)`` never yields ``q3``;
* ``a2 = (0, cos u, sin u)`` is orthogonal to ``e1``;
* ``a3`` is orthogonal to both ``U e1`` and ``a2``, and ``a1 = a2 x a3``.

Given ``t`` and ``u`` the a-basis is fixed up to signs, so a real fragment
needs five angles ``(t, s, u, theta, phi)``: ``s`` completes ``U`` and
``(theta, phi)`` place ``psi`` on the unit sphere.  With ``complex_psi`` two
extra relative phases make ``psi`` complex.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .fragment import QuantumFragment

__all__ = [
    "FragmentParams",
    "SearchResult",
    "decode",
    "objective",
    "objective_batch",
    "maximize_gap",
    "grid_floor_check",
    "paper_fragment_params",
    "ANGLE_BOX",
]

# Lower/upper bounds of each angle for restart sampling and grids.  Sign
# symmetries (psi -> -psi, U e1 -> -U e1 together with psi_1 -> -psi_1, a2 -> -a2)
# let t, u and theta range over half periods.
ANGLE_BOX = np.array(
    [
        [0.0, np.pi],  # t
        [0.0, 2 * np.pi],  # s
        [0.0, np.pi],  # u
        [0.0, np.pi / 2],  # theta
        [0.0, 2 * np.pi],  # phi
    ]
)
PHASE_BOX = np.array([[0.0, 2 * np.pi], [0.0, 2 * np.pi]])


@dataclass(frozen=True)
class FragmentParams:
    angles: tuple[float, ...]

    def __post_init__(self):
        angles = tuple(float(a) for a in self.angles)
        if len(angles) not in (5, 7):
            raise ValueError(f"expected 5 (real) or 7 (complex psi) angles, got {len(angles)}")
        object.__setattr__(self, "angles", angles)

    @property
    def fragment(self) -> QuantumFragment:
        return decode(self)


def _frames(x: np.ndarray):
    """Vectorized decoding: ``x`` has shape (N, 5) or (N, 7)."""
    t, s, u, th, ph = (x[:, i] for i in range(5))
    zeros, ones = np.zeros_like(t), np.ones_like(t)
    c1 = np.stack([np.cos(t), np.sin(t), zeros], axis=1)
    perp = np.stack([-np.sin(t), np.cos(t), zeros], axis=1)
    ez = np.stack([zeros, zeros, ones], axis=1)
    c2 = np.cos(s)[:, None] * perp + np.sin(s)[:, None] * ez
    c3 = np.cross(c1, c2)
    U = np.stack([c1, c2, c3], axis=2)

    a2 = np.stack([zeros, np.cos(u), np.sin(u)], axis=1)
    a3 = np.cross(c1, a2)
    norm = np.linalg.norm(a3, axis=1)
    degenerate = norm < 1e-12
    # U e1 parallel to a2: any unit vector orthogonal to a2 within e1's complement works.
    fallback = np.stack([zeros, np.sin(u), -np.cos(u)], axis=1)
    a3 = np.where(degenerate[:, None], fallback, a3 / np.where(degenerate, 1.0, norm)[:, None])
    a1 = np.cross(a2, a3)
    A = np.stack([a1, a2, a3], axis=1)

    psi = np.stack([np.cos(th), np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph)], axis=1).astype(complex)
    if x.shape[1] == 7:
        psi[:, 1] *= np.exp(1j * x[:, 5])
        psi[:, 2] *= np.exp(1j * x[:, 6])
    return U, A, psi


def decode(params: FragmentParams | np.ndarray | list) -> QuantumFragment:
    angles = params.angles if isinstance(params, FragmentParams) else FragmentParams(tuple(params)).angles
    U, A, psi = _frames(np.asarray(angles, dtype=float)[None, :])
    return QuantumFragment(np.eye(3), A[0], U[0], psi[0], eigenprep_index=1)


def objective_batch(x) -> np.ndarray:
    """Gap ``|psi_1|^2 - |(U psi)_2|^2 - |<a1|U psi>|^2`` for each row of angles."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    U, A, psi = _frames(x)
    upsi = np.einsum("nij,nj->ni", U, psi)
    a1_amp = np.einsum("ni,ni->n", A[:, 0, :], upsi)
    return np.abs(psi[:, 0]) ** 2 - np.abs(upsi[:, 1]) ** 2 - np.abs(a1_amp) ** 2


def objective(params) -> float:
    angles = params.angles if isinstance(params, FragmentParams) else params
    return float(objective_batch(np.asarray(angles, dtype=float))[0])


def paper_fragment_params() -> FragmentParams:
    """Angles decoding to the published qutrit fragment with gap (10 sqrt 3 - 7)/48."""
    r3 = np.sqrt(3.0)
    return FragmentParams(
        (np.pi / 4, 0.0, np.pi / 4, np.arccos((1.0 + r3) / 4.0), np.arctan2(2.0 * np.sqrt(2.0), 1.0 - r3))
    )


@dataclass(frozen=True)
class SearchResult:
    best_params: FragmentParams
    best_value: float
    history: list[float] = field(default_factory=list)
    seed: int = 0

    @property
    def best_fragment(self) -> QuantumFragment:
        return decode(self.best_params)

    def to_dict(self) -> dict:
        return {
            "best_value": self.best_value,
            "best_angles": list(self.best_params.angles),
            "best_fragment": self.best_fragment.to_dict(),
            "restarts": len(self.history),
            "seed": self.seed,
            "per_restart_values": list(self.history),
        }


def _local_search(x0: np.ndarray, max_iter: int) -> tuple[np.ndarray, float]:
    res = minimize(
        lambda x: -objective_batch(x)[0],
        x0,
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": max_iter, "maxfev": 2 * max_iter},
    )
    return res.x, float(-res.fun)


def maximize_gap(
    restarts: int = 64,
    seed: int = 0,
    *,
    starts=None,
    complex_psi: bool = False,
    max_iter: int = 4000,
) -> SearchResult:
    """Multi-restart Nelder-Mead on the gap.

    Restart points come from a scrambled Sobol sequence seeded by ``seed``
    over :data:`ANGLE_BOX`; explicit ``starts`` (rows of angles) are used
    first.  Deterministic in ``seed``.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    box = np.vstack([ANGLE_BOX, PHASE_BOX]) if complex_psi else ANGLE_BOX
    dim = box.shape[0]
    points = []
    if starts is not None:
        for s in np.atleast_2d(np.asarray(starts, dtype=float)):
            if s.size != dim:
                raise ValueError(f"start points need {dim} angles")
            points.append(s)
    if len(points) < restarts:
        sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
        with warnings.catch_warnings():
            # Sobol balance warnings for non-power-of-two counts are irrelevant here.
            warnings.simplefilter("ignore", UserWarning)
            unit = sampler.random(restarts - len(points))
        points.extend(qmc.scale(unit, box[:, 0], box[:, 1]))
    points = points[:restarts]

    history = []
    best_x, best_val = None, -np.inf
    for x0 in points:
        x, val = _local_search(np.asarray(x0), max_iter)
        history.append(val)
        if val > best_val:
            best_x, best_val = x, val
    return SearchResult(FragmentParams(tuple(best_x)), float(best_val), history, seed)


def grid_floor_check(resolution: int, chunk: int = 250_000, return_argmax: bool = False):
    """Maximum of the gap over a uniform ``resolution``-point grid per angle.

    Periodic angles use half-open grids; ``theta`` includes both ends.
    """
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    axes = []
    for (lo, hi), periodic in zip(ANGLE_BOX, (True, True, True, False, True)):
        axes.append(np.linspace(lo, hi, resolution, endpoint=not periodic))
    shape = (resolution,) * 5
    total = resolution**5
    best, best_idx = -np.inf, 0
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        idx = np.unravel_index(flat, shape)
        x = np.stack([axes[k][idx[k]] for k in range(5)], axis=1)
        vals = objective_batch(x)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, best_idx = float(vals[i]), int(flat[i])
    if not return_argmax:
        return best
    idx = np.unravel_index(best_idx, shape)
    return best, FragmentParams(tuple(axes[k][idx[k]] for k in range(5)))
