"""Generators shared by the property tests."""

import numpy as np

from macrorealism.ontic import OnticModel, ResponseFunction, random_density, random_model


def random_pair(rng, max_size=64, sparse=True):
    n = int(rng.integers(1, max_size + 1))
    keep = rng.uniform(0.2, 1.0) if sparse else 1.0
    return random_density(rng, n, keep=keep), random_density(rng, n, keep=keep)


def eigensupported_premise_model(seed: int) -> OnticModel:
    """Random model with one eigen density for q1, the three premise probabilities
    forced to exactly zero, and every preparation (transformed ones included)
    inside the eigen supports."""
    rng = np.random.default_rng(seed)
    base = random_model(seed, int(rng.integers(4, 13)), eigen_count_per_outcome=1)
    n = base.size
    space = base.space
    s1 = base.eigen_densities["q1"][0] > 0
    covered = np.zeros(n, dtype=bool)
    for fs in base.eigen_densities.values():
        for f in fs:
            covered |= f > 0

    A = base.responses["A"].rows.copy()
    # A covered q2 state answering a1 deterministically keeps some target allowed.
    anchor = int(np.flatnonzero(space.cell_mask("q2") & covered)[0])
    A[anchor] = [1.0, 0.0, 0.0]
    # No a2 on the support of f_q1.
    for lam in np.flatnonzero(s1):
        A[lam, 1] = 0.0
        A[lam] = A[lam] / A[lam].sum() if A[lam].sum() > 0 else [1.0, 0.0, 0.0]

    K = base.kernels["T"].copy()
    allowed = covered & ~space.cell_mask("q3") & (A[:, 2] == 0.0)
    for lam in range(n):
        mask = allowed if s1[lam] else covered
        row = np.where(mask, K[lam], 0.0)
        K[lam] = row / row.sum() if row.sum() > 0 else np.eye(n)[anchor]

    f_p = random_density(rng, n, covered, keep=rng.uniform(0.3, 1.0))
    return OnticModel(
        space,
        base.eigen_densities,
        {"P": [f_p]},
        {"T": K},
        {"A": ResponseFunction(("a1", "a2", "a3"), A)},
    )
