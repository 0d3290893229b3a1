"""Acceptance suite: one PASS/FAIL line per criterion, printed even under capture.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python -m tests.test_acceptance``.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from macrorealism.bounds import (
    ExperimentFrequencies,
    em_ruled_out,
    epsilon_residual,
    gap,
    lemma1_check,
    table_quantities,
    theorem2_rhs,
    theorem2_rhs_strict,
    worst_case_epsilon,
)
from macrorealism.fixtures import mixing_fixture, perturbed_undermining_fixture, psi_ontic_fixture, undermining_fixture
from macrorealism.fragment import apply_unitary, fragment_to_ptm, paper_fragment_theorem1, paper_fragment_theorem2
from macrorealism.ontic import model_to_ptm, random_model
from macrorealism.overlap import asymmetric_overlap, curve_eval, support_curve, total_variation_identity_check
from macrorealism.search import maximize_gap
from macrorealism.support import beta_min, is_eigenpreparation_supported
from tests.helpers import random_pair

PREMISES = ("p_a2_Pq1", "p_a3_TPq1", "p_q3_TPq1")
ALPHAS = (0.0, 0.5, 1.0, 2.0, 5.0, 20.0)


def _line(number: int, ok: bool, detail: str) -> str:
    return f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print("\n" + _line(number, ok, detail))
        assert ok, detail

    return emit


def criterion_1():
    start = time.perf_counter()
    q = table_quantities(fragment_to_ptm(paper_fragment_theorem1()))
    elapsed = time.perf_counter() - start
    ok = (
        abs(q["p_q1_P"] - 0.1) <= 1e-12
        and q["p_q2_TP"] <= 1e-12
        and q["p_a1_TP"] <= 1e-12
        and max(q[k] for k in PREMISES) <= 1e-12
        and elapsed < 1.0
    )
    return ok, f"P(q1|Q,P)={q['p_q1_P']:.10f}, max premise={max(q[k] for k in PREMISES):.1e}, {elapsed:.3f}s"


def criterion_2():
    start = time.perf_counter()
    frag = paper_fragment_theorem2()
    g = gap(fragment_to_ptm(frag))
    upsi = apply_unitary(frag.unitary, frag.psi)
    dev = float(np.max(np.abs(upsi - math.sqrt(2) / 4 * np.array([math.sqrt(3), 1.0, 2.0]))))
    elapsed = time.perf_counter() - start
    target = (10 * math.sqrt(3) - 7) / 48
    ok = abs(g - target) <= 1e-12 and dev <= 1e-12 and elapsed < 1.0
    return ok, f"gap={g:.12f} (target {target:.12f}), |U psi - ref|={dev:.1e}, {elapsed:.3f}s"


def criterion_3():
    start = time.perf_counter()
    best = maximize_gap(restarts=64, seed=0).best_value
    elapsed = time.perf_counter() - start
    ok = 0.231 <= best <= 0.2365 and elapsed < 60.0
    return ok, f"best gap={best:.6f} in [0.231, 0.2365], {elapsed:.1f}s"


def criterion_4():
    t2 = fragment_to_ptm(paper_fragment_theorem2())
    eps = worst_case_epsilon(t2)
    res = abs(epsilon_residual(t2, eps))
    ok = 0.0501 <= eps <= 0.0511 and res < 1e-10
    return ok, f"epsilon*={eps:.6f}, residual={res:.1e}"


def criterion_5():
    freqs = ExperimentFrequencies.from_table(fragment_to_ptm(paper_fragment_theorem2()))
    exact, noisy = em_ruled_out(freqs), em_ruled_out(freqs.adversarial(0.06))
    return exact and not noisy, f"exact={exact}, eps=0.06 -> {noisy}"


def criterion_6():
    rng = np.random.default_rng(6)
    start = time.perf_counter()
    worst, exact = 0.0, True
    for _ in range(1000):
        f_p, f_q = random_pair(rng, 64)
        a, b, c = total_variation_identity_check(f_p, f_q)
        worst = max(worst, abs(a - b), abs(a - c), abs(b - c))
        exact &= support_curve(f_p, f_q).asymptote == asymmetric_overlap(f_q, f_p)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and exact and elapsed < 5.0
    return ok, f"max identity spread={worst:.1e}, asymptotes exact={exact}, {elapsed:.2f}s"


def criterion_7():
    rng = np.random.default_rng(7)
    shape_ok = True
    for _ in range(1000):
        c = support_curve(*random_pair(rng, 64))
        shape_ok &= bool(np.all(np.diff(c.values) >= -1e-12) and np.all(np.diff(c.slopes) <= 1e-12))
    mix = mixing_fixture()
    mix_worst = max(beta_min(mix, "P", q, 1.0) for q in mix.space.outcomes)
    psi = psi_ontic_fixture()
    psi_dev = max(
        abs(beta_min(psi, "P", q, a) - model_to_ptm(psi, ["P"]).prob(q, "Q", "P"))
        for q in psi.space.outcomes
        for a in (0.0, 0.5, 1.0, 10.0, 1e6)
    )
    ok = shape_ok and mix_worst <= 1e-12 and psi_dev <= 1e-12
    return ok, f"shape ok={shape_ok}, mixing beta_min(1)={mix_worst:.1e}, psi-ontic deviation={psi_dev:.1e}"


def criterion_8():
    start = time.perf_counter()
    stated = strict = 0
    worst = 0.0
    for seed in range(1000):
        m = random_model(seed, 3 + seed % 14, sparsity=None if seed % 2 else 0.4)
        t = model_to_ptm(m)
        g = gap(t)
        for a in ALPHAS:
            b = beta_min(m, "P", "q1", a)
            excess = g - theorem2_rhs(t, a, b)
            worst = max(worst, excess)
            stated += excess > 1e-9
            strict += g > theorem2_rhs_strict(t, a, b) + 1e-9
    elapsed = time.perf_counter() - start
    ok = stated == 0 and elapsed < 30.0
    return ok, (
        f"{stated} violations of the stated bound in 6000 (worst excess {worst:.3f}); "
        f"{strict} with P(a2|A,T,P_q1) in the premise sum; {elapsed:.1f}s"
    )


def criterion_9():
    rng = np.random.default_rng(9)
    failures = 0
    for trial in range(1000):
        m = random_model(10_000 + trial, int(rng.integers(3, 12)), eigen_count_per_outcome=1 + trial % 3)
        q = m.space.outcomes[trial % 3]
        alpha = float(rng.choice([0.0, 0.3, 1.0, 4.0, 50.0]))
        g = rng.uniform(0, 1, size=m.size)
        failures += not lemma1_check(m, "P", q, g, alpha, beta_min(m, "P", q, alpha), tol=1e-10)
    return failures == 0, f"{failures} violations in 1000 trials"


def criterion_10():
    base, pert = undermining_fixture(), perturbed_undermining_fixture(0.01)

    def at_one(m):
        return curve_eval(support_curve(m.prep_densities["P"][0], m.eigen_densities["q1"][0]), 1.0)

    before, after = is_eigenpreparation_supported(base), is_eigenpreparation_supported(pert)
    change = abs(at_one(pert) - at_one(base))
    ok = not before and after and change < 0.02
    return ok, f"supported {before} -> {after}, curve change at alpha=1: {change:.4f}"


def criterion_11():
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "macrorealism", "reproduce"], capture_output=True, text=True, check=False)
    elapsed = time.perf_counter() - start
    ok = proc.returncode == 0 and elapsed < 120.0
    return ok, f"exit {proc.returncode}, {elapsed:.1f}s"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("number", range(1, 12))
def test_criterion(number, report):
    ok, detail = CRITERIA[number - 1]()
    report(number, ok, detail)


if __name__ == "__main__":
    results = []
    for i, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        print(_line(i, ok, detail), flush=True)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
