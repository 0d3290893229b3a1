"""Recompute every headline number for the two published qutrit fragments."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import (
    ExperimentFrequencies,
    em_ruled_out,
    epsilon_residual,
    gap,
    table_quantities,
    worst_case_epsilon,
)
from .fragment import apply_unitary, fragment_to_ptm, paper_fragment_theorem1, paper_fragment_theorem2
from .search import maximize_gap

__all__ = ["ReproRow", "REFERENCE", "run_reproduction", "format_rows"]

# name -> (low, high) acceptance band
REFERENCE = {
    "fragment1 P(q1|Q,P)": (0.1 - 1e-12, 0.1 + 1e-12),
    "fragment1 max(P(q2|Q,T,P), P(a1|A,T,P))": (0.0, 1e-12),
    "fragment1 max premise": (0.0, 1e-12),
    "fragment2 gap": ((10 * math.sqrt(3) - 7) / 48 - 1e-12, (10 * math.sqrt(3) - 7) / 48 + 1e-12),
    "fragment2 max |U psi - sqrt2/4 (sqrt3, 1, 2)|": (0.0, 1e-12),
    "fragment2 max premise": (0.0, 1e-12),
    "search maximum (64 restarts)": (0.231, 0.2365),
    "worst-case epsilon": (0.0501, 0.0511),
    "worst-case epsilon residual": (0.0, 1e-10),
    "mixing models excluded (exact fragment2)": (1.0, 1.0),
    "mixing models excluded (eps = 0.06)": (0.0, 0.0),
}


@dataclass(frozen=True)
class ReproRow:
    name: str
    low: float
    high: float
    computed: float | None

    @property
    def skipped(self) -> bool:
        return self.computed is None

    @property
    def passed(self) -> bool:
        return self.skipped or self.low <= self.computed <= self.high

    def to_dict(self) -> dict:
        return {"name": self.name, "low": self.low, "high": self.high, "computed": self.computed, "passed": self.passed}


def _computed(fast: bool, seed: int, restarts: int) -> dict[str, float | None]:
    t1 = fragment_to_ptm(paper_fragment_theorem1())
    q1 = table_quantities(t1)
    frag2 = paper_fragment_theorem2()
    t2 = fragment_to_ptm(frag2)
    q2 = table_quantities(t2)
    premises = ("p_a2_Pq1", "p_a3_TPq1", "p_q3_TPq1")
    upsi = apply_unitary(frag2.unitary, frag2.psi)
    expected_upsi = math.sqrt(2) / 4 * np.array([math.sqrt(3), 1.0, 2.0])
    eps = worst_case_epsilon(t2)
    freqs = ExperimentFrequencies.from_table(t2)
    return {
        "fragment1 P(q1|Q,P)": q1["p_q1_P"],
        "fragment1 max(P(q2|Q,T,P), P(a1|A,T,P))": max(q1["p_q2_TP"], q1["p_a1_TP"]),
        "fragment1 max premise": max(q1[k] for k in premises),
        "fragment2 gap": gap(t2),
        "fragment2 max |U psi - sqrt2/4 (sqrt3, 1, 2)|": float(np.max(np.abs(upsi - expected_upsi))),
        "fragment2 max premise": max(q2[k] for k in premises),
        "search maximum (64 restarts)": None if fast else maximize_gap(restarts, seed).best_value,
        "worst-case epsilon": eps,
        "worst-case epsilon residual": abs(epsilon_residual(t2, eps)),
        "mixing models excluded (exact fragment2)": float(em_ruled_out(freqs)),
        "mixing models excluded (eps = 0.06)": float(em_ruled_out(freqs.adversarial(0.06))),
    }


def run_reproduction(fast: bool = False, seed: int = 0, restarts: int = 64) -> list[ReproRow]:
    values = _computed(fast, seed, restarts)
    return [ReproRow(name, lo, hi, values.get(name)) for name, (lo, hi) in REFERENCE.items()]


def format_rows(rows: list[ReproRow]) -> str:
    width = max(len(r.name) for r in rows)
    lines = [f"{'check':<{width}}  {'computed':>22}  {'accepted range':<36}  status"]
    for r in rows:
        computed = "skipped" if r.skipped else f"{r.computed:.17g}"
        status = "skip" if r.skipped else ("PASS" if r.passed else "FAIL")
        band = f"[{r.low:.12g}, {r.high:.12g}]"
        lines.append(f"{r.name:<{width}}  {computed:>22}  {band:<36}  {status}")
    return "\n".join(lines) + "\n"
