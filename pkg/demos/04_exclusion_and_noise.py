"""From measured frequencies to excluded models, and how much noise that survives.

Run: python3 demos/04_exclusion_and_noise.py
"""

from macrorealism.bounds import (
    ExperimentFrequencies,
    em_ruled_out,
    excluded_region,
    exclusion_line,
    mixture_feasible,
    ruled_out,
    worst_case_epsilon,
)
from macrorealism.fixtures import mixing_fixture
from macrorealism.fragment import fragment_to_ptm, paper_fragment_theorem2
from macrorealism.overlap import support_curve

table = fragment_to_ptm(paper_fragment_theorem2())
freqs = ExperimentFrequencies.from_table(table)
line = exclusion_line(freqs)
print(f"E(alpha) = {line.intercept:.5f} + {line.slope:.1e} alpha, target {line.target:.5f}")
print(excluded_region(freqs).to_csv(alphas=[0, 1, 10]))

# No convex mixture of the eigenpreparations reproduces P's statistics.
print("mixture of eigenpreparations:", mixture_feasible(table, "P", ["P_q1", "P_q2", "P_q3"]).to_dict())

# A mixing model with P's Q statistics: its curve crosses the line.
weights = dict(zip(("q1", "q2", "q3"), table.distribution("Q", "P")))
mix = mixing_fixture(weights)
curve = support_curve(mix.prep_densities["P"][0], mix.eigen_densities["q1"][0])
print("mixing model ruled out:", ruled_out(curve, line).to_dict())

eps = worst_case_epsilon(table)
print(f"\nworst-case noise threshold: {eps:.4%}")
for e in (0.04, eps - 1e-4, eps + 1e-4, 0.06):
    print(f"   eps={e:.4f}: mixing models ruled out = {em_ruled_out(freqs.adversarial(e))}")
