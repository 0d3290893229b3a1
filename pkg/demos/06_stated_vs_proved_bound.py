"""A six-state model that beats the stated noise-tolerant bound.

The kernel carries q1 mass onto a state that answers a2, which the
untransformed a2 premise never sees.  The bound with P(a2|A,T,P_q1) holds.

Run: python3 demos/06_stated_vs_proved_bound.py
"""

import numpy as np

from macrorealism.bounds import gap, premise_sum, strict_premise_sum, theorem2_rhs, theorem2_rhs_strict
from macrorealism.ontic import OnticModel, OnticSpace, ResponseFunction, model_to_ptm
from macrorealism.support import beta_min

# 0: q1/a1, 1: q1/a2, 2: q1/a1 outside every eigen support, 3: q2/a1, 4: q3/a3, 5: q1/a1
space = OnticSpace(("q1", "q1", "q1", "q2", "q3", "q1"), ("q1", "q2", "q3"))
e = np.eye(6)
a_rows = np.array([[1, 0, 0], [0, 1, 0], [1, 0, 0], [1, 0, 0], [0, 0, 1], [1, 0, 0]], dtype=float)
model = OnticModel(
    space,
    {"q1": [(e[0] + e[5]) / 2], "q2": [e[3]], "q3": [e[4]]},
    {"P": [(e[0] + e[2]) / 2]},
    {"T": e[[1, 1, 4, 3, 4, 5]]},
    {"A": ResponseFunction(("a1", "a2", "a3"), a_rows)},
)
table = model_to_ptm(model)
print(f"gap = {gap(table)}, stated premise sum = {premise_sum(table)}, strict = {strict_premise_sum(table)}")
for alpha in (0.5, 1.0, 5.0):
    b = beta_min(model, "P", "q1", alpha)
    print(
        f"alpha={alpha}: beta_min={b:.3f}  stated rhs={theorem2_rhs(table, alpha, b):.3f}"
        f"  strict rhs={theorem2_rhs_strict(table, alpha, b):.3f}"
    )
