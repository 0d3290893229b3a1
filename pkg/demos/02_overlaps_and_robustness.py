"""Overlaps, support curves, and why strict support is not a testable property.

An undermining model is nudged by one percent into a supported one.  The
support curve barely moves, so no finite experiment could tell them apart.

Run: python3 demos/02_overlaps_and_robustness.py
"""

import numpy as np

from macrorealism.fixtures import perturbed_undermining_fixture, undermining_fixture
from macrorealism.overlap import asymmetric_overlap, curve_eval, support_curve, total_variation_identity_check
from macrorealism.support import is_eigenpreparation_supported

f, g = np.array([0.5, 0.3, 0.2]), np.array([0.2, 0.2, 0.6])
print("three ways to compute one overlap:", total_variation_identity_check(f, g))

for label, model in (("original", undermining_fixture()), ("perturbed, eps=0.01", perturbed_undermining_fixture(0.01))):
    f_p, f_q = model.prep_densities["P"][0], model.eigen_densities["q1"][0]
    curve = support_curve(f_p, f_q)
    print(f"\n{label}: eigenpreparation supported = {is_eigenpreparation_supported(model)}")
    print(f"   asymmetric overlap (curve limit) = {asymmetric_overlap(f_q, f_p):.4f}")
    for alpha in (0.5, 1.0, 2.0, 10.0):
        print(f"   omega(f_P, {alpha:>4} f_q1) = {curve_eval(curve, alpha):.4f}")
    print("   breakpoints:", [(round(a, 4), round(v, 4)) for a, v in curve.breakpoints])
