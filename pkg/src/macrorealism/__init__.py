"""Testing macrorealism on finite ontic models without non-invasive measurability.

The package evaluates overlap functionals between discrete densities, the
exact support curve ``alpha -> omega(f_P, alpha f_q)``, (alpha, beta)-support
of ontic models, the resulting operational inequalities and experimental
exclusion lines, and searches qutrit fragments for large violations.

Basic example
-------------

.. code:: python

    from macrorealism import fragment_to_ptm, paper_fragment_theorem2, gap, worst_case_epsilon

    table = fragment_to_ptm(paper_fragment_theorem2())
    gap(table)                 # (10 sqrt(3) - 7) / 48 ~ 0.21501
    worst_case_epsilon(table)  # ~ 0.0506
"""

from .bounds import (
    ExclusionLine,
    ExclusionRegion,
    ExperimentFrequencies,
    em_ruled_out,
    epsilon_quadratic,
    epsilon_residual,
    exclusion_line,
    excluded_region,
    gap,
    lemma1_check,
    mixture_feasible,
    premise_sum,
    ruled_out,
    strict_premise_sum,
    table_quantities,
    theorem1_premises_hold,
    theorem2_rhs,
    theorem2_rhs_strict,
    theorem2_violated,
    worst_case_epsilon,
)
from .fragment import (
    QuantumFragment,
    apply_unitary,
    born_probability,
    fragment_to_ptm,
    paper_fragment_theorem1,
    paper_fragment_theorem2,
    validate_fragment,
)
from .ontic import (
    OnticModel,
    OnticSpace,
    ResponseFunction,
    mixing_model,
    model_probability,
    model_to_ptm,
    partition_indicator,
    perturb_eigen_density,
    perturb_prep_density,
    push_forward,
    random_model,
    reproduces_ptm,
)
from .overlap import (
    SupportCurve,
    asymmetric_overlap,
    curve_eval,
    support_curve,
    symmetric_overlap,
    total_variation_identity_check,
)
from .ptm import PtmTable
from .search import FragmentParams, decode, grid_floor_check, maximize_gap, objective
from .support import (
    AbPair,
    beta_min,
    is_ab_supported,
    is_eigenpreparation_supported,
    model_support_curve,
    sup_overlap,
)

__version__ = "0.1.0"
