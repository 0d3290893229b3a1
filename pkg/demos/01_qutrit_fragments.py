"""Two qutrit fragments, their outcome tables, and the gap they open up.

Run: python3 demos/01_qutrit_fragments.py
"""

import math

from macrorealism.bounds import gap, table_quantities, theorem1_premises_hold
from macrorealism.fragment import fragment_to_ptm, paper_fragment_theorem1, paper_fragment_theorem2

for name, make in (("noise-free fragment", paper_fragment_theorem1), ("noise-tolerant fragment", paper_fragment_theorem2)):
    table = fragment_to_ptm(make())
    q = table_quantities(table)
    print(f"== {name}")
    print(f"   P(q1|Q,P)     = {q['p_q1_P']:.12f}")
    print(f"   P(q2|Q,T,P)   = {q['p_q2_TP']:.12f}")
    print(f"   P(a1|A,T,P)   = {q['p_a1_TP']:.12f}")
    print(f"   premises zero = {theorem1_premises_hold(table)}")
    print(f"   gap           = {gap(table):.12f}")

# The second fragment's gap has a closed form.
print(f"\n(10 sqrt3 - 7)/48 = {(10 * math.sqrt(3) - 7) / 48:.12f}")
# An eigenpreparation-supported model would need the gap to be <= 0 here.
