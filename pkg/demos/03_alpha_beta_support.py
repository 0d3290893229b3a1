"""How much slack beta each toy model needs at a given alpha.

Run: python3 demos/03_alpha_beta_support.py
"""

from macrorealism.fixtures import mixing_fixture, psi_ontic_fixture, undermining_fixture
from macrorealism.support import ab_verdict, beta_min

models = {"mixing": mixing_fixture(), "psi-ontic": psi_ontic_fixture(), "undermining": undermining_fixture()}
alphas = (0.0, 0.5, 1.0, 2.0, 10.0)

print("beta_min(P, q1, alpha)")
print("alpha       " + "".join(f"{a:>9}" for a in alphas))
for name, model in models.items():
    print(f"{name:<12}" + "".join(f"{beta_min(model, 'P', 'q1', a):9.4f}" for a in alphas))

# A verdict names the preparation and outcome that need the most slack.
print("\n", ab_verdict(models["undermining"], 1.0, 0.1).to_dict())
