"""Formal linearization of a perturbed rotation structure.

A random polynomial change of coordinates is applied to the so(3) bivector
through the exp-adjoint series; the gauge recursion then recovers a vector
field conjugating the perturbed 4-jet back to its linear part, and the
answer is re-verified by an independent series expansion.
"""

import random

from poissonforge import (ad_exp, formal_linearize, linear_poisson, preset,
                          truncate_jet)
from poissonforge.formal import FilteredJet
from poissonforge.multivector import PolyMVF
from poissonforge.polyalg import Poly

random.seed(4)
pi_lin = linear_poisson(preset("so3"))
D = 4

# random homogeneous quadratic vector field as the hidden gauge generator
terms = {}
for i in (1, 2, 3):
    exps = [0, 0, 0]
    exps[random.randrange(3)] += 1
    exps[random.randrange(3)] += 1
    terms[(i,)] = Poly(3, {tuple(exps): random.choice([-1, 1, 2])})
X_hidden = PolyMVF(3, 1, terms)
print("hidden generator:", X_hidden)

pi = ad_exp(X_hidden, pi_lin, D).value
print("perturbed bivector has grades", sorted(pi.graded_pieces()))

sol = formal_linearize(pi, D)
print("status:", sol.status, "after", sol.rounds, "rounds")

# independent re-expansion: the returned generator must reproduce the
# perturbed jet exactly (rational arithmetic throughout)
recovered = ad_exp(sol.X, pi_lin, D).value
print("re-expansion matches the 4-jet:", recovered == truncate_jet(pi, D))
