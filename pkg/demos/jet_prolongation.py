"""Extending a partial Poisson jet, and a genuine obstruction.

The first example completes a truncated 2-jet of a Poisson structure to the
next grade.  The second is a weighted jet along the plane z = 0 that admits
no correction at all: the solver returns the obstruction cochain together
with an exact infeasibility certificate.
"""

import random

from poissonforge import (ad_exp, linear_poisson, preset, prolong_step,
                          schouten, truncate_jet)
from poissonforge.formal import FilteredJet
from poissonforge.multivector import PolyMVF
from poissonforge.polyalg import Poly, parse_poly

# --- completing a solvable jet -------------------------------------------
random.seed(11)
pi_lin = linear_poisson(preset("so3"))
terms = {(i,): Poly(3, {(1, 1, 0): random.choice([-1, 1])}) for i in (1, 2)}
X0 = PolyMVF(3, 1, terms)
two_jet = truncate_jet(ad_exp(X0, pi_lin, 3).value, 2)

res = prolong_step(FilteredJet(two_jet, 2), 3)
print("2-jet extension:", res.status)
corrected = two_jet + res.eta
jac = schouten(corrected, corrected)
print("Jacobiator after correction vanishes through grade 3:",
      jac.is_zero() or jac.min_grade() > 3)

# --- an obstructed jet ----------------------------------------------------
# transverse coordinate z (weight 1), leaf coordinates x, y (weight 0)
pi = PolyMVF(3, 2, {(1, 2): parse_poly("x3", 3),
                    (1, 3): parse_poly("x1*x3", 3)},
             weights=(0, 0, 1))
m = schouten(pi, pi).min_grade()
print("\nweighted jet first fails the Jacobi identity at grade", m)
for cap in (2, 4, 8):
    res = prolong_step(FilteredJet(pi, m), m, base_degree_cap=cap)
    print(f"  base degree cap {cap}: {res.status}, "
          f"cochain {res.obstruction.value}")
