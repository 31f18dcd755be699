"""Exact Schouten calculus on polynomial multivector fields.

Builds the rotation bivector on R^3, verifies the Jacobi identity exactly,
and shows what the failure witness looks like for a broken bracket table.
"""

import random
from fractions import Fraction

from poissonforge import (LieAlgebraSpec, PolyMVF, check_poisson,
                          linear_poisson, preset, schouten, wedge)
from poissonforge.polyalg import parse_poly

pi = linear_poisson(preset("so3"))
print("rotation bivector:", pi)

res = check_poisson(pi)
print("is Poisson:", res.is_poisson)

# the bracket is computed over exact rationals, so algebraic identities
# hold on the nose rather than up to roundoff
X = PolyMVF(3, 1, {(1,): parse_poly("x2*x3", 3)})
Y = PolyMVF(3, 1, {(2,): parse_poly("1/2*x1^2", 3)})
print("[X, Y] =", schouten(X, Y))
print("[X, pi] =", schouten(X, pi))

lhs = schouten(X, wedge(Y, pi))
rhs = wedge(schouten(X, Y), pi) + wedge(Y, schouten(X, pi))
print("Leibniz rule holds exactly:", lhs == rhs)

# a bracket table that is antisymmetric but not a Lie algebra:
# [e1,e2] = e1, [e1,e3] = e3 fails the Jacobi identity
bad = linear_poisson(LieAlgebraSpec(
    dim=3, C={(1, 2, 1): Fraction(1), (1, 3, 3): Fraction(1)}))
bad_res = check_poisson(bad)
print("broken table is Poisson:", bad_res.is_poisson)
print("witness trivector [pi, pi] =", bad_res.witness)
