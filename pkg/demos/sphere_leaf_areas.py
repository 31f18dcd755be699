"""Leaf symplectic areas of the rotation structure and their variations.

The sphere of radius r is a symplectic leaf with total area 4*pi*r.  The
chart form is obtained by inverting the bivector on the leaf tangent
planes; midpoint quadrature recovers the areas to high accuracy, and the
radial derivatives of the two generator areas on the product leaf come out
as (-8*pi*r/(1+r^2)^2, 4*pi).
"""

import math

from poissonforge import (dh_variation, linear_poisson, preset,
                          sphere_leaf_form, symplectic_area)

pi = linear_poisson(preset("so3"))

for r in (0.5, 1.0, 2.0):
    form = sphere_leaf_form(pi, r)
    area = symplectic_area(form, (64, 2048))
    exact = 4 * math.pi * r
    print(f"r = {r}: area = {area:.9f}  "
          f"(4*pi*r = {exact:.9f}, rel err {abs(area-exact)/exact:.2e})")

for r in (1.0, 2.0):
    d1, d2 = dh_variation(r, 1e-5)
    ref1 = -8 * math.pi * r / (1 + r * r) ** 2
    print(f"r = {r}: d(areas)/dr = ({d1:+.6f}, {d2:+.6f})  "
          f"expected ({ref1:+.6f}, {4*math.pi:+.6f})")
