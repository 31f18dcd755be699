"""Casimir functions and homogeneous Poisson cohomology, exactly.

For linear structures the Casimir equation and the coboundary operator
restrict to finite-dimensional exact linear systems, so kernel dimensions
and Betti numbers come out as integers, not numerical ranks.
"""

from poissonforge import (casimir_basis, cohomology_dims, linear_poisson,
                          preset)

for name in ("so3", "sl2"):
    pi = linear_poisson(preset(name))
    basis = casimir_basis(pi, 2)
    print(f"{name}: Casimir basis up to degree 2:")
    for p in basis:
        print("   ", p)

# su(3) carries an additional independent cubic Casimir
pi_su3 = linear_poisson(preset("su3"))
cubic = [p for p in casimir_basis(pi_su3, 3) if p.degree() == 3]
print("su(3) cubic Casimir has", len(cubic[0].terms), "monomials")

# degree-by-degree cohomology of the rotation algebra: only the Casimir
# class and the top class survive in the quadratic component
pi = linear_poisson(preset("so3"))
for l in (2, 3, 4):
    table = cohomology_dims(pi, l, 3)
    print(f"coefficient degree {l}:")
    for k in table.degrees:
        print(f"   k={k}: dim={table.dim_cochains[k]:3d} "
              f"rank={table.rank_d[k]:3d} betti={table.betti[k]}")
