"""Invariant polynomials on su(3)* and coadjoint flow checks.

The quadratic and cubic invariants (p1, p2) separate coadjoint orbits; on
the diagonal circle of radius r they reduce to (r^2, r^3 sin 3theta), and
the inequality p1^3 >= p2^2 characterises the image of the invariant map.
"""

import math

import numpy as np

from poissonforge import (coadjoint_invariance_check, killing_classify,
                          linear_poisson, preset, su3_invariants,
                          weyl_circle_sample)
from poissonforge import casimir_basis

spec = preset("su3")
print("Killing classification:", killing_classify(spec))

worst = 0.0
for k in range(100):
    theta = 2 * math.pi * k / 100
    s = weyl_circle_sample(1.3, theta)
    worst = max(worst, abs(s.q1 - 1.3 ** 2),
                abs(s.q2 - 1.3 ** 3 * math.sin(3 * theta)))
print(f"diagonal-circle deviation: {worst:.2e}")

rng = np.random.default_rng(7)
ok = all(p1 ** 3 >= p2 ** 2 - 1e-9
         for p1, p2 in (su3_invariants(rng.normal(size=8))
                        for _ in range(1000)))
print("p1^3 >= p2^2 on 1000 random points:", ok)

# the exact Casimir polynomials of the linear structure are constant along
# numerically integrated coadjoint flows
pi = linear_poisson(spec)
for p in casimir_basis(pi, 3):
    if p.degree() == 0:
        continue
    dev = coadjoint_invariance_check(spec, p, trials=10, seed=3)
    print(f"degree-{p.degree()} Casimir drift along flows: {dev:.2e}")
