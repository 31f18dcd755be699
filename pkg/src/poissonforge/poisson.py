"""Poisson-specific operations on polynomial bivector fields.

Jacobi verification, the sharp (anchor) map, brackets, exact Casimir bases,
cohomology ranks of the homogeneous complexes attached to a linear structure,
pointwise gauge transformations, and the rescaling path connecting a
vanishing-at-zero structure to its linear part.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .polyalg import Poly, exact_rank, format_poly, solve_linear_exact
from .multivector import PolyMVF, dilate, grade_component, schouten

__all__ = [
    "PoissonCheck",
    "CohomologyTable",
    "check_poisson",
    "sharp",
    "poisson_bracket",
    "casimir_basis",
    "cohomology_dims",
    "gauge_pointwise",
    "GaugeSingularError",
    "conn_rescale",
]


@dataclass(frozen=True)
class PoissonCheck:
    is_poisson: bool
    witness: PolyMVF  # the trivector [pi, pi]; zero iff is_poisson


def check_poisson(pi: PolyMVF) -> PoissonCheck:
    """Test the Jacobi identity [pi, pi] = 0 exactly."""
    if pi.grade != 2:
        raise ValueError(f"expected a bivector, got degree {pi.grade}")
    witness = schouten(pi, pi)
    return PoissonCheck(witness.is_zero(), witness)


def sharp(pi: PolyMVF, alpha) -> PolyMVF:
    """The anchor pi#(alpha) = pi(alpha, .) for a polynomial 1-form alpha.

    alpha may be an integer i (meaning dx_i) or a length-n sequence of Poly
    coefficients.  sharp(pi, grad f) is the Hamiltonian vector field of f.
    """
    if pi.grade != 2:
        raise ValueError(f"expected a bivector, got degree {pi.grade}")
    n = pi.nvars
    if isinstance(alpha, int):
        coeffs = [Poly.zero(n)] * (alpha - 1) + [Poly.constant(n, 1)]
        coeffs += [Poly.zero(n)] * (n - alpha)
    else:
        coeffs = list(alpha)
        if len(coeffs) != n:
            raise ValueError(f"1-form needs {n} coefficients")
    terms: dict[tuple, Poly] = {}
    for (i, j), p in pi.terms.items():
        # pi(dx_i, .) picks up +p d_j; pi(dx_j, .) picks up -p d_i
        for leg, contrib in ((j, p * coeffs[i - 1]), (i, -(p * coeffs[j - 1]))):
            if contrib.is_zero():
                continue
            s = terms.get((leg,))
            s = contrib if s is None else s + contrib
            if s.is_zero():
                terms.pop((leg,), None)
            else:
                terms[(leg,)] = s
    return PolyMVF(n, 1, terms, pi.weights)


def hamiltonian_vf(pi: PolyMVF, f: Poly) -> PolyMVF:
    """H_f = pi#(df)."""
    grad = [f.diff(i) for i in range(1, pi.nvars + 1)]
    return sharp(pi, grad)


def poisson_bracket(pi: PolyMVF, f: Poly, g: Poly) -> Poly:
    """{f, g} = pi(df, dg)."""
    if pi.grade != 2:
        raise ValueError(f"expected a bivector, got degree {pi.grade}")
    out = Poly.zero(pi.nvars)
    for (i, j), p in pi.terms.items():
        out = out + p * (f.diff(i) * g.diff(j) - f.diff(j) * g.diff(i))
    return out


# ---------------------------------------------------------------------------
# Casimirs
# ---------------------------------------------------------------------------

def _monomials(n: int, degree: int):
    """All exponent tuples of total degree `degree` in n variables."""
    if n == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _monomials(n - 1, degree - first):
            yield (first,) + rest


def casimir_basis(pi: PolyMVF, D: int) -> list[Poly]:
    """Rational basis of {f : deg f <= D, pi#(df) = 0}, found per degree."""
    chk = check_poisson(pi)
    if not chk.is_poisson:
        raise ValueError("bivector is not Poisson; Casimirs undefined")
    n = pi.nvars
    basis: list[Poly] = []
    for d in range(D + 1):
        monos = list(_monomials(n, d))
        col_of = {m: c for c, m in enumerate(monos)}
        # equations: coefficients of sharp(pi, d(sum c_m x^m)) must vanish
        rows: dict[tuple, dict[int, Fraction]] = {}
        for c, m in enumerate(monos):
            H = hamiltonian_vf(pi, Poly(n, {m: Fraction(1)}))
            for idx, poly in H.terms.items():
                for exps, coeff in poly.terms.items():
                    row = rows.setdefault((idx, exps), {})
                    row[c] = row.get(c, Fraction(0)) + coeff
        A = [r for r in rows.values() if r]
        out = solve_linear_exact(A, [Fraction(0)] * len(A), ncols=len(monos))
        for vec in out.kernel_basis:
            terms = {m: v for m, v in zip(monos, vec) if v != 0}
            if terms:
                basis.append(Poly(n, terms))
    return basis


# ---------------------------------------------------------------------------
# Cohomology of the homogeneous complex of a linear structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CohomologyTable:
    grade: int
    degrees: list
    dim_cochains: dict
    rank_d: dict
    betti: dict

    def to_json_obj(self) -> dict:
        rows = [{"k": k, "dim": self.dim_cochains[k], "rank": self.rank_d[k],
                 "betti": self.betti[k]} for k in self.degrees]
        return {"grade": self.grade, "rows": rows}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def _cochain_basis(n: int, k: int, l: int, weights):
    """Basis of grade-l homogeneous k-vectors (all-ones weights: degree-l coeffs)."""
    out = []
    for legs in itertools.combinations(range(1, n + 1), k):
        base_legs = sum(1 for i in legs if weights[i - 1] == 0)
        fiber_deg = l - base_legs
        if fiber_deg < 0:
            continue
        fiber_vars = [i for i in range(n) if weights[i] == 1]
        base_vars = [i for i in range(n) if weights[i] == 0]
        if base_vars:
            # base-variable degree unbounded in principle; homogeneous complexes
            # are only assembled for all-fiber weights
            raise ValueError("cohomology_dims requires all-ones weights")
        for m in _monomials(n, fiber_deg):
            out.append(PolyMVF(n, k, {legs: Poly(n, {m: Fraction(1)})}, weights))
    return out


def cohomology_dims(pi_lin: PolyMVF, l: int, kmax: int) -> CohomologyTable:
    """Dims/ranks/betti of d = [pi_lin, .] on grade-l homogeneous k-vectors."""
    if pi_lin.grade != 2:
        raise ValueError("expected a bivector")
    pieces = pi_lin.graded_pieces()
    if set(pieces) - {1}:
        raise ValueError("cohomology_dims needs a linear (grade-1 homogeneous) bivector")
    if not check_poisson(pi_lin).is_poisson:
        raise ValueError("bivector is not Poisson")
    n = pi_lin.nvars
    weights = pi_lin.weights
    degrees = list(range(kmax + 1))
    bases = {k: _cochain_basis(n, k, l, weights) for k in range(kmax + 2)}
    dim_cochains = {k: len(bases[k]) for k in degrees}
    rank_d = {}
    for k in degrees:
        target = bases[k + 1]
        index = {}
        for c, b in enumerate(target):
            (legs, poly), = b.terms.items()
            (exps,), = (list(poly.terms),)
            index[(legs, exps)] = c
        rows: dict[int, dict[int, Fraction]] = {}
        for c, b in enumerate(bases[k]):
            db = schouten(pi_lin, b)
            for legs, poly in db.terms.items():
                for exps, coeff in poly.terms.items():
                    r = index[(legs, exps)]
                    row = rows.setdefault(r, {})
                    row[c] = row.get(c, Fraction(0)) + coeff
        rank_d[k] = exact_rank(list(rows.values()), ncols=len(bases[k]))
    betti = {}
    for k in degrees:
        dim_ker = dim_cochains[k] - rank_d[k]
        incoming = rank_d.get(k - 1, 0) if k > 0 else 0
        betti[k] = dim_ker - incoming
    return CohomologyTable(l, degrees, dim_cochains, rank_d, betti)


# ---------------------------------------------------------------------------
# Gauge transformations (pointwise, numeric)
# ---------------------------------------------------------------------------

class GaugeSingularError(ValueError):
    def __init__(self, det):
        super().__init__(f"gauge transformation singular: |det(Id + omega# pi#)| = {abs(det):.3e}")
        self.det = det


def gauge_pointwise(pi_matrix: np.ndarray, omega_matrix: np.ndarray) -> np.ndarray:
    """Gauge-transformed bivector matrix pi# (Id + omega# pi#)^{-1} at a point."""
    P = np.asarray(pi_matrix, dtype=float)
    W = np.asarray(omega_matrix, dtype=float)
    if P.shape != W.shape or P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ValueError("matrices must be square and of equal shape")
    for M, name in ((P, "pi"), (W, "omega")):
        if not np.allclose(M, -M.T, atol=1e-12):
            raise ValueError(f"{name} matrix is not skew-symmetric")
    M = np.eye(P.shape[0]) - W @ P
    det = np.linalg.det(M)
    if abs(det) < 1e-10:
        raise GaugeSingularError(det)
    out = P @ np.linalg.inv(M)
    return 0.5 * (out - out.T)  # symmetrize away round-off


# ---------------------------------------------------------------------------
# Rescaling path to the linear part
# ---------------------------------------------------------------------------

def conn_rescale(pi: PolyMVF, t) -> PolyMVF:
    """The path pi^t with pi^1 = pi and pi^0 = linear part (for pi(0) = 0)."""
    if pi.grade != 2:
        raise ValueError("expected a bivector")
    for (i, j), p in pi.terms.items():
        if p.constant_term() != 0:
            raise ValueError(
                f"coefficient of d{i}^d{j} has nonzero constant term; pi(0) != 0")
    t = Fraction(t) if not isinstance(t, Fraction) else t
    if t == 0:
        return grade_component(pi, 1).value
    return dilate(pi, t)
