"""Filtered graded Lie algebra engine for formal normal forms.

Everything here lives in a grade-D truncation of the algebra of polynomial
multivector fields: the order function of the jet filtration, adjoint
exponentials, the Dynkin form of the Campbell-Hausdorff product, homotopy
operators realized as exact linear solves against [pi_lin, .], the recursive
gauge-equivalence iteration for Maurer-Cartan elements, step-wise jet
prolongation, and the formal linearization pipeline built from the above.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .polyalg import Poly, solve_linear_exact
from .multivector import GradedPiece, PolyMVF, grade_component, schouten, truncate_jet
from .poisson import check_poisson

__all__ = [
    "FilteredJet",
    "GaugeSolution",
    "HomotopyResult",
    "order_of",
    "ad_exp",
    "bch",
    "homotopy_solve",
    "mc_equivalence",
    "prolong_step",
    "formal_linearize",
]


@dataclass(frozen=True)
class FilteredJet:
    """A multivector field truncated so all graded pieces have grade <= D."""

    value: PolyMVF
    D: int

    def __post_init__(self):
        object.__setattr__(self, "value", truncate_jet(self.value, self.D))

    @property
    def order(self):
        return order_of(self)

    def __eq__(self, other):
        return (isinstance(other, FilteredJet) and self.D == other.D
                and self.value == other.value)


def _as_jet(u, D: int) -> FilteredJet:
    if isinstance(u, FilteredJet):
        if u.D != D:
            return FilteredJet(u.value, D)
        return u
    return FilteredJet(u, D)


def order_of(u):
    """(min grade with a nonzero piece) - 1, or math.inf for zero."""
    value = u.value if isinstance(u, FilteredJet) else u
    g = value.min_grade()
    return math.inf if g is None else g - 1


def ad_exp(X, u, D: int) -> FilteredJet:
    """Ad(e^X)u = sum_n ad_X^n(u)/n! in the grade-D truncation."""
    X = _as_jet(X, D)
    u = _as_jet(u, D)
    if X.value.grade not in (1,) and not X.value.is_zero():
        raise ValueError("exponent must be a vector field")
    if order_of(X) < 1:
        raise ValueError("ad_exp needs order >= 1 (grade >= 2) exponent")
    acc = u.value
    term = u.value
    n = 0
    while not term.is_zero():
        n += 1
        term = truncate_jet(schouten(X.value, term), D) * Fraction(1, n)
        acc = acc + term
        if n > 4 * D + 8:  # nilpotency guarantees termination well before this
            raise RuntimeError("ad_exp series failed to terminate")
    return FilteredJet(acc, D)


def _compositions(budget: int, k: int):
    """Sequences ((l1,m1),...,(lk,mk)) with l_i+m_i >= 1 and total <= budget."""
    if k == 0:
        yield ()
        return
    for l in range(budget + 1):
        for m in range(budget - l + 1):
            if l + m == 0:
                continue
            for rest in _compositions(budget - l - m, k - 1):
                yield ((l, m),) + rest


def bch(X, Y, D: int) -> FilteredJet:
    """Campbell-Hausdorff product X*Y with ad_exp(X*Y) = ad_exp(X) ad_exp(Y).

    Dynkin-type expansion
        X*Y = X + Y + sum_{k>=1} (-1)^k/(k+1) *
              sum 1/((sum l_i)+1) * prod 1/(l_i! m_i!) *
              ad_X^{l1} ad_Y^{m1} ... ad_X^{lk} ad_Y^{mk} (X),
    finite here because every ad raises the order past D eventually.
    """
    X = _as_jet(X, D)
    Y = _as_jet(Y, D)
    for Z in (X, Y):
        if order_of(Z) < 1:
            raise ValueError("bch needs arguments of order >= 1")
    total = X.value + Y.value
    # a term with T operators has order >= T+1; it dies once T+1 > D - 1 + 1
    max_T = max(0, D - 1)
    for k in range(1, max_T + 1):
        coeff_k = Fraction((-1) ** k, k + 1)
        for blocks in _compositions(max_T, k):
            suml = sum(l for l, _ in blocks)
            denom = (suml + 1) * math.prod(
                math.factorial(l) * math.factorial(m) for l, m in blocks)
            term = X.value
            dead = False
            for l, m in reversed(blocks):
                for _ in range(m):
                    term = truncate_jet(schouten(Y.value, term), D)
                for _ in range(l):
                    term = truncate_jet(schouten(X.value, term), D)
                if term.is_zero():
                    dead = True
                    break
            if dead:
                continue
            total = total + term * (coeff_k * Fraction(1, denom))
    return FilteredJet(total, D)


# ---------------------------------------------------------------------------
# Homotopy operators: exact solves against d = [pi_lin, .]
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomotopyResult:
    status: str                 # "solved" | "obstructed"
    X: GradedPiece | None       # vector field with [pi_lin, X] = Z, when solved
    obstruction: GradedPiece | None
    certificate: list | None    # infeasibility witness of the exact solve


def _graded_monomial_basis(n: int, mvf_grade: int, l: int, weights,
                           base_degree_cap: int):
    """All monomial mvf's of degree `mvf_grade` and dilation grade l."""
    fiber_vars = [i for i in range(n) if weights[i] == 1]
    base_vars = [i for i in range(n) if weights[i] == 0]
    out = []
    for legs in itertools.combinations(range(1, n + 1), mvf_grade):
        base_legs = sum(1 for i in legs if weights[i - 1] == 0)
        fiber_deg = l - base_legs
        if fiber_deg < 0:
            continue
        caps = [fiber_deg if i in fiber_vars else base_degree_cap for i in range(n)]
        for exps in itertools.product(*(range(c + 1) for c in caps)):
            if sum(exps[i] for i in fiber_vars) != fiber_deg:
                continue
            out.append((legs, exps))
    return out


def _solve_bracket_equation(pi: PolyMVF, rhs: PolyMVF, unknown_basis,
                            restrict_grade: int | None = None):
    """Solve [pi, sum c_b b] = rhs exactly over the given monomial basis.

    With restrict_grade set, only the components of the bracket with grade
    <= restrict_grade are constrained (higher grades are left free).
    """
    n = pi.nvars

    def keep(legs, exps):
        if restrict_grade is None:
            return True
        fiber = sum(e for e, w in zip(exps, pi.weights) if w == 1)
        base_legs = sum(1 for i in legs if pi.weights[i - 1] == 0)
        return fiber + base_legs <= restrict_grade

    rows: dict[tuple, dict[int, Fraction]] = {}
    for col, (legs, exps) in enumerate(unknown_basis):
        b = PolyMVF(n, len(legs), {legs: Poly(n, {exps: Fraction(1)})}, pi.weights)
        db = schouten(pi, b)
        for lg, poly in db.terms.items():
            for e, c in poly.terms.items():
                if not keep(lg, e):
                    continue
                row = rows.setdefault((lg, e), {})
                row[col] = row.get(col, Fraction(0)) + c
    keys = set(rows)
    for lg, poly in rhs.terms.items():
        keys.update((lg, e) for e in poly.terms)
    keys = sorted(keys)
    A = [rows.get(key, {}) for key in keys]
    b_vec = []
    for lg, e in keys:
        poly = rhs.terms.get(lg)
        b_vec.append(poly.terms.get(e, Fraction(0)) if poly else Fraction(0))
    out = solve_linear_exact(A, b_vec, ncols=len(unknown_basis))
    if not out.feasible:
        return None, out.witness
    terms: dict[tuple, Poly] = {}
    for (legs, exps), c in zip(unknown_basis, out.particular):
        if c == 0:
            continue
        mono = Poly(pi.nvars, {exps: c})
        terms[legs] = terms.get(legs, Poly.zero(pi.nvars)) + mono
    grade = len(unknown_basis[0][0]) if unknown_basis else 0
    sol = PolyMVF(pi.nvars, grade, terms, pi.weights)
    return sol, None


def homotopy_solve(pi_lin: PolyMVF, Z: GradedPiece, base_degree_cap: int = 8) -> HomotopyResult:
    """Find a grade-q vector field X with [pi_lin, X] = Z (exact), or certify failure."""
    if Z.value.is_zero():
        zero = GradedPiece(Z.l, PolyMVF.zero(pi_lin.nvars, 1, pi_lin.weights))
        return HomotopyResult("solved", zero, None, None)
    if Z.value.grade != 2:
        raise ValueError("right-hand side must be a bivector")
    dZ = schouten(pi_lin, Z.value)
    if not dZ.is_zero():
        raise ValueError("right-hand side is not a cocycle: [pi_lin, Z] != 0")
    n = pi_lin.nvars
    basis = _graded_monomial_basis(n, 1, Z.l, pi_lin.weights, base_degree_cap)
    sol, witness = _solve_bracket_equation(pi_lin, Z.value, basis)
    if sol is None:
        return HomotopyResult("obstructed", None, Z, witness)
    return HomotopyResult("solved", GradedPiece(Z.l, sol), None, None)


# ---------------------------------------------------------------------------
# Maurer-Cartan gauge equivalence and linearization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaugeSolution:
    status: str                  # "equivalent" | "obstructed"
    X: FilteredJet | None = None
    rounds: int = 0
    degree: int | None = None
    cochain: GradedPiece | None = None
    certificate: list | None = None
    base_degree_cap: int | None = None

    def to_json_obj(self) -> dict:
        if self.status == "equivalent":
            return {"status": "equivalent", "X": self.X.value.to_json_obj(),
                    "rounds": self.rounds}
        return {"status": "obstructed", "degree": self.degree,
                "cochain": self.cochain.value.to_json_obj(),
                "base_degree_cap": self.base_degree_cap}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def _check_mc(gamma: FilteredJet, name: str):
    br = truncate_jet(schouten(gamma.value, gamma.value), gamma.D)
    if not br.is_zero():
        raise ValueError(f"{name} is not Maurer-Cartan mod grade {gamma.D}: "
                         f"[{name},{name}] has grade-{br.min_grade()} defect")


def mc_equivalence(gamma: FilteredJet, gamma_p: FilteredJet, D: int,
                   base_degree_cap: int = 8) -> GaugeSolution:
    """Gauge-equivalence of two MC bivectors agreeing to first order.

    Runs the recursion X_k = h(gamma_{k-1} - gamma), gamma_k = Ad(e^{X_k})
    gamma_{k-1}, composing the X_k with the Campbell-Hausdorff product.
    """
    gamma = _as_jet(gamma.value if isinstance(gamma, FilteredJet) else gamma, D)
    gamma_p = _as_jet(gamma_p.value if isinstance(gamma_p, FilteredJet) else gamma_p, D)
    _check_mc(gamma, "gamma")
    _check_mc(gamma_p, "gamma'")
    if order_of(FilteredJet(gamma.value - gamma_p.value, D)) < 1:
        raise ValueError("gamma and gamma' must agree in grade 1")
    pi_lin = grade_component(gamma.value, 1).value
    current = gamma_p
    X_total = None
    rounds = 0
    while True:
        diff = truncate_jet(current.value - gamma.value, D)
        if diff.is_zero():
            break
        q = diff.min_grade()
        rounds += 1
        if rounds > D + 1:
            raise RuntimeError("gauge iteration failed to make progress")
        Z = grade_component(diff, q)
        res = homotopy_solve(pi_lin, Z, base_degree_cap)
        if res.status == "obstructed":
            return GaugeSolution("obstructed", degree=q, cochain=Z,
                                 certificate=res.certificate,
                                 base_degree_cap=base_degree_cap)
        # Ad(e^X) cancels Z at leading order: [X, pi_lin] = -[pi_lin, X] = -Z
        Xk = FilteredJet(res.X.value, D)
        new = ad_exp(Xk, current, D)
        new_order = order_of(FilteredJet(new.value - gamma.value, D))
        if not new_order > q - 1:
            raise RuntimeError("gauge round did not raise the order")
        current = new
        X_total = Xk if X_total is None else bch(Xk, X_total, D)
    if X_total is None:
        X_total = FilteredJet(PolyMVF.zero(gamma.value.nvars, 1, gamma.value.weights), D)
    if ad_exp(X_total, gamma_p, D).value != gamma.value:
        raise RuntimeError("composed gauge element failed re-verification")
    return GaugeSolution("equivalent", X=X_total, rounds=rounds,
                         base_degree_cap=base_degree_cap)


@dataclass(frozen=True)
class ProlongResult:
    status: str                 # "solved" | "obstructed"
    eta: PolyMVF | None         # bivector correction, when solved
    obstruction: GradedPiece | None
    certificate: list | None


def prolong_step(pi_partial: FilteredJet, m: int, base_degree_cap: int = 8) -> ProlongResult:
    """One jet-extension step: correct pi so its Jacobiator vanishes in grade m.

    Solves [pi, eta]_m = -1/2 [pi,pi]_m for a bivector correction eta and
    returns it, or the obstruction cochain with an infeasibility certificate.
    The correction may span several dilation grades when weighted variables
    spread pi itself over several grades.
    """
    pi = pi_partial.value if isinstance(pi_partial, FilteredJet) else pi_partial
    if pi.grade != 2:
        raise ValueError("expected a bivector")
    jac = schouten(pi, pi)
    if not jac.is_zero() and jac.min_grade() < m:
        raise ValueError(f"Jacobiator already fails below grade {m} "
                         f"(at grade {jac.min_grade()})")
    rhs_piece = grade_component(jac, m)
    if rhs_piece.value.is_zero():
        return ProlongResult("solved", PolyMVF.zero(pi.nvars, 2, pi.weights),
                             None, None)
    rhs = rhs_piece.value * Fraction(-1, 2)
    pi_grades = sorted(pi.graded_pieces())
    eta_grades = sorted({m + 1 - g for g in pi_grades if m + 1 - g >= 1})
    # the given data is pi's jet in the fiber-ideal filtration: corrections
    # may only carry strictly higher fiber degree, so they leave it untouched
    fiber_floor = 1 + max(
        sum(e for e, w in zip(exps, pi.weights) if w == 1)
        for poly in pi.terms.values() for exps in poly.terms)
    basis = []
    for g in eta_grades:
        for legs, exps in _graded_monomial_basis(pi.nvars, 2, g, pi.weights,
                                                 base_degree_cap):
            fiber = sum(e for e, w in zip(exps, pi.weights) if w == 1)
            if fiber >= fiber_floor:
                basis.append((legs, exps))
    sol, witness = _solve_bracket_equation(pi, rhs, basis, restrict_grade=m)
    if sol is None:
        return ProlongResult("obstructed", None, rhs_piece, witness)
    corrected = pi + sol
    jac2 = schouten(corrected, corrected)
    if not jac2.is_zero() and jac2.min_grade() <= m:
        return ProlongResult("obstructed", None, rhs_piece, None)
    return ProlongResult("solved", sol, None, None)


def formal_linearize(pi: PolyMVF, D: int, base_degree_cap: int = 8) -> GaugeSolution:
    """Gauge pi's D-jet to its linear part, or report the obstruction."""
    pieces = pi.graded_pieces()
    if 0 in pieces:
        raise ValueError("pi must vanish at the origin (no grade-0 part)")
    pi_lin = pieces.get(1, PolyMVF.zero(pi.nvars, 2, pi.weights))
    if not check_poisson(pi_lin).is_poisson:
        raise ValueError("linear part of pi is not Poisson")
    gamma = FilteredJet(pi, D)
    gamma_p = FilteredJet(pi_lin, D)
    return mc_equivalence(gamma, gamma_p, D, base_degree_cap)
