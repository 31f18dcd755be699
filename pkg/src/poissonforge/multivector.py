"""Polynomial multivector fields with the Schouten bracket and dilation grading.

A multivector field of degree q on R^n is stored as a map from strictly
increasing index tuples (i1 < ... < iq, 1-based) to polynomial coefficients.
Each field carries a weight vector in {0,1}^n splitting the coordinates into
base (weight 0) and fiber (weight 1) directions; the fiberwise dilations
induce the grading used by the jet/truncation machinery.

Sign conventions are pinned by two requirements: on vector fields the
bracket is the Lie bracket with L_X L_Y - L_Y L_X = L_[X,Y], and for a
bivector pi and function f the Hamiltonian vector field is H_f = -[pi, f].
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .polyalg import Poly, format_poly, parse_poly

__all__ = [
    "PolyMVF",
    "GradedPiece",
    "wedge",
    "schouten",
    "grade_component",
    "dilate",
    "truncate_jet",
]


def _sort_indices(indices: Sequence[int]):
    """Sort a leg tuple, returning (sorted tuple, permutation sign) or None on repeats."""
    idx = list(indices)
    sign = 1
    # insertion sort; leg counts are tiny
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return None, 0
    return tuple(idx), sign


class PolyMVF:
    """Polynomial multivector field on R^n with exact rational coefficients."""

    __slots__ = ("nvars", "grade", "weights", "terms")

    def __init__(self, nvars: int, grade: int, terms: dict | None = None,
                 weights: Sequence[int] | None = None):
        self.nvars = int(nvars)
        self.grade = int(grade)
        if self.grade < 0:
            raise ValueError("multivector degree must be nonnegative")
        if weights is None:
            weights = (1,) * self.nvars
        self.weights = tuple(int(w) for w in weights)
        if len(self.weights) != self.nvars or any(w not in (0, 1) for w in self.weights):
            raise ValueError(f"weights must lie in {{0,1}}^{self.nvars}")
        clean: dict[tuple, Poly] = {}
        if terms:
            for indices, poly in terms.items():
                indices = tuple(int(i) for i in indices)
                if len(indices) != self.grade:
                    raise ValueError(f"index tuple {indices} has wrong length for grade {self.grade}")
                if any(not 1 <= i <= self.nvars for i in indices):
                    raise ValueError(f"index tuple {indices} out of range 1..{self.nvars}")
                if any(a >= b for a, b in zip(indices, indices[1:])):
                    raise ValueError(f"index tuple {indices} is not strictly increasing")
                if poly.nvars != self.nvars:
                    raise ValueError("coefficient variable count mismatch")
                if not poly.is_zero():
                    if indices in clean:
                        clean[indices] = clean[indices] + poly
                        if clean[indices].is_zero():
                            del clean[indices]
                    else:
                        clean[indices] = poly
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, grade: int, weights=None) -> "PolyMVF":
        return cls(nvars, grade, {}, weights)

    @classmethod
    def from_function(cls, poly: Poly, weights=None) -> "PolyMVF":
        return cls(poly.nvars, 0, {(): poly}, weights)

    @classmethod
    def basis(cls, nvars: int, indices: Sequence[int], coeff: Poly | None = None,
              weights=None) -> "PolyMVF":
        """Multivector ``coeff * d_{i1} ^ ... ^ d_{iq}`` for increasing indices."""
        if coeff is None:
            coeff = Poly.constant(nvars, 1)
        return cls(nvars, len(indices), {tuple(indices): coeff}, weights)

    def with_weights(self, weights) -> "PolyMVF":
        return PolyMVF(self.nvars, self.grade, dict(self.terms), weights)

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "PolyMVF"):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        if self.weights != other.weights:
            raise ValueError("weight vector mismatch")

    def __eq__(self, other):
        if not (isinstance(other, PolyMVF) and self.nvars == other.nvars
                and self.weights == other.weights):
            return NotImplemented if not isinstance(other, PolyMVF) else False
        if self.is_zero() and other.is_zero():
            return True
        return self.grade == other.grade and self.terms == other.terms

    def __hash__(self):
        grade = -1 if self.is_zero() else self.grade
        return hash((self.nvars, grade, self.weights,
                     frozenset(self.terms.items())))

    # -- linear structure ---------------------------------------------

    def __add__(self, other: "PolyMVF") -> "PolyMVF":
        self._check(other)
        if self.grade != other.grade:
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise ValueError("cannot add multivectors of different degree")
        terms = dict(self.terms)
        for idx, p in other.terms.items():
            s = terms.get(idx)
            s = p if s is None else s + p
            if s.is_zero():
                terms.pop(idx, None)
            else:
                terms[idx] = s
        return PolyMVF(self.nvars, self.grade, terms, self.weights)

    def __neg__(self):
        return PolyMVF(self.nvars, self.grade, {i: -p for i, p in self.terms.items()}, self.weights)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, Poly):
            terms = {i: p * scalar for i, p in self.terms.items()}
        else:
            terms = {i: p * scalar for i, p in self.terms.items()}
        return PolyMVF(self.nvars, self.grade, terms, self.weights)

    __rmul__ = __mul__

    # -- grading ------------------------------------------------------

    def _monomial_grade(self, indices, exps) -> int:
        fiber_degree = sum(e for e, w in zip(exps, self.weights) if w == 1)
        base_legs = sum(1 for i in indices if self.weights[i - 1] == 0)
        return fiber_degree + base_legs

    def graded_pieces(self) -> dict[int, "PolyMVF"]:
        """Decompose into homogeneous pieces keyed by dilation grade."""
        pieces: dict[int, dict] = {}
        for indices, poly in self.terms.items():
            for exps, coeff in poly.terms.items():
                l = self._monomial_grade(indices, exps)
                bucket = pieces.setdefault(l, {})
                mono = Poly(self.nvars, {exps: coeff})
                bucket[indices] = bucket.get(indices, Poly.zero(self.nvars)) + mono
        return {l: PolyMVF(self.nvars, self.grade, t, self.weights)
                for l, t in sorted(pieces.items())}

    def min_grade(self):
        """Smallest dilation grade with a nonzero piece; None if zero."""
        best = None
        for indices, poly in self.terms.items():
            for exps in poly.terms:
                l = self._monomial_grade(indices, exps)
                if best is None or l < best:
                    best = l
        return best

    # -- serialization ------------------------------------------------

    def to_json_obj(self) -> dict:
        items = sorted(self.terms.items())
        return {
            "nvars": self.nvars,
            "weights": list(self.weights),
            "grade": self.grade,
            "terms": [{"indices": list(idx), "poly": format_poly(p)} for idx, p in items],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PolyMVF":
        nvars = obj["nvars"]
        terms = {}
        for entry in obj.get("terms", []):
            idx = tuple(entry["indices"])
            if idx in terms:
                raise ValueError(f"repeated index tuple {list(idx)} in terms")
            terms[idx] = parse_poly(entry["poly"], nvars)
        return cls(nvars, obj["grade"], terms, obj.get("weights"))

    @classmethod
    def from_json(cls, text: str) -> "PolyMVF":
        return cls.from_json_obj(json.loads(text))

    def __repr__(self):
        if self.grade == 0:
            body = format_poly(self.terms.get((), Poly.zero(self.nvars)))
        else:
            parts = []
            for idx, p in sorted(self.terms.items()):
                legs = "^".join(f"d{i}" for i in idx)
                parts.append(f"({format_poly(p)}) {legs}")
            body = " + ".join(parts) if parts else "0"
        return f"<PolyMVF deg={self.grade} {body}>"

    # -- evaluation ---------------------------------------------------

    def apply_to_functions(self, funcs: Sequence[Poly]) -> Poly:
        """Evaluate as a multiderivation: W(df_1, ..., df_q)."""
        if len(funcs) != self.grade:
            raise ValueError("need exactly one function per degree")
        out = Poly.zero(self.nvars)
        q = self.grade
        if q == 0:
            return self.terms.get((), out)
        grads = [[f.diff(i) for i in range(1, self.nvars + 1)] for f in funcs]
        import itertools
        for indices, poly in self.terms.items():
            acc = Poly.zero(self.nvars)
            for perm in itertools.permutations(range(q)):
                sign = _perm_sign(perm)
                prod = Poly.constant(self.nvars, sign)
                for row, col in enumerate(perm):
                    prod = prod * grads[row][indices[col] - 1]
                acc = acc + prod
            out = out + poly * acc
        return out

    def bivector_matrix(self, points: np.ndarray) -> np.ndarray:
        """Numeric skew matrix field Pi(x) for a bivector, shape (..., n, n)."""
        if self.grade != 2:
            raise ValueError("bivector_matrix needs degree 2")
        points = np.asarray(points, dtype=float)
        out = np.zeros(points.shape[:-1] + (self.nvars, self.nvars))
        for (i, j), poly in self.terms.items():
            vals = poly.eval_numeric(points)
            out[..., i - 1, j - 1] += vals
            out[..., j - 1, i - 1] -= vals
        return out


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class GradedPiece:
    """A dilation-homogeneous multivector: dilate(value, t) = t^(l-1) * value."""

    __slots__ = ("l", "value")

    def __init__(self, l: int, value: PolyMVF):
        pieces = value.graded_pieces()
        if any(k != l for k in pieces):
            raise ValueError(f"value is not homogeneous of grade {l}")
        self.l = int(l)
        self.value = value

    def __eq__(self, other):
        return isinstance(other, GradedPiece) and self.l == other.l and self.value == other.value

    def __repr__(self):
        return f"GradedPiece(l={self.l}, {self.value!r})"


# ---------------------------------------------------------------------------
# Algebraic operations
# ---------------------------------------------------------------------------

def wedge(W: PolyMVF, V: PolyMVF) -> PolyMVF:
    """Exterior product; graded-commutative with sign (-1)^(|W||V|)."""
    W._check(V)
    terms: dict[tuple, Poly] = {}
    grade = W.grade + V.grade
    for iw, pw in W.terms.items():
        for iv, pv in V.terms.items():
            combined, sign = _sort_indices(iw + iv)
            if sign == 0:
                continue
            contrib = pw * pv * sign
            s = terms.get(combined)
            s = contrib if s is None else s + contrib
            if s.is_zero():
                terms.pop(combined, None)
            else:
                terms[combined] = s
    return PolyMVF(W.nvars, grade, terms, W.weights)


def _interior_df(f: Poly, W: PolyMVF) -> PolyMVF:
    """Contraction i_df W."""
    n = W.nvars
    terms: dict[tuple, Poly] = {}
    for indices, poly in W.terms.items():
        for k, leg in enumerate(indices):
            d = f.diff(leg)
            if d.is_zero():
                continue
            rest = indices[:k] + indices[k + 1:]
            contrib = poly * d * ((-1) ** k)
            s = terms.get(rest)
            s = contrib if s is None else s + contrib
            if s.is_zero():
                terms.pop(rest, None)
            else:
                terms[rest] = s
    return PolyMVF(n, W.grade - 1, terms, W.weights)


def _accumulate(terms: dict, coeff: Poly, legs: Sequence[int], extra_sign: int):
    key, sign = _sort_indices(legs)
    if sign == 0 or coeff.is_zero():
        return
    contrib = coeff * (sign * extra_sign)
    s = terms.get(key)
    s = contrib if s is None else s + contrib
    if s.is_zero():
        terms.pop(key, None)
    else:
        terms[key] = s


def schouten(W: PolyMVF, V: PolyMVF) -> PolyMVF:
    """Schouten bracket [W, V].

    On decomposables it expands as
    sum_{i,j} (-1)^(i+j) [X_i, Y_j] ^ X_1 ^ ... ^ X_i-hat ^ ... ^ Y_j-hat ...,
    and on functions it is fixed by [W, f] = (-1)^(deg W - 1) i_df W, so that
    H_f = -[pi, f] for every bivector pi.
    """
    W._check(V)
    p, q = W.grade, V.grade
    n = W.nvars
    if p == 0 and q == 0:
        return PolyMVF.zero(n, 0, W.weights)
    if q == 0:
        f = V.terms.get((), Poly.zero(n))
        out = _interior_df(f, W)
        return out if (p - 1) % 2 == 0 else -out
    if p == 0:
        f = W.terms.get((), Poly.zero(n))
        return -_interior_df(f, V)

    terms: dict[tuple, Poly] = {}
    for iw, a in W.terms.items():
        for iv, b in V.terms.items():
            # legs of W: (a d_{i1}), d_{i2}, ..., d_{ip}; similarly for V.
            # Only slots carrying a coefficient have nonzero Lie brackets.
            i1 = iw[0]
            j1 = iv[0]
            rest_w = iw[1:]
            rest_v = iv[1:]

            # slot 1 with slot 1: [a d_i1, b d_j1]
            da = a.diff(j1)
            db = b.diff(i1)
            legs_tail = rest_w + rest_v
            if not db.is_zero():
                _accumulate(terms, a * db, (j1,) + legs_tail, 1)
            if not da.is_zero():
                _accumulate(terms, b * da, (i1,) + legs_tail, -1)

            # slot 1 of W with constant legs of V: [a d_i1, d_jl] = -(da/dx_jl) d_i1
            for l, jl in enumerate(rest_v, start=2):
                da_l = a.diff(jl)
                if da_l.is_zero():
                    continue
                legs = (i1,) + rest_w + (j1,) + rest_v[:l - 2] + rest_v[l - 1:]
                _accumulate(terms, b * da_l, legs, -((-1) ** (1 + l)))

            # constant legs of W with slot 1 of V: [d_ik, b d_j1] = (db/dx_ik) d_j1
            for k, ik in enumerate(rest_w, start=2):
                db_k = b.diff(ik)
                if db_k.is_zero():
                    continue
                legs = (j1, i1) + rest_w[:k - 2] + rest_w[k - 1:] + rest_v
                _accumulate(terms, a * db_k, legs, (-1) ** (k + 1))
    return PolyMVF(n, p + q - 1, terms, W.weights)


def grade_component(W: PolyMVF, l: int) -> GradedPiece:
    """The dilation-homogeneous component of grade l."""
    pieces = W.graded_pieces()
    value = pieces.get(l, PolyMVF.zero(W.nvars, W.grade, W.weights))
    return GradedPiece(l, value)


def dilate(W: PolyMVF, t) -> PolyMVF:
    """Dilation automorphism: multiplies each grade-l piece by t^(l-1)."""
    t = Fraction(t) if not isinstance(t, Fraction) else t
    if t == 0:
        raise ValueError("dilation parameter must be nonzero")
    terms: dict[tuple, Poly] = {}
    for indices, poly in W.terms.items():
        acc = Poly.zero(W.nvars)
        for exps, coeff in poly.terms.items():
            l = W._monomial_grade(indices, exps)
            acc = acc + Poly(W.nvars, {exps: coeff * t ** (l - 1)})
        if not acc.is_zero():
            terms[indices] = acc
    return PolyMVF(W.nvars, W.grade, terms, W.weights)


def truncate_jet(W: PolyMVF, k: int) -> PolyMVF:
    """Drop all graded pieces of grade > k (the k-th order jet)."""
    if k < 0:
        raise ValueError("jet order must be nonnegative")
    terms: dict[tuple, Poly] = {}
    for indices, poly in W.terms.items():
        kept = {exps: c for exps, c in poly.terms.items()
                if W._monomial_grade(indices, exps) <= k}
        if kept:
            terms[indices] = Poly(W.nvars, kept)
    return PolyMVF(W.nvars, W.grade, terms, W.weights)
