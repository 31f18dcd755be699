"""Multivector algebra: wedge, Schouten bracket, grading, serialization."""

import json
import random
from fractions import Fraction

import numpy as np
import pytest

from poissonforge import (PolyMVF, dilate, grade_component, schouten,
                          truncate_jet, wedge)
from poissonforge.polyalg import Poly, parse_poly

from conftest import rand_mvf, rand_poly, sgn


def test_index_validation():
    p = Poly.constant(3, 1)
    with pytest.raises(ValueError):
        PolyMVF(3, 2, {(2, 1): p})
    with pytest.raises(ValueError):
        PolyMVF(3, 2, {(1, 1): p})
    with pytest.raises(ValueError):
        PolyMVF(3, 2, {(1, 4): p})


def test_zero_equality_across_grades():
    assert PolyMVF.zero(3, 1) == PolyMVF.zero(3, 2)
    assert hash(PolyMVF.zero(3, 1)) == hash(PolyMVF.zero(3, 3))


def test_wedge_graded_commutativity():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(2, 4)
        p, q = rng.randint(0, n), rng.randint(0, n)
        u, v = rand_mvf(rng, n, p), rand_mvf(rng, n, q)
        assert wedge(u, v) == wedge(v, u) * sgn(p * q)


def test_wedge_associativity():
    rng = random.Random(12)
    for _ in range(40):
        n = rng.randint(2, 4)
        u = rand_mvf(rng, n, rng.randint(0, 2))
        v = rand_mvf(rng, n, rng.randint(0, 2))
        w = rand_mvf(rng, n, rng.randint(0, 2))
        assert wedge(wedge(u, v), w) == wedge(u, wedge(v, w))


def test_schouten_vector_fields_is_lie_bracket():
    # [x d1, d1] = -d1 in the L_X L_Y - L_Y L_X convention
    n = 2
    X = PolyMVF(n, 1, {(1,): parse_poly("x1", n)})
    Y = PolyMVF(n, 1, {(1,): Poly.constant(n, 1)})
    assert schouten(X, Y) == PolyMVF(n, 1, {(1,): Poly.constant(n, -1)})
    f = parse_poly("x1^2*x2", n)
    # bracket acting on functions = commutator of derivations
    lhs = schouten(X, Y).apply_to_functions([f])
    rhs = (X.apply_to_functions([Y.apply_to_functions([f])])
           - Y.apply_to_functions([X.apply_to_functions([f])]))
    assert lhs == rhs


def test_schouten_function_slot_convention():
    # [W, f] = (-1)^(p-1) i_df W and [f, W] = -i_df W
    rng = random.Random(13)
    for _ in range(40):
        n = rng.randint(2, 3)
        p = rng.randint(1, n)
        W = rand_mvf(rng, n, p)
        f = PolyMVF.from_function(rand_poly(rng, n))
        assert schouten(W, f) == schouten(f, W) * (-sgn(p - 1))


def test_schouten_known_so3_bracket():
    # [pi, x3 d3] for pi = x3 d1^d2 + x2 d3^d1 + x1 d2^d3
    n = 3
    pi = PolyMVF(n, 2, {(1, 2): parse_poly("x3", n),
                        (1, 3): parse_poly("-x2", n),
                        (2, 3): parse_poly("x1", n)})
    X = PolyMVF(n, 1, {(3,): parse_poly("x3", n)})
    br = schouten(X, pi)
    # (L_X pi)^{ij} = X^k d_k pi^{ij} - pi^{kj} d_k X^i - pi^{ik} d_k X^j
    expected = PolyMVF(n, 2, {(1, 2): parse_poly("x3", n),
                              (1, 3): parse_poly("x2", n),
                              (2, 3): parse_poly("-x1", n)})
    assert br == expected


def test_graded_pieces_and_truncation():
    n = 2
    u = PolyMVF(n, 1, {(1,): parse_poly("x1 + x1^2 + x2^3", n)})
    pieces = u.graded_pieces()
    assert sorted(pieces) == [1, 2, 3]
    assert truncate_jet(u, 2) == pieces[1] + pieces[2]
    assert grade_component(u, 3).value == pieces[3]
    assert u.min_grade() == 1


def test_weighted_grading():
    # weight-0 legs count toward the grade; weight-0 variables do not
    n = 3
    u = PolyMVF(n, 2, {(1, 2): parse_poly("x3", n)}, weights=(0, 0, 1))
    # legs 1,2 have weight 0 (two units) plus fiber degree 1 from x3
    assert u.min_grade() == 3
    v = PolyMVF(n, 1, {(3,): parse_poly("x1^5", n)}, weights=(0, 0, 1))
    assert v.min_grade() == 0


def test_dilate_is_bracket_automorphism():
    rng = random.Random(14)
    t = Fraction(3, 2)
    for _ in range(40):
        n = rng.randint(2, 3)
        u = rand_mvf(rng, n, rng.randint(0, n))
        v = rand_mvf(rng, n, rng.randint(0, n))
        assert dilate(schouten(u, v), t) == schouten(dilate(u, t),
                                                    dilate(v, t))


def test_newton_grade_formula():
    rng = random.Random(15)
    for _ in range(40):
        n = rng.randint(2, 3)
        u = rand_mvf(rng, n, rng.randint(1, n))
        v = rand_mvf(rng, n, rng.randint(1, n))
        br = schouten(u, v)
        for l in range(0, 5):
            lhs = grade_component(br, l).value
            rhs = PolyMVF.zero(n, br.grade)
            for p in range(0, l + 2):
                q = l + 1 - p
                rhs = rhs + schouten(grade_component(u, p).value,
                                     grade_component(v, q).value)
            assert lhs == rhs


def test_json_round_trip():
    rng = random.Random(16)
    for _ in range(30):
        n = rng.randint(2, 4)
        u = rand_mvf(rng, n, rng.randint(0, n))
        assert PolyMVF.from_json(u.to_json()) == u
    # schema spot check
    u = PolyMVF(3, 2, {(1, 2): parse_poly("x3", 3)})
    obj = json.loads(u.to_json())
    assert obj["nvars"] == 3 and obj["grade"] == 2
    assert obj["weights"] == [1, 1, 1]
    assert obj["terms"] == [{"indices": [1, 2], "poly": "x3"}]


def test_bivector_matrix():
    pi = PolyMVF(3, 2, {(1, 2): parse_poly("x3", 3),
                        (1, 3): parse_poly("-x2", 3),
                        (2, 3): parse_poly("x1", 3)})
    pts = np.array([[1.0, 2.0, 3.0]])
    P = pi.bivector_matrix(pts)[0]
    expected = np.array([[0.0, 3.0, -2.0], [-3.0, 0.0, 1.0],
                         [2.0, -1.0, 0.0]])
    np.testing.assert_allclose(P, expected)


def test_multiderivation_application():
    pi = PolyMVF(2, 2, {(1, 2): Poly.constant(2, 1)})
    f = parse_poly("x1^2", 2)
    g = parse_poly("x2", 2)
    assert pi.apply_to_functions([f, g]) == parse_poly("2*x1", 2)
    assert pi.apply_to_functions([g, f]) == parse_poly("-2*x1", 2)
