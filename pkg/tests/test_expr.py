from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fusionkit.arith import D
from fusionkit.expr import ObjectExprError, format_object, parse_object
from fusionkit.rings import catalog_ring


def test_parse_simple():
    z4 = catalog_ring("HI-Z4")
    assert parse_object(z4, "1 + r").coeffs == (1, 0, 0, 0, 1, 0, 0, 0)
    assert parse_object(z4, "1+a1*r").coeffs == (1, 0, 0, 0, 0, 1, 0, 0)
    assert parse_object(z4, "2").coeffs == (2, 0, 0, 0, 0, 0, 0, 0)


def test_parse_products_expand_via_ring():
    hi = catalog_ring("HI-Z2xZ2")
    v = parse_object(hi, "Gamma*(1+3*r)")
    assert v.coeffs == (1, 1, 1, 1, 3, 3, 3, 3)
    assert v.dim() == 4 + 12 * D
    # juxtaposition with a parenthesized group
    assert parse_object(hi, "Gamma(1+3*r)").coeffs == v.coeffs
    assert parse_object(hi, "(1+a1)(1+r)").coeffs == (1, 1, 0, 0, 1, 1, 0, 0)


def test_parse_pi_expression_over_z4():
    z4 = catalog_ring("HI-Z4")
    v = parse_object(z4, "Pi*(1+3*r)")
    assert v.dim() == 4 + 12 * D
    assert parse_object(z4, "Phi").coeffs == (1, 0, 1, 0, 0, 0, 0, 0)


def test_bare_juxtaposition_rejected():
    z4 = catalog_ring("HI-Z4")
    with pytest.raises(ObjectExprError):
        parse_object(z4, "1 + a1 r")
    with pytest.raises(ObjectExprError):
        parse_object(z4, "3r")


def test_errors_carry_position():
    z4 = catalog_ring("HI-Z4")
    with pytest.raises(ObjectExprError) as err:
        parse_object(z4, "1 + $")
    assert err.value.pos == 4
    with pytest.raises(ObjectExprError):
        parse_object(z4, "1 + nosuchlabel")
    with pytest.raises(ObjectExprError):
        parse_object(z4, "(1 + r")
    with pytest.raises(ObjectExprError):
        parse_object(z4, "1 + r)")
    with pytest.raises(ObjectExprError):
        parse_object(z4, "")


def test_format_examples():
    z4 = catalog_ring("HI-Z4")
    assert format_object(z4.vector((1, 0, 0, 0, 1, 0, 0, 0))) == "1 + r"
    assert format_object(z4.vector((1, 0, 0, 0, 2, 0, 0, 0))) == "1 + 2*r"
    assert format_object(z4.vector((0,) * 8)) == "0"
    hi = catalog_ring("HI-Z2xZ2")
    assert format_object(hi.vector((1, 1, 1, 1, 0, 0, 0, 0))) == "1 + a1 + a2 + a3"


@given(st.lists(st.integers(0, 9), min_size=8, max_size=8))
@settings(max_examples=60)
def test_roundtrip_random_vectors(coeffs):
    ring = catalog_ring("4442")
    v = ring.vector(coeffs)
    assert parse_object(ring, format_object(v)).coeffs == v.coeffs


@given(st.text(alphabet="1ar+*() ", max_size=24))
@settings(max_examples=120)
def test_parser_never_crashes(src):
    ring = catalog_ring("2D2")
    try:
        parse_object(ring, src)
    except ObjectExprError:
        pass


def test_distributivity_of_evaluation():
    ring = catalog_ring("4442")
    a = parse_object(ring, "b*(x+2*bx)")
    b = parse_object(ring, "b*x + 2*b*bx")
    assert a.coeffs == b.coeffs
