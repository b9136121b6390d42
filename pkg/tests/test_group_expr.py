"""
Tests for the group and coefficient expression parser
"""

import pytest

from cli.group_expr import CoefficientSpec, build_group, parse_coefficients, parse_group
from core.errors import ParseError


@pytest.mark.parametrize("text, order", [
    ("C5", 5), ("S4", 24), ("A4", 12), ("D4", 8), ("Q8", 8), ("V4", 4),
    ("C2 x C2 x C2", 8), ("S3 x C2", 12),
    ("perm:[(1,2),(3,4)]", 4), ("perm:[(1,2,3,4,5)]", 5),
])
def test_orders(text, order):
    assert build_group(text).order == order


def test_canonical_text():
    expr = parse_group(" S3 x C2 ")
    assert str(expr) == "S3xC2"
    assert expr.family == "product"
    assert build_group("S3 x C2").label() == "S3xC2"
    assert str(parse_group("perm:[ (1, 2), (3,4) ]")) == "perm:[(1,2),(3,4)]"


def test_product_is_not_abelian_when_a_factor_is_not():
    assert not build_group("S3xC2").is_abelian()
    assert build_group("C2xC4").is_abelian()


@pytest.mark.parametrize("text, position", [
    ("X5", 0),
    ("C", 1),
    ("C0", 1),
    ("Q9", 1),
    ("C2 x", 4),
    ("C2 C3", 3),
    ("perm:(1,2)", 5),
    ("perm:[(1,2]", 10),
])
def test_group_errors(text, position):
    with pytest.raises(ParseError) as info:
        parse_group(text)
    assert info.value.position == position


@pytest.mark.parametrize("text, expected, label", [
    ("Z", CoefficientSpec(0, 1), "Z"),
    ("Z/4", CoefficientSpec(4, 1), "Z/4"),
    ("Z/4^2", CoefficientSpec(4, 2), "Z/4^2"),
])
def test_coefficients(text, expected, label):
    parsed = parse_coefficients(text)
    assert parsed == expected
    assert str(parsed) == label


def test_coefficient_module(c3):
    assert parse_coefficients("Z").module(c3).relation_diag == (0,)
    assert parse_coefficients("Z/5^3").module(c3).relation_diag == (5, 5, 5)


@pytest.mark.parametrize("text", ["Z/1", "Z/", "Q", "Z/4^0", "Z/4x"])
def test_coefficient_errors(text):
    with pytest.raises(ParseError):
        parse_coefficients(text)
