from fractions import Fraction

import pytest
from hypothesis import given

from contact_type.gaussian import GaussianRational
from contact_type.parse import ParseError, RealityError, parse_poly, parse_real
from contact_type.poly import INF, DimensionError, Poly, RealPoly

from conftest import gaussians, polys, real_germs

I = GaussianRational(0, 1)


def test_gaussian_basics():
    a = GaussianRational(Fraction(1, 2), 3)
    assert a * a.inverse() == 1
    assert I * I == -1
    assert (a * a.conjugate()).is_real()
    assert a.norm() == Fraction(1, 4) + 9
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0).inverse()


@given(gaussians, gaussians, gaussians)
def test_gaussian_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if b:
        assert (a / b) * b == a


@given(polys(2), polys(2), polys(2))
def test_poly_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p - p).is_zero()


@given(polys(3))
def test_print_parse_round_trip(p):
    assert parse_poly(str(p), 3) == p


@given(real_germs(2))
def test_real_round_trip_and_reality(r):
    assert r.is_real()
    if r:
        assert parse_real(str(r), 2) == r


def test_parser_examples():
    r = parse_poly("z1^3*zb1^3 + z2^3*zb2^3 + (1/2)*z3 + (1/2)*zb3", 3)
    assert isinstance(r, RealPoly)
    assert r == RealPoly.real_part(Poly.var(3, 2)) + RealPoly.hermitian_square(Poly.var(3, 0) ** 3) + RealPoly.hermitian_square(
        Poly.var(3, 1) ** 3
    )
    assert parse_poly("-z1 + 2*i*z2^2", 2) == Poly(2, {(1, 0): -1, (0, 2): 2 * I})
    assert parse_poly("(z1-z3)^4", 3).degree() == 4


@pytest.mark.parametrize("bad", ["z1^^2", "z4", "z1 +", "3/0", "(z1", "x1"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_poly(bad, 3)


def test_reality_violation():
    with pytest.raises(RealityError):
        parse_real("i*z1*zb1 + z2", 2)


def test_orders_and_dimension_checks():
    assert parse_poly("z1^2*z2 + z2^5", 2).ord0() == 3
    assert Poly(2, {}).ord0() == INF
    with pytest.raises(DimensionError):
        Poly.var(2, 0) + Poly.var(3, 0)
