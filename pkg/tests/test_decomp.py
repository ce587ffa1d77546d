from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from contact_type.curves import CurveJet
from contact_type.decomp import (
    NonSquareWeightError,
    UnitaryMatrix,
    check_q_positivity,
    extract_fg,
    ideal_U,
    polarize,
    rational_sqrt,
    rescale,
    rescale_hint,
    sample_unitary,
    truncate_jet,
)
from contact_type.localalg import GenericSampler, LinearFormSet, colength, empty_forms
from contact_type.parse import parse_poly, parse_real
from contact_type.poly import Poly, RealPoly

from conftest import real_germs

GERM = "z1^3*zb1^3 + z2^3*zb2^3 + (1/2)*z3 + (1/2)*zb3"
ODD = "(1/2)*z2 + (1/2)*zb2 + z1^2*zb1 + z1*zb1^2"


def test_basic_decomposition():
    d = polarize(parse_real(GERM, 3))
    assert d.h == parse_poly("z3", 3)
    assert sorted((s, w, str(p)) for s, w, p in d.summands) == [(1, 1, "z1^3"), (1, 1, "z2^3")]
    f, g = extract_fg(d)
    assert [str(p) for p in f] == ["z1^3", "z2^3"]
    assert all(p.is_zero() for p in g)


def test_indefinite_levi_form():
    d = polarize(parse_real("z1*zb1 - z2*zb2", 2))
    assert [(s, w) for s, w, _ in d.summands] == [(1, 1), (-1, 1)]


def test_non_square_weights_and_rescale():
    r = parse_real(ODD, 2)
    d = polarize(r)
    assert d.h == parse_poly("z2", 2)
    assert sorted(w for _, w, _ in d.summands) == [Fraction(1, 2), Fraction(1, 2)]
    with pytest.raises(NonSquareWeightError) as info:
        extract_fg(d)
    assert info.value.hint == 2 == rescale_hint(d)
    d2 = polarize(rescale(r, 2))
    f, g = extract_fg(d2)
    assert d2.reconstruct() == rescale(r, 2)


@given(real_germs(3))
def test_round_trip(r):
    d = polarize(r)
    assert d.reconstruct() == r
    squares = all(rational_sqrt(w) is not None for _, w, _ in d.summands)
    if squares:
        f, g = extract_fg(d)
        back = RealPoly.real_part(d.h)
        for p in f:
            back = back + RealPoly.hermitian_square(p)
        for p in g:
            back = back - RealPoly.hermitian_square(p)
        assert back == r
    else:
        with pytest.raises(NonSquareWeightError):
            extract_fg(d)


@given(real_germs(2), st.integers(1, 5))
def test_truncation_filters_degree(r, k):
    t = truncate_jet(r, k)
    assert all(sum(a) + sum(b) <= k for a, b in t.terms)
    assert truncate_jet(t, k) == t


@pytest.mark.parametrize("N", [1, 2, 3])
def test_unitaries_exact(N):
    s = GenericSampler(seed=5)
    for i in range(20):
        U = sample_unitary(N, s, i)
        assert U @ U.adjoint() == UnitaryMatrix.identity(N)
        assert U.is_unitary()
    assert sample_unitary(N, s, 7) == sample_unitary(N, GenericSampler(seed=5), 7)


def test_ideal_U_with_no_negative_part():
    d = polarize(parse_real(GERM, 3))
    values = {colength(ideal_U(d, sample_unitary(2, GenericSampler(), i))) for i in range(10)}
    assert values == {9}


def test_q_positivity_examples():
    r = parse_real(GERM, 3)
    curves = [CurveJet.parse(c) for c in (["t", "0", "0"], ["0", "t", "0"], ["t", "t", "0"])]
    rep = check_q_positivity(r, 2, curves, [LinearFormSet(3, [[0, 0, 1]])])
    assert rep.verdict == "no violation found"
    assert [v.order for v in rep.verdicts] == [6, 6, 6]
    assert [v.coefficient for v in rep.verdicts] == [1, 1, 2]
    odd = check_q_positivity(parse_real("(1/2)*z2 + (1/2)*zb2 + (1/2)*z1^2*zb1 + (1/2)*z1*zb1^2", 2), 1,
                             [CurveJet.parse(["t", "0"])], [empty_forms(2)])
    assert odd.violation is not None and odd.violation.order == 3
    quartic = check_q_positivity(parse_real("(1/2)*z2 + (1/2)*zb2 + z1^2*zb1^2", 2), 1,
                                 [CurveJet.parse(["t", "0"])], [empty_forms(2)])
    assert quartic.verdict == "no violation found"
    assert quartic.verdicts[0].order == 4


def test_q_positivity_preconditions():
    r = parse_real(GERM, 3)
    rep = check_q_positivity(r, 1, [CurveJet.parse(["0", "0", "t"])], [empty_forms(3)])
    assert rep.verdicts[0].status == "precondition_failed"
