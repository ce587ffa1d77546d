import pytest
from hypothesis import given
from hypothesis import strategies as st

from contact_type.curves import CurveJet, curve_search_lower_bound, order_ratio, pullback, tau_curve_ideal
from contact_type.localalg import IdealPresentation, maximal_ideal
from contact_type.parse import parse_poly, parse_real
from contact_type.poly import INF


def ideal(n, *gens):
    return IdealPresentation(n, [parse_poly(g, n) for g in gens])


def test_pullback_examples():
    phi = CurveJet.parse(["t^2", "t^3"])
    assert phi.mult == 2
    assert pullback(parse_poly("z2^2-z1^3", 2), phi).is_zero
    assert order_ratio(parse_poly("z1", 2), phi).value == 1
    r = parse_real("z1^3*zb1^3 + z2^3*zb2^3 + (1/2)*z3 + (1/2)*zb3", 3)
    pb = pullback(r, CurveJet.parse(["t", "0", "0"]))
    assert pb.order == 6 and pb.coefficient((3, 3)) == 1


def test_jet_validation():
    with pytest.raises(ValueError):
        CurveJet.parse(["1+t", "t"])
    with pytest.raises(ValueError):
        CurveJet.parse(["0", "0"])
    jet = CurveJet([{1: 1, 5: 2}, {2: 1}], precision=4)
    assert jet.components[0] == {1: jet.field.one()}
    assert pullback(parse_poly("z1^4", 2), jet).at_least


def test_tau_is_min_over_generators():
    phi = CurveJet.parse(["t", "t"])
    assert tau_curve_ideal(ideal(2, "z1^3", "z2^3"), phi).value == 3
    assert tau_curve_ideal(ideal(2, "z1-z2", "z2^5"), phi).value == 5


@given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 4))
def test_reparametrization_keeps_ratio(a, b, k):
    phi = CurveJet.monomial([a, b])
    g = parse_poly("z1^2*z2 + z2^4", 2)
    assert order_ratio(g, phi).value == order_ratio(g, phi.reparametrize(k)).value


@pytest.mark.parametrize(
    "n,gens,expected",
    [
        (2, ["z1^3", "z2^3"], 3),
        (3, ["z1", "z2", "z3"], 1),
        (3, ["z3", "z1^3", "z2^3"], 3),
        (3, ["z1^3+z2^3-z3^3"], INF),
        (3, ["z1^3+z2^3-z3^3", "(z1-z3)^4"], INF),
    ],
)
def test_curve_search_examples(n, gens, expected):
    tv = curve_search_lower_bound(ideal(n, *gens))
    assert tv.value == expected
    if expected == INF:
        curve = tv.witnesses["curve"]
        assert all(pullback(g, curve).is_zero for g in ideal(n, *gens).nonzero())


@given(st.lists(st.integers(1, 5), min_size=3, max_size=3))
def test_curve_search_finds_pure_power_value(pure):
    gens = [f"z{j + 1}^{p}" for j, p in enumerate(pure)]
    assert curve_search_lower_bound(ideal(3, *gens), E=2, D=1).value == max(pure)


def test_search_monotone_in_family_size():
    I = ideal(2, "z2^2-z1^3", "z1^5")
    small = curve_search_lower_bound(I, E=2, D=1).value
    big = curve_search_lower_bound(I, E=4, D=3).value
    assert small <= big
    # (t^2, t^3) kills the first generator and gives 10/2 on the second
    assert big == 5


def test_maximal_ideal_search():
    assert curve_search_lower_bound(maximal_ideal(3)).value == 1
