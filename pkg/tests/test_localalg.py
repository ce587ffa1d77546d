import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from contact_type.localalg import (
    Budget,
    BudgetExceeded,
    GenericSampler,
    IdealPresentation,
    LinearFormSet,
    colength,
    colength_with_forms,
    coordinate_form_sets,
    generic_colength,
    maximal_ideal,
    mora_standard_basis,
)
from contact_type.parse import parse_poly
from contact_type.poly import INF, Poly

from conftest import gaussians
from oracles import brute_force_staircase, local_colength


def ideal(n, *gens):
    return IdealPresentation(n, [parse_poly(g, n) for g in gens])


@pytest.mark.parametrize(
    "n,gens,expected",
    [
        (3, ["z3", "z1^3", "z2^3"], 9),
        (2, ["z1", "z2"], 1),
        (3, ["z1^3+z2^3-z3^3"], INF),
        (2, ["z1-z1^2", "z2"], 1),
        (2, ["z1^3", "z2^3"], 9),
        (2, ["z2^2-z1^3", "z1*z2"], 5),
        (1, ["z1^5+z1^7"], 5),
        (2, ["1+z1", "z2"], 0),
    ],
)
def test_colength_examples(n, gens, expected):
    assert colength(ideal(n, *gens)) == expected


def test_local_not_global():
    # globally z1(1-z1) has two zeros; locally 1-z1 is a unit
    assert colength(ideal(2, "z1-z1^2", "z2")) == 1
    sb = mora_standard_basis(ideal(2, "z1-z1^2", "z2"))
    assert sb.contains(parse_poly("z1", 2))


monomial_ideal = st.integers(1, 3).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.integers(1, 6), min_size=n, max_size=n),
        st.lists(st.lists(st.integers(0, 6), min_size=n, max_size=n), max_size=4),
    )
)


@given(monomial_ideal)
def test_monomial_colength_matches_staircase(data):
    n, pure, extra = data
    gens = [tuple(p if i == j else 0 for i in range(n)) for j, p in enumerate(pure)]
    gens += [tuple(e) for e in extra if sum(e) > 0]
    I = IdealPresentation(n, [Poly.monomial(g) for g in gens])
    assert colength(I) == brute_force_staircase(gens, n)


@given(st.lists(gaussians, min_size=3, max_size=3), st.integers(2, 4), st.integers(2, 4))
def test_colength_matches_linear_algebra(coeffs, a, b):
    a0, a1, a2 = coeffs
    g1 = Poly(2, {(a, 0): 1, (1, 1): a0, (0, b + 1): a1})
    g2 = Poly(2, {(0, b): 1, (2, 0): a2})
    gens = [g1, g2]
    ref = local_colength(gens, 2)
    assert ref is not None
    assert colength(IdealPresentation(2, gens)) == ref


def test_staircase_and_budget():
    sb = mora_standard_basis(ideal(2, "z1^2", "z2^3"))
    assert sb.staircase() == sorted((i, j) for i in range(2) for j in range(3))
    with pytest.raises(BudgetExceeded):
        colength(ideal(3, "z1^7+z2^5*z3", "z2^7+z1*z3^5", "z3^7+z1^5*z2"), budget=Budget(max_steps=5))


def test_forms_and_sampling():
    s = GenericSampler(seed=3, sample_count=4)
    a = s.form_sets(3, 1)
    assert [w.matrix for w in a] == [w.matrix for w in GenericSampler(seed=3, sample_count=4).form_sets(3, 1)]
    assert len(coordinate_form_sets(3, 2)) == 3
    w = LinearFormSet(3, [[1, -1, 0]])
    psi = w.plane_parametrization()
    assert all(f.compose(psi).is_zero() for f in w.forms)
    assert colength_with_forms(ideal(3, "z3", "z1^3", "z2^3"), w) == 3
    with pytest.raises(ValueError):
        LinearFormSet(3, [[1, 1, 0], [2, 2, 0]])


@pytest.mark.parametrize(
    "n,gens,q,expected",
    [
        (3, ["z1^3+z2^3-z3^3"], 3, 3),
        (3, ["z1^2", "z2^2", "z3^2"], 3, 2),
        (3, ["z1^3", "z2^3", "z3^3"], 3, 3),
        (3, ["z1", "z2", "z3"], 3, 1),
        (3, ["z3", "z1^3", "z2^3"], 2, 3),
    ],
)
def test_generic_colength(n, gens, q, expected):
    gc = generic_colength(ideal(n, *gens), q)
    assert gc.value == expected
    assert not gc.disagreement


def test_generic_colength_at_most_coordinate_values():
    I = ideal(3, "z1^3+z2^3-z3^3", "(z1-z3)^4")
    gc = generic_colength(I, 2)
    assert gc.value == min(gc.samples)
    assert gc.value == 12


def test_maximal_ideal():
    assert colength(maximal_ideal(4)) == 1
