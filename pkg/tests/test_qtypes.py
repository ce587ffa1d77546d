import json
from fractions import Fraction
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contact_type.config import DEFAULT_CONFIG, RunConfig
from contact_type.curves import pullback
from contact_type.gaussian import GaussianRational
from contact_type.localalg import IdealPresentation, colength, maximal_ideal
from contact_type.parse import parse_poly, parse_real
from contact_type.poly import INF
from contact_type.qtypes import (
    Case,
    NotHypersurfaceError,
    TestVariety,
    UnsupportedConfiguration,
    delta1_ideal,
    delta_q_hypersurface,
    delta_q_ideal,
    dn_ideal,
    dq_ideal,
    hypersurface_q_types,
    ideal_q_types,
    pure_power_bound,
    tau_ideal_variety,
    verify_theorems,
)

from conftest import monomials

CUBIC = "z1^3 + z2^3 - z3^3"


def ideal(n, *gens):
    return IdealPresentation(n, [parse_poly(g, n) for g in gens])


def implicit(n, q, *gens):
    return TestVariety.implicit([parse_poly(g, n) for g in gens], q)


def parametric(q, *comps):
    return TestVariety.parametric([parse_poly(c, q) for c in comps])


def corpus():
    out = []
    for f in sorted(resources.files("contact_type.corpus").iterdir()):
        if f.name.endswith(".json"):
            out.append(Case.from_json(json.loads(f.read_text())))
    return out


def assert_infinite_with_witness(v, gens):
    assert v.value == INF and v.is_exact
    phi = v.witnesses["curve"]
    assert all(pullback(g, phi).is_zero for g in gens)


# Delta_1

def test_delta1_examples():
    v = delta1_ideal(ideal(2, "z1^3", "z2^3"))
    assert (v.value, v.certificate) == (3, "exact")
    assert delta1_ideal(maximal_ideal(3)).value == 1
    I = ideal(3, CUBIC)
    assert_infinite_with_witness(delta1_ideal(I), I.generators)
    assert delta1_ideal(ideal(2, "z2^2 - z1^3")).value == INF
    cusp = delta1_ideal(ideal(2, "z2^2 - z1^3", "z1*z2"))
    assert (cusp.value, cusp.certificate) == (3, "exact")


def test_delta1_unit_and_zero_ideal():
    assert delta1_ideal(ideal(2, "1 + z1")).value == 0
    assert delta1_ideal(ideal(2, "0")).value == INF


def test_pure_power_bound():
    assert pure_power_bound(ideal(3, "z3", "z1^3", "z2^3")) == 3
    assert pure_power_bound(ideal(3, CUBIC)) is None


def test_delta1_linear_generator_reduction():
    I = ideal(3, "z1 + z2 - z3", "z1^3", "z2^2")
    v = delta1_ideal(I)
    assert (v.value, v.certificate) == (3, "exact")
    assert min(pullback(g, v.witnesses["curve"]).order for g in I.generators) == 3


@given(st.lists(monomials(2, 5), min_size=1, max_size=4))
def test_delta1_at_most_colength(ms):
    gens = [parse_poly("*".join(f"z{j + 1}^{e}" for j, e in enumerate(m) if e) or "1", 2) for m in ms]
    I = IdealPresentation(2, gens)
    d1, D = delta1_ideal(I), colength(I)
    assert d1.is_exact
    if D not in (0, INF):
        assert d1.value <= D


# Delta_q, D_n, tau, D_q

def test_delta_q_examples():
    assert delta_q_ideal(ideal(3, CUBIC, "(z1 - z3)^4"), 2).value == 4
    assert delta_q_ideal(ideal(3, CUBIC), 2).value == INF
    I = ideal(3, "z1^2*z2", "z3^2", "z2^3 + z1^3")
    d1 = delta1_ideal(I)
    dq = delta_q_ideal(I, 1)
    assert (d1.value, d1.certificate) == (dq.value, dq.certificate)


def test_dn_examples():
    assert dn_ideal(ideal(3, CUBIC)).value == 3
    for p in (2, 3):
        gens = [f"z{j}^{p}" for j in (1, 2, 3)]
        v = dn_ideal(ideal(3, *gens))
        assert (v.value, v.certificate) == (p, "exact")
    assert dn_ideal(maximal_ideal(3)).value == 1


def test_tau_examples():
    I = ideal(3, CUBIC, "(z1 - z3)^4")
    assert tau_ideal_variety(I, implicit(3, 2, CUBIC), 2).value == 4
    assert tau_ideal_variety(maximal_ideal(3), parametric(2, "z1", "z2", "0"), 2).value == 1
    assert tau_ideal_variety(ideal(3, "z1^3", "z2^3", "z3"), parametric(2, "z1", "z2", "0"), 2).value == 3


def test_dq_examples():
    v = dq_ideal(ideal(2, "z1^3", "z2^3"), 2)
    assert (v.value, v.certificate) == (3, "exact")
    v = dq_ideal(ideal(3, CUBIC, "(z1 - z3)^5"), 2, [implicit(3, 2, CUBIC)])
    assert (v.value, v.certificate) == (5, "exact")
    v = dq_ideal(ideal(3, CUBIC), 2, [implicit(3, 2, CUBIC)])
    assert (v.value, v.certificate) == (INF, "exact")


def test_dq_without_varieties_is_a_lower_bound():
    v = dq_ideal(ideal(3, CUBIC), 2)
    assert (v.value, v.certificate) == (1, "lower_bound")


def test_ideal_q_types_pins_delta():
    delta, d = ideal_q_types(ideal(3, CUBIC, "(z1 - z3)^4"), 2, [implicit(3, 2, CUBIC)])
    assert (delta.value, delta.certificate) == (4, "exact")
    assert (d.value, d.certificate) == (4, "exact")


def test_unsupported_configuration():
    with pytest.raises(UnsupportedConfiguration) as info:
        tau_ideal_variety(ideal(4, "z1^2", "z2^2", "z3^2", "z4^2"), implicit(4, 2, "z1", "z2"), 2)
    assert info.value.fallback
    with pytest.raises(ValueError):
        tau_ideal_variety(maximal_ideal(3), implicit(3, 2, CUBIC), 1)


def test_variety_rank_check():
    with pytest.raises(ValueError, match="rank"):
        parametric(2, "z1", "z1", "0")
    with pytest.raises(ValueError):
        parametric(2, "1 + z1", "z2", "0")
    V = parametric(2, "z1", "z2^2", "z1*z2")
    assert (V.n, V.q, V.max_degree()) == (3, 2, 2)


# hypersurfaces

GERM = "z1^3*zb1^3 + z2^3*zb2^3 + (1/2)*z3 + (1/2)*zb3"


def test_hypersurface_delta1():
    v = delta_q_hypersurface(parse_real(GERM, 3), 1)
    assert (v.value, v.certificate) == (6, "exact")


def test_hypersurface_delta2_pinned():
    V = parametric(2, "z1", "z2", "0")
    delta, d = hypersurface_q_types(parse_real(GERM, 3), 2, [V])
    assert (delta.value, delta.certificate) == (6, "exact")
    assert d.value == 6


def test_levi_indefinite_is_infinite():
    r = parse_real("z1*zb1 - z2*zb2 + (1/2)*z3 + (1/2)*zb3", 3)
    v = delta_q_hypersurface(r, 1)
    assert (v.value, v.certificate) == (INF, "exact")
    assert pullback(r, v.witnesses["curve"]).is_zero


def test_not_a_hypersurface():
    with pytest.raises(NotHypersurfaceError):
        delta_q_hypersurface(parse_real("z1*zb1 + z2*zb2", 2), 1)
    with pytest.raises(NotHypersurfaceError):
        delta_q_hypersurface(parse_real("1 + z1 + zb1", 1), 1)


# corpus-wide properties

def _random_substitution(rng, n):
    while True:
        A = rng.integers(-2, 3, size=(n, n))
        if round(abs(np.linalg.det(A))):
            return [[GaussianRational(int(x)) for x in row] for row in A]


@pytest.mark.parametrize("case", [c for c in corpus() if c.kind == "ideal"], ids=lambda c: c.name)
def test_linear_change_of_variables(case):
    rng = np.random.default_rng(11)
    base = [delta1_ideal(case.ideal), dn_ideal(case.ideal)]
    for _ in range(10):
        J = case.ideal.substitute_linear(_random_substitution(rng, case.n))
        for before, after in zip(base, [delta1_ideal(J), dn_ideal(J)]):
            assert before.is_exact and after.is_exact
            assert before.value == after.value


@settings(max_examples=5)
@given(st.integers(1, 1000))
def test_reports_are_deterministic(seed):
    cfg = RunConfig(seed=seed, sample_count=3)
    cases = [c for c in corpus() if c.name in ("cubic_cone_line_m4", "hypersurface_z1cube_z2cube")]
    a = json.dumps(verify_theorems(cases, cfg).to_json(), sort_keys=True)
    b = json.dumps(verify_theorems(list(reversed(cases)), cfg).to_json(), sort_keys=True)
    assert a == b


def test_monotone_in_q_and_sandwich():
    for case in corpus():
        if case.kind != "ideal":
            continue
        deltas = [delta_q_ideal(case.ideal, q) for q in range(1, case.n + 1)]
        values = [d.value for d in deltas if d.is_exact or d.certificate == "sampled_generic"]
        assert values == sorted(values, reverse=True) or values == sorted(values)
        for d in deltas:
            lo, hi = d.interval()
            assert lo <= d.value <= hi


def test_case_requires_provenance():
    with pytest.raises(ValueError, match="provenance"):
        Case.from_json({"name": "x", "n": 1, "generators": ["z1"], "expected": {"Delta_1": {"value": 1}}})
    with pytest.raises(ValueError):
        Case.from_json({"name": "x", "n": 1, "generators": ["z1"], "germ": "z1"})
    with pytest.raises(ValueError):
        Case.from_json({"name": "x", "n": 2, "generators": ["z1"], "q": [3]})
