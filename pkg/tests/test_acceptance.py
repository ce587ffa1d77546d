"""The eight acceptance criteria, one test each.

Each test records PASS or FAIL in ``conftest.ACCEPTANCE``; the terminal summary
prints one line per criterion.  Run this file directly to get the same lines
without pytest.
"""

import contextlib
import functools
import io
import json
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import ACCEPTANCE  # noqa: E402
from oracles import brute_force_staircase  # noqa: E402

from contact_type.cli import load_corpus, main, shipped_corpus  # noqa: E402
from contact_type.config import DEFAULT_CONFIG  # noqa: E402
from contact_type.curves import pullback  # noqa: E402
from contact_type.decomp import (  # noqa: E402
    NonSquareWeightError,
    UnitaryMatrix,
    extract_fg,
    ideal_U,
    polarize,
    rational_sqrt,
    sample_unitary,
)
from contact_type.gaussian import GaussianRational  # noqa: E402
from contact_type.localalg import GenericSampler, IdealPresentation, colength  # noqa: E402
from contact_type.parse import parse_poly, parse_real  # noqa: E402
from contact_type.poly import INF, Poly, RealPoly  # noqa: E402
from contact_type.puiseux import branch_count, newton_puiseux, residual_order  # noqa: E402
from contact_type.qtypes import verify_theorems  # noqa: E402
from contact_type.typevalue import TypeValue  # noqa: E402


def criterion(k, text):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                ACCEPTANCE[k] = ("FAIL", text)
                print(f"criterion {k}: FAIL - {text}")
                raise
            ACCEPTANCE[k] = ("PASS", text)
            print(f"criterion {k}: PASS - {text}")

        return wrapper

    return deco


@functools.lru_cache(maxsize=None)
def corpus_report():
    start = time.perf_counter()
    cases = load_corpus(shipped_corpus())
    rep = verify_theorems(cases, DEFAULT_CONFIG)
    return cases, rep, time.perf_counter() - start


def _exact_value(v):
    if isinstance(v, TypeValue):
        assert v.is_exact, v
        return v.value
    return v


REGRESSION = {
    "z3_z1cube_z2cube": {"Delta_1": 3, "D": 9},
    "z1cube_z2cube_n2": {"Delta_1": 3, "D_1": 3, "D": 9, "D_2": 3, "Delta_2": 3},
    "cubic_cone": {"Delta_1": INF, "D_1": INF, "Delta_2": INF, "D_2": INF, "Delta_3": 3, "D_3": 3},
    "cubic_cone_line_m4": {"Delta_2": 4, "D_2": 4, "Delta_3": 3, "D_3": 3},
    "cubic_cone_line_m5": {"Delta_2": 5, "D_2": 5, "Delta_3": 3, "D_3": 3},
    "pure_powers_p2": {f"{s}_{q}": 2 for s in ("Delta", "D") for q in (1, 2, 3)},
    "pure_powers_p3": {f"{s}_{q}": 3 for s in ("Delta", "D") for q in (1, 2, 3)},
}


@criterion(1, "worked examples reproduce exactly, infinite values carry witnesses, under 60 s")
def test_criterion_1_worked_examples():
    cases, rep, elapsed = corpus_report()
    by_name = {c.name: c for c in rep.cases}
    gens = {c.name: c.ideal.nonzero() for c in cases if c.kind == "ideal"}
    for name, expected in REGRESSION.items():
        values = by_name[name].values
        for key, want in expected.items():
            assert _exact_value(values[key]) == want, (name, key, values[key])
            if want == INF and key != "D":
                phi = values[key].witnesses["curve"]
                assert all(pullback(g, phi).is_zero for g in gens[name]), (name, key)
    for case in rep.cases:
        assert not any(c.status == "FAIL" and c.name.startswith("expected") for c in case.checks)
    assert elapsed < 60, elapsed


BOUND_II = "hypersurface Delta_q <= 2(D_q/2)^(n-q)"
THEOREM_PREFIXES = ("D_q <= Delta_q", "Delta_q <= D_q^(n-q+1)", "hypersurface D_q <= Delta_q", BOUND_II,
                    "Delta_1 <= D", "monotone", "sharpness")


@criterion(2, "theorem suite PASS, including both sharpness identities, on exact values")
def test_criterion_2_theorem_suite():
    _, rep, _ = corpus_report()
    assert not rep.failed
    names = set()
    for case in rep.cases:
        for check in case.checks:
            if not check.name.startswith(THEOREM_PREFIXES):
                continue
            names.add((case.name, check.name))
            if check.status == "SKIPPED":
                assert check.name.startswith(BOUND_II) and "refuted" in check.detail
            else:
                assert check.status == "PASS", (case.name, check)
        for key, v in case.values.items():
            if key.startswith(("Delta_", "D_")) and v is not None:
                assert v.is_exact, (case.name, key, v)
    assert ("z3_z1cube_z2cube", "sharpness D=Delta_1^2") in names
    assert ("z1cube_z2cube_n2", "sharpness D=D_1*D_2") in names
    assert any(n.startswith(BOUND_II) for _, n in names)


def _random_monomial_ideal(rng):
    n = int(rng.integers(1, 4))
    gens = []
    for j in range(n):
        e = [0] * n
        e[j] = int(rng.integers(1, 7))
        gens.append(tuple(e))
    for _ in range(int(rng.integers(0, 5))):
        while True:
            e = tuple(int(x) for x in rng.integers(0, 7, size=n))
            if 0 < sum(e) <= 6:
                break
        gens.append(e)
    return n, gens


@criterion(3, "100 random monomial ideals: standard-basis colength equals staircase enumeration, under 30 s")
def test_criterion_3_monomial_oracle():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    for _ in range(100):
        n, gens = _random_monomial_ideal(rng)
        ideal = IdealPresentation(n, [Poly(n, {e: 1}) for e in gens])
        assert colength(ideal) == brute_force_staircase(gens, n), gens
    assert time.perf_counter() - start < 30


@criterion(4, "colength((z1 - z1^2, z2)) = 1 in the local ring")
def test_criterion_4_local_ring():
    ideal = IdealPresentation(2, [parse_poly("z1 - z1^2", 2), parse_poly("z2", 2)])
    assert colength(ideal) == 1


@criterion(5, "Puiseux branches of the cusp, the node and three sliced cubics have residual order >= 24")
def test_criterion_5_puiseux():
    T = 24
    curves = [parse_poly("z2^2 - z1^3", 2), parse_poly("z2^2 - z1^2", 2)]
    cubic = parse_poly("z1^3 + z2^3 - z3^3", 3)
    sampler = GenericSampler(seed=5, sample_count=3)
    curves += [cubic.compose(w.plane_parametrization()) for w in sampler.form_sets(3, 1)]
    assert len(curves) == 5
    for f in curves:
        branches = newton_puiseux(f, T=T)
        assert branches
        for b in branches:
            r = residual_order(f, b)
            assert r == INF or r >= T, (f, b)
        assert sum(b.e for b in branches) == branch_count(f), f
    assert [len(newton_puiseux(f, T=T)) for f in curves[:2]] == [1, 2]


def _random_real_germ(rng):
    n = int(rng.integers(1, 4))
    r = RealPoly(n, {})
    for _ in range(int(rng.integers(1, 6))):
        while True:
            e = [int(x) for x in rng.integers(0, 4, size=2 * n)]
            if 0 < sum(e) <= 6:
                break
        a, b = tuple(e[:n]), tuple(e[n:])
        c = GaussianRational(*(int(x) for x in rng.integers(-4, 5, size=2)))
        if rng.random() < 0.3:
            c = c * GaussianRational(1, 0) / int(rng.integers(2, 4))
        r = r + RealPoly(n, {(a, b): c}) + RealPoly(n, {(b, a): c.conjugate()})
    return r


def _extract_consistent(d):
    squares = all(rational_sqrt(w) is not None for _, w, _ in d.summands)
    try:
        f, g = extract_fg(d)
    except NonSquareWeightError:
        return not squares
    if not squares:
        return False
    back = RealPoly.real_part(d.h)
    for p in f:
        back = back + RealPoly.hermitian_square(p)
    for p in g:
        back = back - RealPoly.hermitian_square(p)
    return back == d.reconstruct()


@criterion(6, "200 random real germs round-trip through polarization; extraction matches the square test")
def test_criterion_6_polarization():
    rng = np.random.default_rng(7)
    for _ in range(200):
        r = _random_real_germ(rng)
        d = polarize(r)
        assert d.reconstruct() == r
        assert _extract_consistent(d)
    odd = polarize(parse_real("(1/2)*z2 + (1/2)*zb2 + z1^2*zb1 + z1*zb1^2", 2))
    try:
        extract_fg(odd)
    except NonSquareWeightError as exc:
        assert exc.hint == 2
    else:
        raise AssertionError("non-square weights were accepted")


UNITARY_GERMS = [
    (1, "(1/2)*z2 + (1/2)*zb2 + z1^2*zb1^2", 2, 2),
    (2, "z1^3*zb1^3 + z2^3*zb2^3 + (1/2)*z3 + (1/2)*zb3", 3, 9),
    (3, "(1/2)*z3 + (1/2)*zb3 + z1^2*zb1^2 + z2^2*zb2^2 + z1*z2*zb1*zb2", 3, 3),
]


@criterion(7, "50 unitaries per N in {1, 2, 3} are exactly unitary; colength(I(U)) is constant when g = 0")
def test_criterion_7_unitaries():
    sampler = GenericSampler(seed=3)
    for N, germ, n, expected in UNITARY_GERMS:
        d = polarize(parse_real(germ, n))
        f, g = extract_fg(d)
        assert len(f) == N and all(p.is_zero() for p in g)
        seen = set()
        for i in range(50):
            U = sample_unitary(N, sampler, i)
            assert U @ U.adjoint() == UnitaryMatrix.identity(N)
            seen.add(colength(ideal_U(d, U)))
        assert seen == {expected}, (germ, seen)


@criterion(8, "verify run twice with the same seed gives byte-identical JSON")
def test_criterion_8_determinism():
    outputs = []
    for _ in range(2):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            assert main(["verify", "--json", "--seed", "1"]) == 0
        outputs.append(buf.getvalue().encode())
    assert outputs[0] == outputs[1]
    assert json.loads(outputs[0])["result"]["status"] == "PASS"


if __name__ == "__main__":
    failed = 0
    for name in sorted(n for n in dir() if n.startswith("test_criterion_")):
        try:
            globals()[name]()
        except Exception:
            failed += 1
    sys.exit(1 if failed else 0)
