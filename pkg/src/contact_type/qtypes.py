"""Estimators for the q-types Delta_q and D_q, and the inequality checker.

Every estimator returns a :class:`TypeValue` whose certificate states how
much is actually known.  Values over infinite families (all curves, all
varieties, all linear sections) are only ever reported as exact when an
independent bound pins them.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .config import DEFAULT_CONFIG, RunConfig
from .curves import CurveJet, _UNITS, _patterns, min_ratio, order_ratio, pullback, tau_curve_ideal
from .decomp import (
    HoloDecomposition,
    NonSquareWeightError,
    UnitaryMatrix,
    check_q_positivity,
    extract_fg,
    ideal_U,
    polarize,
    rescale,
    rescale_hint,
    sample_unitary,
    truncate_jet,
)
from .gaussian import GaussianRational
from .localalg import (
    BudgetExceeded,
    IdealPresentation,
    LinearFormSet,
    coordinate_form_sets,
    empty_forms,
    generic_colength,
    mora_standard_basis,
)
from .poly import INF, DimensionError, Poly, RealPoly, kernel_basis, rank
from .puiseux import PrecisionExhausted, newton_puiseux, plane_gcd, rational_directions
from .typevalue import TypeValue, as_value, value_from_json, value_json, value_str, vmax, vmin


class UnsupportedConfiguration(ValueError):
    """The requested (q, n, variety) combination has no implemented route."""

    def __init__(self, message: str, fallback: str = ""):
        super().__init__(message + (f"; fallback: {fallback}" if fallback else ""))
        self.fallback = fallback


class NotHypersurfaceError(ValueError):
    pass


# helpers


def _line(n: int) -> CurveJet:
    return CurveJet.monomial([1] + [None] * (n - 1))


def _identity_images(n: int) -> List[Poly]:
    return [Poly.var(n, j) for j in range(n)]


def _modal(values):
    """Most frequent value, smallest on ties; plus whether the values disagree."""
    counts = Counter(values)
    top = max(counts.values())
    mode = min(v for v, c in counts.items() if c == top)
    return mode, len(counts) > 1


def _derivative(p: Poly, j: int) -> Poly:
    terms = {}
    for m, c in p.terms.items():
        if m[j]:
            mm = list(m)
            mm[j] -= 1
            terms[tuple(mm)] = c * m[j]
    return Poly(p.n, terms)


# plane route (n = 2): exact


def _plane_delta1(ideal: IdealPresentation, cfg: RunConfig) -> TypeValue:
    gens = ideal.nonzero()
    common = plane_gcd(gens)
    if common.degree() > 0 and not common.constant_term():
        branch = newton_puiseux(common, T=cfg.jet_precision(common.degree()), split=False)[0]
        return TypeValue(
            INF,
            "exact",
            witnesses={"curve": branch.jet},
            notes=["generators share a factor through the origin; every generator vanishes on its branch"],
        )
    degs = [g.degree() for g in gens]
    T = cfg.precision or (max(degs) ** 2 + 1)
    T = max(T, max(degs) ** 2 + 1)
    best = None
    for g in gens:
        for br in newton_puiseux(g, T=T, split=False, max_extension=cfg.max_extension):
            ratios = []
            for k in gens:
                r = order_ratio(k, br.jet)
                if r.at_least:
                    # T exceeds the intersection number of coprime pairs, so k shares this branch
                    r = type(r)(INF, r.denominator)
                ratios.append(r)
            v = min_ratio(ratios).value
            if best is None or v > best[0] or (v == best[0] and br.jet.is_gaussian() and not best[1].is_gaussian()):
                best = (v, br.jet)
    v, jet = best
    return TypeValue(
        v,
        "exact",
        witnesses={"curve": jet},
        notes=["plane germ: maximum over branches of all generators is attained"],
    )


# Delta_1


def pure_power_bound(ideal: IdealPresentation, cfg: RunConfig = DEFAULT_CONFIG, basis=None):
    """max_j min{a : l_j^a in I} for a basis l_j of linear forms; None when unavailable."""
    n = ideal.n
    try:
        sb = mora_standard_basis(ideal, budget=cfg.budget)
    except BudgetExceeded:
        return None
    if not sb.is_finite:
        return None
    cap = sb.staircase_size()
    bases = [basis] if basis is not None else [[[1 if i == j else 0 for i in range(n)] for j in range(n)]]
    if basis is None:
        rng = cfg.sampler.rng("point", 0)
        for _ in range(2):
            while True:
                mat = rng.integers(-cfg.height, cfg.height + 1, size=(n, n)).tolist()
                if rank([[GaussianRational(x) for x in row] for row in mat]) == n:
                    break
            bases.append(mat)
    best = None
    for mat in bases:
        worst = 0
        for row in mat:
            ell = Poly.linear(row)
            power = ell
            a = 1
            try:
                while not sb.contains(power, cfg.budget):
                    a += 1
                    if a > cap:
                        break
                    power = power * ell
            except BudgetExceeded:
                a = cap + 1
            worst = max(worst, a)
        if worst <= cap and (best is None or worst < best):
            best = worst
    return best


def _linear_reduction(ideal: IdealPresentation, cfg: RunConfig) -> Optional[TypeValue]:
    """Restrict to the common kernel of the linear generators; the value does not change."""
    n = ideal.n
    lin = [g for g in ideal.nonzero() if g.degree() == 1]
    if not lin:
        return None
    rows = [[g.terms.get(tuple(1 if i == j else 0 for i in range(n)), GaussianRational(0)) for j in range(n)] for g in lin]
    basis = kernel_basis(rows, n)
    if not basis:
        return TypeValue(1, "exact", witnesses={"curve": _line(n)}, notes=["linear generators span all coordinates"])
    m = len(basis)
    psi = [Poly.linear([basis[c][j] for c in range(m)]) for j in range(n)]
    rest = [g.compose(psi) for g in ideal.nonzero() if g.degree() > 1]
    rest = [g for g in rest if g]
    if not rest:
        inner = TypeValue(INF, "exact", witnesses={"curve": _line(m)})
    else:
        inner = delta1_ideal(IdealPresentation(m, rest), cfg)
    witnesses = dict(inner.witnesses)
    if witnesses.get("curve") is not None:
        witnesses["curve"] = witnesses["curve"].push_forward(psi)
    notes = [f"restricted to the {m}-dimensional kernel of the linear generators"] + inner.notes
    return TypeValue(inner.value, inner.certificate, inner.lower, inner.upper, witnesses, notes)


def _tangent_cone_bound(ideal: IdealPresentation, cfg: RunConfig) -> Optional[TypeValue]:
    """Initial forms of the lowest order d with only the trivial common zero force Delta_1 = d."""
    n = ideal.n
    gens = ideal.nonzero()
    d = min(g.ord0() for g in gens)
    initial = [g.initial_form() for g in gens if g.ord0() == d]
    try:
        finite = mora_standard_basis(IdealPresentation(n, initial), budget=cfg.budget).is_finite
    except BudgetExceeded:
        return None
    if not finite:
        return None
    directions = [[1 if i == k else 0 for i in range(n)] for k in range(n)] + [[k + 1 for k in range(n)]]
    phi = next(CurveJet([{1: c} if c else {} for c in v]) for v in directions
               if any(f.evaluate(v) for f in initial))
    return TypeValue(d, "exact", witnesses={"curve": phi},
                     notes=["initial forms have no common zero off the origin, so every curve has ratio at most the order"])


def delta1_ideal(ideal: IdealPresentation, cfg: RunConfig = DEFAULT_CONFIG) -> TypeValue:
    """Delta_1(I): supremum over curves of min over generators of the order ratio."""
    n = ideal.n
    if ideal.is_unit:
        return TypeValue(0, "exact", witnesses={"curve": _line(n)}, notes=["unit ideal"])
    gens = ideal.nonzero()
    if not gens:
        return TypeValue(INF, "exact", witnesses={"curve": _line(n)}, notes=["zero ideal"])
    if n == 1:
        return TypeValue(min(g.ord0() for g in gens), "exact", witnesses={"curve": _line(1)})
    reduced = _linear_reduction(ideal, cfg)
    if reduced is not None:
        return reduced
    if n == 2:
        return _plane_delta1(ideal, cfg)
    cone = _tangent_cone_bound(ideal, cfg)
    if cone is not None:
        return cone
    notes = []
    try:
        sb = mora_standard_basis(ideal, budget=cfg.budget)
        D = sb.staircase_size()
    except BudgetExceeded:
        D = None
        notes.append("colength budget exceeded; no upper bound")
    upper = None
    if D is not None and D != INF:
        upper = Fraction(D)
        pp = pure_power_bound(ideal, cfg)
        if pp is not None and pp < upper:
            upper = Fraction(pp)
            notes.append(f"upper bound {pp} from pure powers of linear forms (colength {D})")
        else:
            notes.append(f"upper bound {D} from the colength")
    lower = curve_search(ideal, cfg, stop_at=upper)
    notes += lower.notes
    if lower.value == INF:
        return TypeValue(INF, "exact", witnesses=lower.witnesses, notes=notes)
    if D == INF:
        line = _line_witness(ideal)
        if line is not None:
            return TypeValue(INF, "exact", witnesses={"curve": line},
                             notes=notes + ["every generator vanishes on a line through the origin"])
        notes.append("the zero set is positive dimensional but no witness curve was found")
    if upper is not None and lower.value == upper:
        return TypeValue(upper, "exact", lower=upper, upper=upper, witnesses=lower.witnesses, notes=notes)
    return TypeValue(lower.value, "lower_bound", lower=lower.value, upper=upper, witnesses=lower.witnesses, notes=notes)


def _line_witness(ideal: IdealPresentation) -> Optional[CurveJet]:
    for v in rational_directions(ideal.nonzero()):
        phi = CurveJet([{1: c} if c else {} for c in v])
        if all(pullback(g, phi).is_zero for g in ideal.nonzero()):
            return phi
    return None


def curve_search(ideal: IdealPresentation, cfg: RunConfig, stop_at=None) -> TypeValue:
    from .curves import curve_search_lower_bound

    return curve_search_lower_bound(ideal, cfg.E, cfg.D, stop_at=stop_at, max_extension=cfg.max_extension)


# Delta_q and D_n for ideals


def _slice_forms(n: int, k: int, cfg: RunConfig, coordinates: bool = True) -> List[LinearFormSet]:
    if k == 0:
        return [empty_forms(n)]
    sets = cfg.sampler.form_sets(n, k)
    return sets + (coordinate_form_sets(n, k) if coordinates else [])


def delta_q_ideal(ideal: IdealPresentation, q: int, cfg: RunConfig = DEFAULT_CONFIG) -> TypeValue:
    """Delta_q(I) as the minimum over linear sections of Delta_1 of the restricted ideal."""
    n = ideal.n
    if not 1 <= q <= n:
        raise ValueError(f"q={q} out of range 1..{n}")
    if q == 1:
        return delta1_ideal(ideal, cfg)
    if q == n:
        return dn_ideal(ideal, cfg)
    per = []
    for W in _slice_forms(n, q - 1, cfg):
        psi = W.plane_parametrization()
        v = delta1_ideal(ideal.compose(psi), cfg)
        per.append((W, psi, v))
    values = [v.value for _, _, v in per]
    best_W, psi, best = min(per, key=lambda t: t[2].value)
    random_values = values[: cfg.sample_count]
    disagreement = len(set(random_values)) > 1
    rigorous_upper = vmin(v.upper for _, _, v in per if v.certificate in ("exact", "upper_bound"))
    witnesses = {"forms": best_W}
    if "curve" in best.witnesses:
        witnesses["curve"] = best.witnesses["curve"].push_forward(psi)
    notes = [
        f"minimum over {len(per)} linear sections; per-section certificates: "
        + ", ".join(sorted(set(v.certificate for _, _, v in per))),
    ]
    if disagreement:
        notes.append("random sections disagree: " + ", ".join(value_str(x) for x in random_values))
    return TypeValue(best.value, "sampled_generic", lower=None, upper=rigorous_upper, witnesses=witnesses, notes=notes)


def dn_ideal(ideal: IdealPresentation, cfg: RunConfig = DEFAULT_CONFIG) -> TypeValue:
    """Delta_n = D_n: generic colength after cutting down to a line."""
    n = ideal.n
    if ideal.is_unit:
        return TypeValue(0, "exact", witnesses={"curve": _line(n)})
    gens = ideal.nonzero()
    if not gens:
        return TypeValue(INF, "exact", witnesses={"curve": _line(n)})
    gc = generic_colength(ideal, n, cfg.sampler, budget=cfg.budget)
    floor = min(g.ord0() for g in gens)
    line = gc.witness.plane_parametrization()
    witnesses = {"forms": gc.witness, "curve": CurveJet.from_polys(line)}
    notes = [f"least generator order {floor} bounds every line restriction from below"]
    if gc.value == floor:
        return TypeValue(floor, "exact", lower=floor, upper=floor, witnesses=witnesses, notes=notes)
    return TypeValue(gc.value, "sampled_generic", lower=floor, upper=gc.value, witnesses=witnesses, notes=notes)


# test varieties


@dataclass
class TestVariety:
    """A q-dimensional germ through the origin, given by a parametrization or by equations."""

    __test__ = False  # keep pytest from collecting this class

    kind: str  # "parametric" or "implicit"
    n: int
    q: int
    images: Tuple[Poly, ...] = ()
    equations: Optional[IdealPresentation] = None
    name: str = ""

    @classmethod
    def parametric(cls, images: Sequence[Poly], name: str = "", sampler=None) -> "TestVariety":
        images = tuple(images)
        if not images:
            raise ValueError("parametrization needs components")
        q = images[0].n
        if any(p.n != q for p in images):
            raise DimensionError("all components must use the same parameters")
        if any(p.constant_term() for p in images):
            raise ValueError("parametrization must send 0 to the origin")
        v = cls("parametric", len(images), q, images=images, name=name)
        v._check_rank(sampler or DEFAULT_CONFIG.sampler)
        return v

    @classmethod
    def implicit(cls, generators: Sequence[Poly], q: int, name: str = "") -> "TestVariety":
        gens = list(generators)
        n = gens[0].n
        if not 1 <= q <= n:
            raise ValueError(f"dimension {q} out of range")
        return cls("implicit", n, q, equations=IdealPresentation(n, gens), name=name)

    def _check_rank(self, sampler):
        rng = sampler.rng("point", 1)
        for _ in range(4):
            pt = [GaussianRational(Fraction(int(a), int(b))) for a, b in zip(
                rng.integers(-9, 10, size=self.q), rng.integers(1, 10, size=self.q))]
            jac = [[_derivative(p, j).evaluate(pt) for j in range(self.q)] for p in self.images]
            if rank(jac) == self.q:
                return
        raise ValueError(f"parametrization does not have rank {self.q}")

    def max_degree(self) -> int:
        if self.kind == "parametric":
            return max(p.degree() for p in self.images)
        return self.equations.max_degree()

    def to_json(self):
        out = {"kind": self.kind, "q": self.q, "name": self.name}
        if self.kind == "parametric":
            out["components"] = [str(p) for p in self.images]
        else:
            out["generators"] = [str(g) for g in self.equations.generators]
            out["dimension_asserted"] = self.q
        return out


def _section_curves(V: TestVariety, W: LinearFormSet, T: int, cfg: RunConfig) -> List[Tuple[CurveJet, int]]:
    """Branches of V cut by the forms W, as curves in C^n with their Bezout bound."""
    if V.kind == "parametric":
        if V.q == 1:
            return [(CurveJet.from_polys(V.images), None)]
        if V.q != 2:
            raise UnsupportedConfiguration(
                f"parametric variety of dimension {V.q}", "monomial-curve sampling on the intersection ideal"
            )
        (w,) = W.forms
        c = w.compose(list(V.images))
        if c.is_zero():
            return []
        push = list(V.images)
    else:
        if V.n - V.q + 1 != 2:
            raise UnsupportedConfiguration(
                f"implicit variety with n-q+1 = {V.n - V.q + 1}", "monomial-curve sampling on the intersection ideal"
            )
        push = W.plane_parametrization() if len(W) else _identity_images(V.n)
        c = plane_gcd([g.compose(push) for g in V.equations.nonzero()])
        if c.degree() <= 0 or c.constant_term():
            return []
    out = []
    for br in newton_puiseux(c, T=T, split=False, max_extension=cfg.max_extension):
        out.append((br.jet.push_forward(push), c.degree()))
    return out


def _section_tau(ideal, V, W, cfg) -> Tuple[object, Optional[CurveJet]]:
    gens = ideal.nonzero()
    degs = [g.degree() for g in gens]
    vdeg = max(V.max_degree(), 1)
    bezout = max(degs) * vdeg * vdeg
    T = max(cfg.precision or 0, bezout + 1)
    best = (None, None)
    for gamma, _ in _section_curves(V, W, T, cfg):
        ratios = []
        for g in gens:
            r = order_ratio(g, gamma)
            if r.at_least:
                r = type(r)(INF, r.denominator)
            ratios.append(r)
        v = min_ratio(ratios).value
        if best[0] is None or v > best[0] or (v == best[0] and gamma.is_gaussian() and not best[1].is_gaussian()):
            best = (v, gamma)
    return best


def tau_ideal_variety(ideal: IdealPresentation, V: TestVariety, q: int, cfg: RunConfig = DEFAULT_CONFIG) -> TypeValue:
    """tau(I, V): generic value over sections S of the largest branch ratio of V cut by S."""
    n = ideal.n
    if V.q != q:
        raise ValueError(f"variety has dimension {V.q}, expected {q}")
    if V.n != n:
        raise DimensionError("variety and ideal live in different dimensions")
    if q == n:
        return dn_ideal(ideal, cfg)
    if q == 1 and V.kind == "parametric":
        phi = CurveJet.from_polys(V.images)
        r = tau_curve_ideal(ideal, phi)
        cert = "lower_bound" if r.at_least else "exact"
        return TypeValue(r.value, cert, witnesses={"curve": phi, "variety": V.name})
    if not (V.kind == "parametric" and q == 2) and not (V.kind == "implicit" and n - q + 1 == 2):
        raise UnsupportedConfiguration(
            f"q={q}, n={n} with a {V.kind} variety", "monomial-curve sampling on the intersection ideal (lower bound)"
        )
    per = []
    for W in _slice_forms(n, q - 1, cfg, coordinates=False):
        v, gamma = _section_tau(ideal, V, W, cfg)
        if v is not None:
            per.append((v, W, gamma))
    if not per:
        return TypeValue(1, "lower_bound", witnesses={"variety": V.name}, notes=["no section produced a branch"])
    mode, disagree = _modal([v for v, _, _ in per])
    v, W, gamma = next(t for t in per if t[0] == mode)
    notes = [f"modal value over {len(per)} random sections"]
    if disagree:
        notes.append("sections disagree: " + ", ".join(value_str(x) for x, _, _ in per))
    return TypeValue(mode, "sampled_generic", witnesses={"curve": gamma, "forms": W, "variety": V.name}, notes=notes)


def dq_ideal(
    ideal: IdealPresentation,
    q: int,
    varieties: Sequence[TestVariety] = (),
    cfg: RunConfig = DEFAULT_CONFIG,
    delta_q: Optional[TypeValue] = None,
) -> TypeValue:
    """D_q(I): largest tau over the supplied varieties, promoted when it meets the Delta_q upper bound."""
    n = ideal.n
    if not 1 <= q <= n:
        raise ValueError(f"q={q} out of range 1..{n}")
    if q == 1:
        d = delta_q if delta_q is not None else delta1_ideal(ideal, cfg)
        return TypeValue(d.value, d.certificate, d.lower, d.upper, dict(d.witnesses),
                         d.notes + ["for curves the two q-types coincide"])
    if q == n:
        return dn_ideal(ideal, cfg)
    if ideal.is_unit:
        return TypeValue(0, "exact", witnesses={"curve": _line(n)})
    vs = [V for V in varieties if V.q == q]
    if not vs:
        return TypeValue(1, "lower_bound", notes=["no test varieties of this dimension supplied"])
    taus = [(tau_ideal_variety(ideal, V, q, cfg), V) for V in vs]
    best, V = max(taus, key=lambda t: t[0].value)
    if delta_q is None:
        delta_q = delta_q_ideal(ideal, q, cfg)
    upper = delta_q.upper if delta_q.certificate in ("exact", "sampled_generic", "upper_bound") else None
    notes = [f"maximum over {len(vs)} test varieties"] + best.notes
    if best.value == INF:
        return TypeValue(INF, "exact", lower=INF, upper=INF, witnesses=best.witnesses,
                         notes=notes + ["every generator vanishes on a branch of the variety"])
    if upper is not None and best.value == upper:
        notes.append("matches the upper bound from Delta_q")
        return TypeValue(best.value, "exact", lower=best.value, upper=upper, witnesses=best.witnesses, notes=notes)
    return TypeValue(best.value, "lower_bound", lower=best.value, upper=upper, witnesses=best.witnesses, notes=notes)


def pin_delta(delta: TypeValue, d: TypeValue) -> TypeValue:
    """Use D_q <= Delta_q: a certified D_q meeting the upper bound on Delta_q fixes Delta_q."""
    if delta.is_exact or d.certificate not in ("exact", "lower_bound"):
        return delta
    if delta.upper is None or d.value != delta.upper or delta.value != delta.upper:
        return delta
    witnesses = dict(delta.witnesses)
    if "curve" not in witnesses and "curve" in d.witnesses:
        witnesses["curve"] = d.witnesses["curve"]
    notes = delta.notes + ["pinned between the D_q lower bound and the upper bound over sections"]
    return TypeValue(delta.value, "exact", lower=d.value, upper=delta.upper, witnesses=witnesses, notes=notes)


def ideal_q_types(
    ideal: IdealPresentation, q: int, varieties: Sequence[TestVariety] = (), cfg: RunConfig = DEFAULT_CONFIG
) -> Tuple[TypeValue, TypeValue]:
    """(Delta_q, D_q) of an ideal, each certified as far as the other allows."""
    delta = delta_q_ideal(ideal, q, cfg)
    d = dq_ideal(ideal, q, varieties, cfg, delta_q=delta)
    return pin_delta(delta, d), d


# hypersurfaces


def _check_hypersurface(r: RealPoly):
    degrees = [sum(a) + sum(b) for a, b in r.terms]
    if 0 in degrees:
        raise NotHypersurfaceError("germ does not vanish at 0")
    if 1 not in degrees:
        raise NotHypersurfaceError("not a hypersurface germ at 0: no degree-1 term")


def _real_ratio(r: RealPoly, gamma: CurveJet):
    pb = pullback(r, gamma)
    if pb.is_zero:
        return INF
    return Fraction(pb.order, gamma.mult)


def _monomial_curves(m: int, E: int):
    for pat in _patterns(m, E):
        nz = [j for j, e in enumerate(pat) if e]
        for units in itertools.product(_UNITS, repeat=len(nz) - 1):
            coeffs = [GaussianRational(0)] * m
            coeffs[nz[0]] = GaussianRational(1)
            for j, u in zip(nz[1:], units):
                coeffs[j] = u
            yield CurveJet.monomial([e if e else None for e in pat], coeffs)


def _direct_bound(r: RealPoly, h: Poly, psi: List[Poly], cfg: RunConfig):
    """Largest real order ratio over curves in the section parametrized by psi along which h vanishes."""
    m = psi[0].n
    hS = h.compose(psi)
    families: List[Tuple[List[Poly], List[CurveJet]]] = []
    if hS.is_zero():
        families.append((psi, list(_monomial_curves(m, cfg.E))))
    elif hS.degree() == 1:
        if m == 1:
            return None
        row = [hS.terms.get(tuple(1 if i == j else 0 for i in range(m)), GaussianRational(0)) for j in range(m)]
        basis = kernel_basis([row], m)
        kappa = [Poly.linear([basis[c][j] for c in range(len(basis))]) for j in range(m)]
        inner = [p.compose(kappa) for p in psi]
        families.append((inner, list(_monomial_curves(m - 1, cfg.E))))
    elif m == 2:
        T = cfg.jet_precision(r.degree())
        try:
            branches = newton_puiseux(hS, T=T, split=False, max_extension=cfg.max_extension)
        except PrecisionExhausted:
            branches = []
        families.append((psi, [b.jet for b in branches if b.jet.is_gaussian()]))
    else:
        return None
    best = None
    for images, curves in families:
        for beta in curves:
            gamma = beta.push_forward(images)
            v = _real_ratio(r, gamma)
            if best is None or v > best[0] or (v == best[0] and gamma.describe() < best[1].describe()):
                best = (v, gamma)
    return best


@dataclass
class _Prepared:
    r: RealPoly
    decomposition: HoloDecomposition
    scale: Fraction
    fg_ok: bool
    unitaries: List[Optional[UnitaryMatrix]]


def _prepare(r: RealPoly, cfg: RunConfig) -> _Prepared:
    _check_hypersurface(r)
    rk = truncate_jet(r, r.degree())
    d = polarize(rk)
    scale = Fraction(1)
    try:
        extract_fg(d)
        ok = True
    except NonSquareWeightError:
        hint = rescale_hint(d)
        ok = False
        if hint is not None:
            scale = Fraction(hint)
            rk = rescale(rk, hint)
            d = polarize(rk)
            try:
                extract_fg(d)
                ok = True
            except NonSquareWeightError:
                ok = False
    if not ok:
        Us = []
    elif not d.negative:
        Us = [None]
    else:
        Us = [sample_unitary(d.N, cfg.sampler, i) for i in range(cfg.sample_count)]
    return _Prepared(rk, d, scale, ok, Us)


def _ideal_of(prep: _Prepared, U) -> IdealPresentation:
    if prep.decomposition.N == 0:
        return IdealPresentation(prep.r.n, [prep.decomposition.h])
    return ideal_U(prep.decomposition, U)


def delta_q_hypersurface(r: RealPoly, q: int, cfg: RunConfig = DEFAULT_CONFIG) -> TypeValue:
    """Delta_q of the hypersurface {r = 0}, bracketed through the ideals I(U) and tightened by curves."""
    n = r.n
    if not 1 <= q <= n:
        raise ValueError(f"q={q} out of range 1..{n}")
    prep = _prepare(r, cfg)
    Ws = _slice_forms(n, q - 1, cfg, coordinates=False)
    rows = []
    for W in Ws:
        psi = W.plane_parametrization() if len(W) else _identity_images(n)
        bracket = None
        direct = _direct_bound(prep.r, prep.decomposition.h, psi, cfg)
        if prep.fg_ok and not (direct and direct[0] == INF):
            vals = [delta1_ideal(_ideal_of(prep, U).compose(psi), cfg) for U in prep.unitaries]
            top = max(vals, key=lambda v: v.value)
            lo = top.value if top.certificate != "upper_bound" else Fraction(0)
            complete = len(prep.unitaries) == 1 and all(v.certificate == "exact" for v in vals)
            bracket = (lo, 2 * lo if lo != INF else INF, complete)
        rows.append((W, psi, bracket, direct))

    def row_value(row):
        _, _, bracket, direct = row
        return vmax([bracket[0] if bracket else None, direct[0] if direct else None])

    notes = []
    if prep.scale != 1:
        notes.append(f"germ rescaled by {prep.scale} so the weights become rational squares")
    if not prep.fg_ok:
        notes.append("weights are not rational squares; only direct curve bounds are available")
    best = min(rows, key=lambda row: (row_value(row) is None, row_value(row) if row_value(row) is not None else 0))
    W, psi, bracket, direct = best
    value = row_value(best)
    if value is None:
        raise UnsupportedConfiguration("no bound available for this germ", "supply test curves")
    lower_b = vmin([row[2][0] for row in rows if row[2]]) if prep.fg_ok else None
    upper_b = vmin([row[2][1] for row in rows if row[2] and row[2][2]]) if prep.fg_ok else None
    witnesses = {"bracket": {"lower": value_json(lower_b), "upper": value_json(upper_b)}}
    if direct is not None:
        witnesses["curve"] = direct[1]
    if len(W):
        witnesses["forms"] = W
    if prep.fg_ok and prep.unitaries[0] is not None:
        witnesses["unitary"] = prep.unitaries[0]
    notes.append(
        "bracket from I(U): lower " + value_str(lower_b) + ", upper "
        + (value_str(upper_b) if upper_b is not None else "unknown (unitaries sampled)")
    )
    if direct is not None:
        notes.append(f"direct curve bound {value_str(direct[0])} along {direct[1].describe()}")
    if q == 1:
        if value == INF:
            return TypeValue(INF, "exact", lower=INF, upper=INF, witnesses=witnesses, notes=notes)
        if upper_b is not None and value == upper_b:
            return TypeValue(value, "exact", lower=value, upper=upper_b, witnesses=witnesses, notes=notes)
        return TypeValue(value, "lower_bound", lower=value, upper=upper_b, witnesses=witnesses, notes=notes)
    values = [row_value(row) for row in rows]
    if len(set(values)) > 1:
        notes.append("random sections disagree: " + ", ".join(value_str(v) for v in values))
    return TypeValue(value, "sampled_generic", upper=upper_b, witnesses=witnesses, notes=notes)


def hypersurface_q_types(
    r: RealPoly, q: int, varieties: Sequence[TestVariety] = (), cfg: RunConfig = DEFAULT_CONFIG
) -> Tuple[TypeValue, TypeValue]:
    """(Delta_q, D_q) of the hypersurface {r = 0}."""
    delta = delta_q_hypersurface(r, q, cfg)
    d = dq_hypersurface(r, q, varieties, cfg, delta_q=delta)
    return pin_delta(delta, d), d


def _section_real_tau(r: RealPoly, V: TestVariety, W: LinearFormSet, cfg: RunConfig):
    T = cfg.jet_precision(r.degree())
    best = (None, None)
    for gamma, _ in _section_curves(V, W, T, cfg):
        if not gamma.is_gaussian():
            continue
        pb = pullback(r, gamma)
        v = INF if pb.is_zero else Fraction(pb.order, gamma.mult)
        if best[0] is None or v > best[0]:
            best = (v, gamma)
    return best


def dq_hypersurface(
    r: RealPoly,
    q: int,
    varieties: Sequence[TestVariety] = (),
    cfg: RunConfig = DEFAULT_CONFIG,
    delta_q: Optional[TypeValue] = None,
) -> TypeValue:
    """D_q of the hypersurface {r = 0} from the supplied test varieties."""
    n = r.n
    if not 1 <= q < n:
        raise ValueError(f"q={q} out of range 1..{n - 1}")
    if q == 1:
        d = delta_q if delta_q is not None else delta_q_hypersurface(r, 1, cfg)
        return TypeValue(d.value, d.certificate, d.lower, d.upper, dict(d.witnesses),
                         d.notes + ["for curves the two q-types coincide"])
    _check_hypersurface(r)
    vs = [V for V in varieties if V.q == q]
    if not vs:
        return TypeValue(1, "lower_bound", notes=["no test varieties of this dimension supplied"])
    found = []
    for V in vs:
        if V.n != n:
            raise DimensionError("variety and germ live in different dimensions")
        per = []
        for W in _slice_forms(n, q - 1, cfg, coordinates=False):
            v, gamma = _section_real_tau(r, V, W, cfg)
            if v is not None:
                per.append((v, W, gamma))
        if per:
            mode, disagree = _modal([v for v, _, _ in per])
            _, W, gamma = next(t for t in per if t[0] == mode)
            found.append((mode, V, W, gamma, disagree))
    if not found:
        return TypeValue(1, "lower_bound", notes=["no section of the test varieties produced a usable branch"])
    value, V, W, gamma, disagree = max(found, key=lambda t: t[0])
    witnesses = {"curve": gamma, "forms": W, "variety": V.name}
    notes = [f"maximum over {len(vs)} test varieties of the modal section value"]
    if disagree:
        notes.append("sections disagree for the best variety")
    if delta_q is None:
        delta_q = delta_q_hypersurface(r, q, cfg)
    upper = delta_q.upper
    if value == INF:
        return TypeValue(INF, "exact", witnesses=witnesses, notes=notes)
    if upper is not None and value == upper:
        notes.append("matches the upper bound on Delta_q")
        return TypeValue(value, "exact", lower=value, upper=upper, witnesses=witnesses, notes=notes)
    return TypeValue(value, "lower_bound", lower=value, upper=upper, witnesses=witnesses, notes=notes)


def sup_U_generic_colength(r: RealPoly, q: int, cfg: RunConfig = DEFAULT_CONFIG):
    """Largest sampled generic colength of (I(U), W) over the sampled unitaries."""
    prep = _prepare(r, cfg)
    if not prep.fg_ok:
        return None
    return max(generic_colength(_ideal_of(prep, U), q, cfg.sampler, budget=cfg.budget).value for U in prep.unitaries)


# verification


@dataclass
class Case:
    name: str
    n: int
    kind: str  # "ideal" or "hypersurface"
    ideal: Optional[IdealPresentation] = None
    germ: Optional[RealPoly] = None
    qs: Tuple[int, ...] = ()
    varieties: Tuple[TestVariety, ...] = ()
    expected: Dict[str, Tuple[object, str]] = field(default_factory=dict)
    sharpness: Tuple[str, ...] = ()
    curves: Tuple[CurveJet, ...] = ()

    @classmethod
    def from_json(cls, obj: dict) -> "Case":
        from .parse import parse_poly, parse_real

        name = obj["name"]
        n = int(obj["n"])
        if ("generators" in obj) == ("germ" in obj):
            raise ValueError(f"case {name}: give exactly one of 'generators' and 'germ'")
        qs = tuple(sorted(int(q) for q in obj.get("q", [])))
        for q in qs:
            if not 1 <= q <= n:
                raise ValueError(f"case {name}: q={q} out of range")
        varieties = []
        for i, v in enumerate(obj.get("varieties", [])):
            vname = v.get("name", f"V{i + 1}")
            if v["kind"] == "parametric":
                q = int(v["q"])
                comps = [parse_poly(_params_to_z(s, q), q) for s in v["components"]]
                varieties.append(TestVariety.parametric(comps, vname))
            elif v["kind"] == "implicit":
                gens = [parse_poly(s, n) for s in v["generators"]]
                varieties.append(TestVariety.implicit(gens, int(v["q"]), vname))
            else:
                raise ValueError(f"case {name}: unknown variety kind {v['kind']!r}")
        expected = {}
        for key, entry in obj.get("expected", {}).items():
            prov = entry.get("provenance")
            if prov not in ("paper", "derived", "trivial"):
                raise ValueError(f"case {name}: expected {key} needs a provenance tag")
            expected[key] = (value_from_json(entry["value"]), prov)
        curves = tuple(CurveJet.parse(c) for c in obj.get("curves", []))
        common = dict(name=name, n=n, qs=qs, varieties=tuple(varieties), expected=expected,
                      sharpness=tuple(obj.get("sharpness", [])), curves=curves)
        if "generators" in obj:
            gens = [parse_poly(s, n) for s in obj["generators"]]
            return cls(kind="ideal", ideal=IdealPresentation(n, gens), **common)
        return cls(kind="hypersurface", germ=parse_real(obj["germ"], n), **common)


_PARAMS = ("s", "u", "v", "w")


def _params_to_z(text: str, q: int) -> str:
    """Parameters s, u, v, w become z1..z4 for the parser."""
    import re

    if q > len(_PARAMS):
        raise ValueError("at most four parameters are supported")
    return re.sub(r"\b([suvw])\b", lambda m: f"z{_PARAMS.index(m.group(1)) + 1}", text)


@dataclass
class Check:
    name: str
    status: str  # PASS, FAIL, INCONCLUSIVE, SKIPPED
    detail: str

    def to_json(self):
        return {"name": self.name, "status": self.status, "detail": self.detail}


def _interval(v):
    if v is None:
        return (Fraction(0), INF)
    if isinstance(v, TypeValue):
        return v.interval()
    v = as_value(v)
    return (v, v)


def _imul(a, b):
    def mul(x, y):
        if x == 0 or y == 0:
            return Fraction(0)
        if x == INF or y == INF:
            return INF
        return x * y

    return (mul(a[0], b[0]), mul(a[1], b[1]))


def _ipow(a, k):
    out = (Fraction(1), Fraction(1))
    for _ in range(k):
        out = _imul(out, a)
    return out


def _iscale(a, c):
    return _imul(a, (Fraction(c), Fraction(c)))


def _fmt(iv):
    lo, hi = iv
    return value_str(lo) if lo == hi else f"[{value_str(lo)}, {value_str(hi)}]"


def _compare_le(name, a, b, label_a, label_b) -> Check:
    detail = f"{label_a} = {_fmt(a)} <= {label_b} = {_fmt(b)}"
    if a[1] <= b[0]:
        return Check(name, "PASS", detail)
    if a[0] > b[1]:
        return Check(name, "FAIL", detail)
    return Check(name, "INCONCLUSIVE", detail + " (certificates too weak)")


def _product_expr(expr: str, values) -> Tuple[object, str]:
    iv = (Fraction(1), Fraction(1))
    for factor in expr.split("*"):
        factor = factor.strip()
        base, _, exp = factor.partition("^")
        k = int(exp) if exp else 1
        if base not in values or values[base] is None:
            return None, base
        iv = _imul(iv, _ipow(_interval(values[base]), k))
    return iv, ""


@dataclass
class CaseReport:
    name: str
    kind: str
    values: Dict[str, object]
    checks: List[Check]
    extras: Dict[str, object] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(c.status == "FAIL" for c in self.checks)

    def to_json(self):
        vals = {}
        for k, v in sorted(self.values.items()):
            if isinstance(v, TypeValue):
                vals[k] = v.to_json()
            else:
                vals[k] = value_json(v)
        return {
            "name": self.name,
            "kind": self.kind,
            "values": vals,
            "checks": [c.to_json() for c in self.checks],
            **{k: v for k, v in sorted(self.extras.items())},
        }


@dataclass
class VerifyReport:
    cases: List[CaseReport]

    @property
    def failed(self) -> bool:
        return any(c.failed for c in self.cases)

    def counts(self) -> Dict[str, int]:
        out = Counter(c.status for case in self.cases for c in case.checks)
        return {k: out.get(k, 0) for k in ("PASS", "FAIL", "INCONCLUSIVE", "SKIPPED")}

    def to_json(self):
        return {
            "cases": [c.to_json() for c in self.cases],
            "summary": self.counts(),
            "status": "FAIL" if self.failed else "PASS",
        }


def _safe(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs), None
    except (BudgetExceeded, UnsupportedConfiguration, PrecisionExhausted) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def _expected_checks(case: Case, values) -> List[Check]:
    out = []
    for key, (want, prov) in sorted(case.expected.items()):
        got = values.get(key)
        if got is None:
            out.append(Check(f"expected {key}", "INCONCLUSIVE", f"value not computed (expected {value_str(want)}, {prov})"))
            continue
        gv = got.value if isinstance(got, TypeValue) else as_value(got)
        cert = got.certificate if isinstance(got, TypeValue) else "exact"
        if gv == want:
            out.append(Check(f"expected {key}", "PASS", f"{value_str(gv)} ({cert}) matches {prov} value"))
        else:
            out.append(Check(f"expected {key}", "FAIL",
                             f"computed {value_str(gv)} ({cert}) but {prov} value is {value_str(want)}"))
    return out


def _sharpness_checks(case: Case, values) -> List[Check]:
    out = []
    for rel in case.sharpness:
        lhs, _, rhs = rel.partition("=")
        a, miss_a = _product_expr(lhs, values)
        b, miss_b = _product_expr(rhs, values)
        name = f"sharpness {rel.strip()}"
        if a is None or b is None:
            out.append(Check(name, "INCONCLUSIVE", f"missing value {miss_a or miss_b}"))
            continue
        detail = f"{lhs.strip()} = {_fmt(a)}, {rhs.strip()} = {_fmt(b)}"
        if a[0] == a[1] == b[0] == b[1]:
            out.append(Check(name, "PASS", detail))
        elif a[1] < b[0] or b[1] < a[0]:
            out.append(Check(name, "FAIL", detail))
        else:
            out.append(Check(name, "INCONCLUSIVE", detail))
    return out


def _verify_ideal(case: Case, cfg: RunConfig) -> CaseReport:
    I, n = case.ideal, case.n
    values: Dict[str, object] = {}
    errors = {}
    try:
        from .localalg import colength

        values["D"] = colength(I, budget=cfg.budget)
    except BudgetExceeded as exc:
        errors["D"] = str(exc)
    for q in case.qs:
        pair, err = _safe(ideal_q_types, I, q, case.varieties, cfg)
        values[f"Delta_{q}"], values[f"D_{q}"] = pair or (None, None)
        if err:
            errors[f"q={q}"] = err
        gc, err = _safe(generic_colength, I, q, cfg.sampler, budget=cfg.budget)
        values[f"Dgen_{q}"] = gc.value if gc else None
        if err:
            errors[f"Dgen_{q}"] = err
    checks: List[Check] = []
    for q in case.qs:
        Dq, Aq = values.get(f"D_{q}"), values.get(f"Delta_{q}")
        if Dq is None or Aq is None:
            checks.append(Check(f"ideal sandwich q={q}", "INCONCLUSIVE", "value missing"))
            continue
        a, d = _interval(Aq), _interval(Dq)
        checks.append(_compare_le(f"D_q <= Delta_q q={q}", d, a, f"D_{q}", f"Delta_{q}"))
        checks.append(_compare_le(f"Delta_q <= D_q^(n-q+1) q={q}", a, _ipow(d, n - q + 1), f"Delta_{q}", f"D_{q}^{n - q + 1}"))
    if 1 in case.qs and values.get("Delta_1") is not None and values.get("D") is not None:
        checks.append(_compare_le("Delta_1 <= D", _interval(values["Delta_1"]), _interval(values["D"]), "Delta_1", "D"))
    for q, k in itertools.combinations(case.qs, 2):
        for sym in ("D", "Delta"):
            a, b = values.get(f"{sym}_{k}"), values.get(f"{sym}_{q}")
            if a is not None and b is not None:
                checks.append(_compare_le(f"monotone {sym}_{k} <= {sym}_{q}", _interval(a), _interval(b),
                                          f"{sym}_{k}", f"{sym}_{q}"))
    for q in case.qs:
        needed = [f"D_{i}" for i in range(q, n + 1)]
        if all(values.get(k) is not None for k in needed) and values.get(f"Dgen_{q}") is not None:
            prod = (Fraction(1), Fraction(1))
            for k in needed:
                prod = _imul(prod, _interval(values[k]))
            checks.append(_compare_le(f"Catlin product q={q}", _interval(values[f"Dgen_{q}"]), prod,
                                      f"Dgen_{q}", "*".join(needed)))
    checks += _sharpness_checks(case, values)
    checks += _expected_checks(case, values)
    extras = {"errors": errors} if errors else {}
    return CaseReport(case.name, case.kind, values, checks, extras)


def _verify_hypersurface(case: Case, cfg: RunConfig) -> CaseReport:
    r, n = case.germ, case.n
    values: Dict[str, object] = {}
    errors = {}
    extras: Dict[str, object] = {}
    qpos = {}
    for q in case.qs:
        if q >= n:
            errors[f"q={q}"] = "hypersurface q-types are computed for q < n"
            continue
        pair, err = _safe(hypersurface_q_types, r, q, case.varieties, cfg)
        A, Dq = pair or (None, None)
        values[f"Delta_{q}"], values[f"D_{q}"] = A, Dq
        if err:
            errors[f"q={q}"] = err
        values[f"supU_Dgen_{q}"], err = _safe(sup_U_generic_colength, r, q, cfg)
        if err:
            errors[f"supU_Dgen_{q}"] = err
        curves, forms = [], []
        for tv in (A, Dq):
            if tv is not None and "curve" in tv.witnesses and tv.witnesses["curve"].is_gaussian():
                curves.append(tv.witnesses["curve"])
                forms.append(tv.witnesses.get("forms", empty_forms(n)))
        if q == 1:
            for c in case.curves:
                curves.append(c)
                forms.append(empty_forms(n))
        qpos[q] = check_q_positivity(r, q, curves, forms) if curves else None
    extras["q_positivity"] = {str(q): (rep.to_json() if rep else None) for q, rep in sorted(qpos.items())}
    checks: List[Check] = []
    for q in case.qs:
        A, Dq = values.get(f"Delta_{q}"), values.get(f"D_{q}")
        if A is None or Dq is None:
            checks.append(Check(f"hypersurface bounds q={q}", "INCONCLUSIVE", "value missing"))
            continue
        a, d = _interval(A), _interval(Dq)
        checks.append(_compare_le(f"hypersurface D_q <= Delta_q q={q}", d, a, f"D_{q}", f"Delta_{q}"))
        rep = qpos.get(q)
        bound = _iscale(_ipow(_iscale(d, Fraction(1, 2)), n - q), 2)
        name = f"hypersurface Delta_q <= 2(D_q/2)^(n-q) q={q}"
        if rep is not None and rep.violation is not None:
            checks.append(Check(name, "SKIPPED", f"q-positivity refuted along {rep.violation.curve.describe()}"))
        else:
            c = _compare_le(name, a, bound, f"Delta_{q}", f"2(D_{q}/2)^{n - q}")
            c.detail += "; conditional on q-positivity (no violation found among tested curves)"
            checks.append(c)
        s = values.get(f"supU_Dgen_{q}")
        if s is not None:
            checks.append(_compare_le(f"Delta_q/2 <= sup_U Dgen_q q={q}", _iscale(a, Fraction(1, 2)), _interval(s),
                                      f"Delta_{q}/2", f"sup_U Dgen_{q}(I(U))"))
    for q, k in itertools.combinations([q for q in case.qs if q < n], 2):
        a, b = values.get(f"Delta_{k}"), values.get(f"Delta_{q}")
        if a is not None and b is not None:
            checks.append(_compare_le(f"monotone Delta_{k} <= Delta_{q}", _interval(a), _interval(b),
                                      f"Delta_{k}", f"Delta_{q}"))
    checks += _sharpness_checks(case, values)
    checks += _expected_checks(case, values)
    if errors:
        extras["errors"] = errors
    return CaseReport(case.name, case.kind, values, checks, extras)


def verify_theorems(cases: Sequence[Case], cfg: RunConfig = DEFAULT_CONFIG) -> VerifyReport:
    """Evaluate every inequality that applies to each case; cases are reported sorted by name."""
    reports = []
    for case in sorted(cases, key=lambda c: c.name):
        if case.kind == "ideal":
            reports.append(_verify_ideal(case, cfg))
        else:
            reports.append(_verify_hypersurface(case, cfg))
    return VerifyReport(reports)
