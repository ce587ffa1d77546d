"""Curve germs, pullbacks and normalized vanishing orders.

A curve germ is a tuple of power series in one parameter ``t`` without
constant terms.  Series are sparse dicts ``{exponent: coefficient}`` over a
:class:`NumberField`; a jet with ``precision=None`` is an exact polynomial
curve, otherwise every exponent ``>= precision`` is unknown.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import _kernels
from .gaussian import GaussianRational, I as IMAG, format_gaussian
from .localalg import IdealPresentation
from .numberfield import QI, Embedding, FieldElement, NumberField, roots
from .poly import INF, DimensionError, Poly, RealPoly
from .typevalue import TypeValue

Series = Dict[int, object]


# --- sparse series ---------------------------------------------------------

def s_add(a: Series, b: Series) -> Series:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e)
        v = c if v is None else v + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def s_scale(a: Series, c) -> Series:
    if not c:
        return {}
    return {e: v * c for e, v in a.items()}


def s_mul(a: Series, b: Series, prec: Optional[int]) -> Series:
    out: Series = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            if prec is not None and e >= prec:
                continue
            v = out.get(e)
            out[e] = c1 * c2 if v is None else v + c1 * c2
    return {e: c for e, c in out.items() if c}


def s_order(a: Series):
    return min(a) if a else INF


def s_substitute_power(a: Series, k: int) -> Series:
    """t -> t^k."""
    return {e * k: c for e, c in a.items()}


def _coerce_into(field: NumberField, c):
    if isinstance(c, FieldElement):
        if c.field != field:
            raise ValueError("coefficient lives in a different field")
        return c
    return field.gaussian(GaussianRational.coerce(c))


_T_RE = re.compile(r"(?<![A-Za-z0-9_])t(?![A-Za-z0-9_])")


def _format_component(series: Series) -> str:
    if not series:
        return "0"
    gauss = {}
    for e, c in series.items():
        g = c.as_gaussian() if isinstance(c, FieldElement) else GaussianRational.coerce(c)
        if g is None:
            gauss = None
            break
        gauss[(e,)] = g
    if gauss is not None:
        return str(Poly(1, gauss)).replace("z1", "t")
    parts = []
    for e in sorted(series):
        parts.append(f"{series[e]!r}*t^{e}")
    return " + ".join(parts)


class CurveJet:
    """A curve germ t -> (phi_1(t), ..., phi_n(t)) with phi(0) = 0."""

    __slots__ = ("n", "components", "field", "precision", "_mult")

    def __init__(self, components: Sequence[Dict[int, object]], field: NumberField = QI, precision: Optional[int] = None):
        comps = []
        for comp in components:
            clean = {}
            for e, c in comp.items():
                e = int(e)
                if e < 0:
                    raise ValueError("negative exponent in curve jet")
                if precision is not None and e >= precision:
                    continue
                c = _coerce_into(field, c)
                if c:
                    if e == 0:
                        raise ValueError("curve germ must pass through the origin")
                    clean[e] = c
            comps.append(clean)
        self.n = len(comps)
        self.components = tuple(comps)
        self.field = field
        self.precision = precision
        orders = [min(c) for c in comps if c]
        if not orders:
            raise ValueError("zero jet is not a curve germ")
        self._mult = min(orders)

    # constructors
    @classmethod
    def monomial(cls, exponents: Sequence[Optional[int]], coeffs: Optional[Sequence] = None, field: NumberField = QI):
        """Curve (c_1 t^e_1, ..., c_n t^e_n); ``None`` exponents give zero components."""
        if coeffs is None:
            coeffs = [1] * len(exponents)
        comps = [{} if e is None else {e: c} for e, c in zip(exponents, coeffs)]
        return cls(comps, field)

    @classmethod
    def from_polys(cls, polys: Sequence[Poly]) -> "CurveJet":
        comps = []
        for p in polys:
            if p.n != 1:
                raise DimensionError("curve components must be univariate")
            comps.append({m[0]: c for m, c in p.terms.items()})
        return cls(comps)

    @classmethod
    def parse(cls, texts: Sequence[str]) -> "CurveJet":
        """Components written in the polynomial language with parameter ``t``."""
        from .parse import parse_poly

        return cls.from_polys([parse_poly(_T_RE.sub("z1", s), 1) for s in texts])

    # queries
    @property
    def mult(self) -> int:
        return self._mult

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    def is_gaussian(self) -> bool:
        return all(c.as_gaussian() is not None for comp in self.components for c in comp.values())

    def gaussian_components(self) -> List[Dict[int, GaussianRational]]:
        out = []
        for comp in self.components:
            d = {}
            for e, c in comp.items():
                g = c.as_gaussian()
                if g is None:
                    raise ValueError("curve coefficients are not Gaussian rationals")
                d[e] = g
            out.append(d)
        return out

    def degree(self) -> int:
        return max((max(c) for c in self.components if c), default=0)

    # transformations
    def reparametrize(self, k: int) -> "CurveJet":
        """phi(t^k)."""
        if k < 1:
            raise ValueError("k must be positive")
        prec = None if self.precision is None else self.precision * k
        return CurveJet([s_substitute_power(c, k) for c in self.components], self.field, prec)

    def map_field(self, emb: Embedding) -> "CurveJet":
        comps = [{e: emb(c) for e, c in comp.items()} for comp in self.components]
        return CurveJet(comps, emb.dst, self.precision)

    def push_forward(self, images: Sequence[Poly]) -> "CurveJet":
        """The curve psi(phi(t)) for a polynomial map psi given by ``images`` in n variables."""
        comps = [pullback(p, self).series for p in images]
        return CurveJet(comps, self.field, self.precision)

    # output
    def describe(self) -> str:
        body = ", ".join(_format_component(c) for c in self.components)
        return f"({body})"

    def to_json(self):
        out = {"components": [_format_component(c) for c in self.components]}
        if self.precision is not None:
            out["precision"] = self.precision
        if self.field != QI:
            out["field"] = [f"{name}: {poly}" for name, poly in self.field.tower]
        return out

    def __repr__(self):
        p = "" if self.precision is None else f" + O(t^{self.precision})"
        return f"CurveJet{self.describe()}{p}"

    def __eq__(self, other):
        return (
            isinstance(other, CurveJet)
            and self.field == other.field
            and self.precision == other.precision
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.describe(), self.precision))


# --- pullbacks -------------------------------------------------------------

@dataclass
class Pullback:
    """phi*g as a series; ``real`` pullbacks are keyed by (a, b) for t^a tbar^b."""

    series: dict
    precision: Optional[int]
    real: bool = False

    @property
    def order(self):
        """Exact order when known, the precision when only a lower bound is known, INF for true zero."""
        if not self.series:
            return INF if self.precision is None else self.precision
        if self.real:
            return min(a + b for a, b in self.series)
        return min(self.series)

    @property
    def at_least(self) -> bool:
        """True when the order is only known to be >= precision."""
        return not self.series and self.precision is not None

    @property
    def is_zero(self) -> bool:
        return not self.series and self.precision is None

    def coefficient(self, key):
        return self.series.get(key)


def pullback(g, phi: CurveJet) -> Pullback:
    """phi*g for a Poly or RealPoly g."""
    if g.n != phi.n:
        raise DimensionError(f"germ in {g.n} variables, curve in {phi.n}")
    if isinstance(g, RealPoly):
        return _real_pullback(g, phi)
    prec = phi.precision
    field = phi.field
    comps = phi.components
    cache: Dict[tuple, Series] = {}

    def power(j, e):
        key = (j, e)
        if key not in cache:
            cache[key] = comps[j] if e == 1 else s_mul(power(j, e - 1), comps[j], prec)
        return cache[key]

    total: Series = {}
    for mono, c in g.terms.items():
        term: Series = {0: field.gaussian(c)}
        for j, e in enumerate(mono):
            if e:
                term = s_mul(term, power(j, e), prec)
                if not term:
                    break
        if term:
            total = s_add(total, term)
    return Pullback(total, prec)


def _real_pullback(g: RealPoly, phi: CurveJet) -> Pullback:
    prec = phi.precision
    comps = phi.gaussian_components()
    conj = [{e: c.conjugate() for e, c in comp.items()} for comp in comps]
    cache = {}

    def power(src, j, e):
        key = (id(src), j, e)
        if key not in cache:
            cache[key] = src[j] if e == 1 else s_mul(power(src, j, e - 1), src[j], prec)
        return cache[key]

    def holo(src, mono):
        term: Series = {0: GaussianRational(1)}
        for j, e in enumerate(mono):
            if e:
                term = s_mul(term, power(src, j, e), prec)
        return term

    total: dict = {}
    for (a, b), c in g.terms.items():
        left = holo(comps, a)
        right = holo(conj, b)
        for e1, c1 in left.items():
            for e2, c2 in right.items():
                if prec is not None and e1 + e2 >= prec:
                    continue
                key = (e1, e2)
                v = total.get(key)
                v = c * c1 * c2 if v is None else v + c * c1 * c2
                if v:
                    total[key] = v
                else:
                    total.pop(key, None)
    return Pullback(total, prec, real=True)


@dataclass(frozen=True)
class OrderRatio:
    """ord(phi*g) / mult(phi); ``at_least`` marks a numerator known only as a lower bound."""

    numerator: object
    denominator: int
    at_least: bool = False

    @property
    def value(self):
        if self.numerator == INF:
            return INF
        return Fraction(self.numerator, self.denominator)

    def __str__(self):
        v = self.value
        s = "inf" if v == INF else str(v)
        return (">=" + s) if self.at_least else s


def order_ratio(g, phi: CurveJet) -> OrderRatio:
    pb = pullback(g, phi)
    return OrderRatio(pb.order, phi.mult, pb.at_least)


def min_ratio(ratios: Sequence[OrderRatio]) -> OrderRatio:
    """Minimum of ratios where some values may be lower bounds only."""
    exact = [r for r in ratios if not r.at_least]
    bounds = [r for r in ratios if r.at_least]
    best_exact = min(exact, key=lambda r: r.value) if exact else None
    best_bound = min(bounds, key=lambda r: r.value) if bounds else None
    if best_bound is None:
        return best_exact
    if best_exact is not None and best_exact.value <= best_bound.value:
        return best_exact
    return best_bound


def tau_curve_ideal(ideal: IdealPresentation, phi: CurveJet) -> OrderRatio:
    """min over generators of ord(phi*g)/mult(phi), which equals the infimum over the ideal."""
    gens = ideal.nonzero()
    if not gens:
        return OrderRatio(INF, phi.mult)
    return min_ratio([order_ratio(g, phi) for g in gens])


# --- curve search ----------------------------------------------------------

_UNITS = (GaussianRational(1), GaussianRational(-1), IMAG, -IMAG)


def _patterns(n: int, E: int):
    """Exponent vectors in {0 (zero component), 1..E}^n with coprime nonzero entries."""
    for pat in itertools.product(range(E + 1), repeat=n):
        nz = [e for e in pat if e]
        if not nz or math.gcd(*nz) != 1:
            continue
        yield pat


def _gen_tables(gens: Sequence[Poly]):
    tables = []
    for g in gens:
        monos = list(g.terms)
        exps = np.array(monos, dtype=np.int64).reshape(len(monos), g.n)
        tables.append((exps, [g.terms[m] for m in monos], monos))
    return tables


def _monomial_curve_order(table, orders, coeffs):
    """Exact order of g(c_1 t^e_1, ..., c_n t^e_n) given per-term weighted degrees."""
    _, cs, monos = table
    live = [k for k in range(len(cs)) if orders[k] >= 0]
    for d in sorted({int(orders[k]) for k in live}):
        total = GaussianRational(0)
        for k in live:
            if orders[k] != d:
                continue
            v = cs[k]
            for j, e in enumerate(monos[k]):
                if e:
                    v = v * coeffs[j] ** e
            total = total + v
        if total:
            return d
    return INF


@dataclass
class _Best:
    value: object = None
    curve: Optional[CurveJet] = None
    key: str = ""

    def offer(self, value, curve: CurveJet):
        if self.value is not None and value < self.value:
            return
        key = curve.describe()
        if self.value is None or value > self.value or key < self.key:
            self.value, self.curve, self.key = value, curve, key


def _face_polynomial(g: Poly, pattern, j_free):
    """Initial form of g along the weights ``pattern`` as a polynomial in the free coefficient.

    Other nonzero components carry coefficient 1; zero components kill terms.
    Returns the coefficient list (ascending powers) or None when the face is a
    single power of the free coefficient.
    """
    best = None
    face = {}
    for mono, c in g.terms.items():
        if any(e and not w for e, w in zip(mono, pattern)):
            continue
        d = sum(e * w for e, w in zip(mono, pattern))
        if best is None or d < best:
            best, face = d, {}
        if d == best:
            k = mono[j_free]
            face[k] = face.get(k, GaussianRational(0)) + c
    face = {k: c for k, c in face.items() if c}
    if len(face) < 2:
        return None
    deg = max(face)
    return [face.get(k, GaussianRational(0)) for k in range(deg + 1)]


def curve_search_lower_bound(
    ideal: IdealPresentation,
    E: int = 4,
    D: int = 3,
    stop_at=None,
    max_extension: int = 24,
) -> TypeValue:
    """Lower bound for sup over curves of min over generators of the order ratio.

    The family is every monomial curve with exponents at most ``E`` and
    coefficients among 1, -1, i, -i (first nonzero coefficient 1), followed by
    binomial-type curves whose last nonzero coefficient solves a face equation
    of degree at most ``D`` of some generator.  The family grows with E and D,
    so the bound is monotone in both.  ``stop_at`` ends the search once that
    value is reached.
    """
    if E < 1 or D < 1:
        raise ValueError("E and D must be positive")
    n = ideal.n
    gens = ideal.nonzero()
    best = _Best()
    if not gens:
        phi = CurveJet.monomial([1] + [None] * (n - 1))
        return TypeValue(INF, "exact", witnesses={"curve": phi})
    if ideal.is_unit:
        phi = CurveJet.monomial([1] + [None] * (n - 1))
        return TypeValue(0, "exact", witnesses={"curve": phi})

    def done():
        return best.value == INF or (stop_at is not None and best.value is not None and best.value >= stop_at)

    tables = _gen_tables(gens)
    patterns = list(_patterns(n, E))
    weights = np.array([[e if e else -1 for e in pat] for pat in patterns], dtype=np.int64)
    all_orders = [_kernels.weighted_orders(table[0], weights) for table in tables]
    for row, pat in enumerate(patterns):
        nz = [j for j, e in enumerate(pat) if e]
        mult = min(pat[j] for j in nz)
        for units in itertools.product(_UNITS, repeat=len(nz) - 1):
            coeffs = [GaussianRational(0)] * n
            coeffs[nz[0]] = GaussianRational(1)
            for j, u in zip(nz[1:], units):
                coeffs[j] = u
            val = None
            for table, orders in zip(tables, all_orders):
                o = _monomial_curve_order(table, orders[row], coeffs)
                r = INF if o == INF else Fraction(o, mult)
                val = r if val is None or r < val else val
            curve = CurveJet.monomial([e if e else None for e in pat], coeffs)
            best.offer(val, curve)
            if done():
                return _search_result(best, E, D)

    root_cache = {}
    for pat in patterns:
        nz = [j for j, e in enumerate(pat) if e]
        if len(nz) < 2:
            continue
        j_free = nz[-1]
        for g in gens:
            face = _face_polynomial(g, pat, j_free)
            if face is None or len(face) - 1 > D:
                continue
            key = tuple(face)
            if key not in root_cache:
                fe = [QI.gaussian(c) for c in face]
                try:
                    root_cache[key] = [
                        (r, L) for r, L, _, _, _ in roots(fe, QI, split=False, max_extension=max_extension) if r
                    ]
                except Exception:  # extension cap: the family just shrinks
                    root_cache[key] = []
            for r, L in root_cache[key]:
                comps = [{} for _ in range(n)]
                for j in nz:
                    comps[j] = {pat[j]: L.one() if j != j_free else r}
                curve = CurveJet(comps, L)
                best.offer(tau_curve_ideal(ideal, curve).value, curve)
                if done():
                    return _search_result(best, E, D)
    return _search_result(best, E, D)


def _search_result(best: _Best, E: int, D: int) -> TypeValue:
    notes = [f"curve family: exponents <= {E}, face equations of degree <= {D}"]
    if best.value == INF:
        notes.append("all generators vanish identically on the witness curve")
        return TypeValue(INF, "exact", lower=INF, upper=INF, witnesses={"curve": best.curve}, notes=notes)
    return TypeValue(best.value, "lower_bound", lower=best.value, witnesses={"curve": best.curve}, notes=notes)
