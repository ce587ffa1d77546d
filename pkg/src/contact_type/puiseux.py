"""Newton-Puiseux branches of plane curve germs.

Branches are produced as integer-parametrized jets ``(t^e, y(t))`` by the
classical Newton polygon recursion.  Every edge of slope p/q contributes the
roots of its edge polynomial; one q-th root of each suffices because the
other choices reparametrize the same branch.  Coefficient fields grow by one
simple extension per new root.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Tuple

import sympy

from .curves import CurveJet, pullback, s_add, s_mul
from .gaussian import GaussianRational
from .numberfield import QI, Embedding, NumberField, one_root, roots
from .poly import DimensionError, Poly

BiPoly = Dict[Tuple[int, int], object]


class PrecisionExhausted(RuntimeError):
    """The requested precision is too small to represent a branch."""


@dataclass
class PuiseuxBranch:
    """A branch (t^e, y(t)); ``conjugates`` counts the Galois-conjugate branches it stands for."""

    e: int
    jet: CurveJet
    conjugates: int = 1

    @property
    def field(self) -> NumberField:
        return self.jet.field

    def to_json(self):
        return {"ramification": self.e, "conjugates": self.conjugates, "jet": self.jet.to_json()}


_X, _Y = sympy.symbols("x y")


def _to_sympy(f: Poly):
    expr = sum(
        (sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator))
        * _X ** m[0]
        * _Y ** m[1]
        for m, c in f.terms.items()
    )
    return sympy.Poly(expr, _X, _Y, domain="QQ_I")


def _from_sympy(sp) -> Poly:
    out = {}
    for m, c in sympy.Poly(sp.as_expr(), _X, _Y).terms():
        re, im = sympy.re(c), sympy.im(c)
        out[m] = GaussianRational(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
    return Poly(2, out)


def squarefree_part(f: Poly) -> Poly:
    """Squarefree part of a bivariate polynomial over Q(i)."""
    return _from_sympy(_to_sympy(f).sqf_part())


def plane_gcd(polys) -> Poly:
    """Greatest common divisor of nonzero bivariate polynomials over Q(i)."""
    polys = [p for p in polys if p]
    if not polys:
        raise ValueError("gcd of no nonzero polynomials")
    for p in polys:
        if p.n != 2:
            raise DimensionError("plane_gcd needs polynomials in two variables")
    g = _to_sympy(polys[0])
    for p in polys[1:]:
        if g.total_degree() == 0:
            break
        g = g.gcd(_to_sympy(p))
    return _from_sympy(g)


def _bi_map(G: BiPoly, emb: Embedding) -> BiPoly:
    return {k: emb(c) for k, c in G.items()}


def _lower_hull(G: BiPoly, r: int) -> List[Tuple[int, int]]:
    """Vertices of the Newton polygon from (0, r) down to the b = 0 axis."""
    lowest: Dict[int, int] = {}
    for a, b in G:
        if b <= r and (b not in lowest or a < lowest[b]):
            lowest[b] = a
    verts = [(0, r)]
    while verts[-1][1] > 0:
        va, vb = verts[-1]
        best = None
        for b, a in lowest.items():
            if b >= vb:
                continue
            slope = Fraction(a - va, vb - b)
            if best is None or slope < best[0] or (slope == best[0] and b < best[1][1]):
                best = (slope, (a, b))
        verts.append(best[1])
    return verts


def _substitute(G: BiPoly, q: int, p: int, c, shift: int, field) -> BiPoly:
    """G(s^q, s^p (c + Y)) / s^shift."""
    out: BiPoly = {}
    cpow = [field.one()]
    maxb = max(b for _, b in G)
    for _ in range(maxb):
        cpow.append(cpow[-1] * c)
    for (a, b), coef in G.items():
        base = q * a + p * b - shift
        for k in range(b + 1):
            v = coef * cpow[b - k] * comb(b, k)
            key = (base, k)
            w = out.get(key)
            out[key] = v if w is None else w + v
    return {k: v for k, v in out.items() if v}


def _eval_series(G: BiPoly, Y: dict, prec: Optional[int], field) -> dict:
    """G(s, Y(s)) mod s^prec."""
    by_b: Dict[int, dict] = {}
    for (a, b), c in G.items():
        if prec is None or a < prec:
            by_b.setdefault(b, {})[a] = c
    result: dict = {}
    for b in range(max(by_b, default=0), -1, -1):
        result = s_mul(result, Y, prec)
        if b in by_b:
            result = s_add(result, by_b[b])
    return result


class _Expander:
    def __init__(self, T: int, split: bool, max_extension: int):
        self.T = T
        self.split = split
        self.max_extension = max_extension
        self.out: List[PuiseuxBranch] = []

    def emit(self, Q, prefix, P, Y, field, exact, conj):
        y = dict(prefix)
        for e, c in Y.items():
            y = s_add(y, {e + P: c})
        prec = None if exact else self.T
        if prec is not None and min([Q] + list(y)) >= prec:
            raise PrecisionExhausted(f"precision {prec} too small for a branch of multiplicity >= {prec}")
        jet = CurveJet([{Q: field.one()}, y], field, prec)
        self.out.append(PuiseuxBranch(Q, jet, conj))

    def expand(self, G: BiPoly, field, Q: int, prefix: dict, P: int, r: int, conj: int):
        if r == 0:
            return
        if not any(b == 0 for _, b in G):
            self.emit(Q, prefix, P, {}, field, exact=True, conj=conj)
            G = {(a, b - 1): c for (a, b), c in G.items()}
            r -= 1
            if r == 0:
                return
        if r == 1:
            self.smooth(G, field, Q, prefix, P, conj)
            return
        verts = _lower_hull(G, r)
        for (a1, b1), (a2, b2) in zip(verts, verts[1:]):
            mu = Fraction(a2 - a1, b1 - b2)
            p, q = mu.numerator, mu.denominator
            kappa = q * a2 + p * b2
            deg = (b1 - b2) // q
            edge = [field.zero() for _ in range(deg + 1)]
            for (a, b), c in G.items():
                if b2 <= b <= b1 and q * a + p * b == kappa:
                    edge[(b - b2) // q] = c
            choices = roots(edge, field, split=self.split, max_extension=self.max_extension)
            for zeta, L, emb, mult, nconj in choices:
                if q == 1:
                    c, L2, emb2 = zeta, L, Embedding.identity(L)
                else:
                    zq = [-zeta] + [L.zero()] * (q - 1) + [L.one()]
                    c, L2, emb2 = one_root(zq, L, self.max_extension)
                full = emb.then(emb2)
                G2 = _substitute(_bi_map(G, full), q, p, c, kappa, L2)
                prefix2 = {e * q: full(v) for e, v in prefix.items()}
                prefix2[q * P + p] = c
                self.expand(G2, L2, Q * q, prefix2, q * P + p, mult, conj * nconj)

    def smooth(self, G: BiPoly, field, Q, prefix, P, conj):
        """Unique solution Y(s) with Y(0) = 0 when dG/dY(0, 0) != 0."""
        N = self.T - P
        Y: dict = {}
        if N > 0:
            lin = G[(0, 1)]
            inv = lin.inverse()
            for _ in range(N + 1):
                R = _eval_series(G, Y, N, field)
                if not R:
                    break
                Y = s_add(Y, {e: -c * inv for e, c in R.items()})
            else:
                raise RuntimeError("series iteration failed to converge")
        exact = not _eval_series(G, Y, None, field) if len(Y) <= 2 else False
        self.emit(Q, prefix, P, Y, field, exact, conj)


def newton_puiseux(f: Poly, T: int = 24, split: bool = True, max_extension: int = 24) -> List[PuiseuxBranch]:
    """Branches of the plane curve germ f = 0 at the origin.

    Each branch jet satisfies ord f(branch) >= T (or is an exact polynomial
    parametrization).  With ``split=False`` Galois-conjugate branches are
    represented once, with their count in ``conjugates``.
    """
    if f.n != 2:
        raise DimensionError("newton_puiseux needs a polynomial in two variables")
    if f.is_zero():
        raise ValueError("zero polynomial has no branch decomposition")
    if f.constant_term():
        raise ValueError("curve does not pass through the origin")
    if T < 1:
        raise ValueError("precision must be positive")
    f = squarefree_part(f)
    G: BiPoly = {m: QI.gaussian(c) for m, c in f.terms.items()}
    ex = _Expander(T, split, max_extension)
    if all(a >= 1 for a, _ in G):
        ex.out.append(PuiseuxBranch(1, CurveJet([{}, {1: QI.one()}], QI), 1))
        G = {(a - 1, b): c for (a, b), c in G.items()}
    r = min((b for a, b in G if a == 0), default=0)
    if (0, 0) in G:
        r = 0
    ex.expand(G, QI, 1, {}, 0, r, 1)
    return ex.out


def residual_order(f: Poly, branch: PuiseuxBranch):
    """Order of f along the branch (the precision when it vanishes to that precision)."""
    return pullback(f, branch.jet).order


def branch_count(f: Poly) -> int:
    """Expected sum of ramification indices: ord_y f(0, y) plus one for a factor x."""
    f = squarefree_part(f)
    xfactor = all(m[0] >= 1 for m in f.terms)
    if xfactor:
        f = Poly(2, {(m[0] - 1, m[1]): c for m, c in f.terms.items()})
    r = min((m[1] for m in f.terms if m[0] == 0), default=0)
    return r + (1 if xfactor else 0)


def _gaussian(c) -> Optional[GaussianRational]:
    re, im = sympy.re(c), sympy.im(c)
    if not (re.is_Rational and im.is_Rational):
        return None
    return GaussianRational(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))


def rational_directions(polys, limit: int = 8) -> List[list]:
    """Nonzero v over Q(i) with every homogeneous part of every polynomial vanishing at v.

    These are the lines through the origin on which all the polynomials vanish
    identically.  Positive-dimensional solution families are sampled at small
    integer parameter values.  The search is best effort: directions with
    irrational coordinates are not returned.
    """
    polys = [p for p in polys if p]
    if not polys:
        return []
    n = polys[0].n
    zs = sympy.symbols(f"x1:{n + 1}")
    parts = set()
    for p in polys:
        for d in range(p.ord0(), p.degree() + 1):
            h = p.homogeneous_part(d)
            if h:
                parts.add(sum(
                    (sympy.Rational(c.re.numerator, c.re.denominator)
                     + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator))
                    * sympy.Mul(*(z ** e for z, e in zip(zs, m)))
                    for m, c in h.terms.items()))
    found = []
    for j in range(n):
        free = [z for k, z in enumerate(zs) if k != j]
        eqs = [sympy.expand(e.subs(zs[j], 1)) for e in parts]
        try:
            sols = sympy.solve(eqs, free, dict=True)
        except (NotImplementedError, sympy.PolynomialError):
            continue
        for sol in sols:
            v = [sympy.Integer(1) if k == j else sol.get(z, z) for k, z in enumerate(zs)]
            params = sorted(set().union(*(sympy.sympify(x).free_symbols for x in v)), key=str)
            v = [sympy.sympify(x).subs({s: k + 2 for k, s in enumerate(params)}) for x in v]
            g = [_gaussian(sympy.expand(x)) for x in v]
            if all(x is not None for x in g):
                found.append(g)
                if len(found) >= limit:
                    return found
    return found
