"""Finite extensions of Q(i) for Newton-Puiseux coefficients.

A field is stored as Q(theta) with theta's monic irreducible minimal
polynomial over Q; ``i`` is a fixed element of it.  Each field also keeps the
tower of adjunctions that produced it (generator name, minimal polynomial
over the previous field) for reporting.  Factorization over a field uses
Trager's norm method, with sympy supplying resultants and factorization over Q.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

import sympy

from .gaussian import GaussianRational


class ExtensionDegreeExceeded(RuntimeError):
    pass


# dense rational polynomials (low degree first)


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _qmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _qdivmod(a, b):
    a = list(a)
    _trim(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] / lead
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] -= c * y
        _trim(a)
    return q, a


def _qinverse_mod(a, m):
    """Inverse of a modulo m in Q[x] by the extended Euclidean algorithm."""
    r0, r1 = list(m), list(a)
    s0, s1 = [], [Fraction(1)]
    _trim(r1)
    while r1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, r
        s = _qmul(q, s1)
        s_new = [Fraction(0)] * max(len(s0), len(s))
        for i, x in enumerate(s0):
            s_new[i] += x
        for i, x in enumerate(s):
            s_new[i] -= x
        s0, s1 = s1, _trim(s_new)
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible (modulus not irreducible?)")
    c = r0[0]
    return [x / c for x in s0]


class NumberField:
    def __init__(self, modulus: Sequence, i_coeffs: Sequence, tower: Tuple = ()):
        mod = [Fraction(x) for x in modulus]
        if mod[-1] != 1:
            raise ValueError("modulus must be monic")
        self.modulus = tuple(mod)
        self.degree = len(mod) - 1
        self.tower = tuple(tower)
        self.i = self.elem(i_coeffs)
        self._key = (self.modulus, self.i.c)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    @property
    def extension_degree(self) -> int:
        """Degree over Q(i)."""
        return self.degree // 2

    def elem(self, coeffs) -> "FieldElement":
        c = [Fraction(x) for x in coeffs]
        if len(c) > self.degree:
            _, c = _qdivmod(c, list(self.modulus))
        c = c + [Fraction(0)] * (self.degree - len(c))
        return FieldElement(self, tuple(c))

    def zero(self):
        return FieldElement(self, (Fraction(0),) * self.degree)

    def one(self):
        return self.elem([1])

    def rational(self, q) -> "FieldElement":
        return self.elem([q])

    def gaussian(self, g: GaussianRational) -> "FieldElement":
        g = GaussianRational.coerce(g)
        if not g.im:
            return self.rational(g.re)
        return self.rational(g.re) + self.i * self.rational(g.im)

    def __repr__(self):
        return f"NumberField(degree={self.degree}, tower={list(self.tower)})"


class FieldElement:
    __slots__ = ("field", "c")

    def __init__(self, field: NumberField, c: tuple):
        self.field = field
        self.c = c

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, GaussianRational):
            return self.field.gaussian(other)
        return self.field.rational(other)

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.c, other.c)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.c))

    def __mul__(self, other):
        other = self._coerce(other)
        d = self.field.degree
        if d == 1:
            return FieldElement(self.field, (self.c[0] * other.c[0],))
        prod = _qmul(self.c, other.c)
        if len(prod) > d:
            mod = self.field.modulus
            for k in range(len(prod) - 1, d - 1, -1):
                c = prod[k]
                if c:
                    for j in range(d):
                        prod[k - d + j] -= c * mod[j]
            prod = prod[:d]
        prod = prod + [Fraction(0)] * (d - len(prod))
        return FieldElement(self.field, tuple(prod))

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("division by zero in number field")
        inv = _qinverse_mod(_trim(list(self.c)), list(self.field.modulus))
        return self.field.elem(inv)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.c == other.c
        try:
            return self == self._coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def as_gaussian(self):
        """The element as a GaussianRational when it lies in Q(i), else None."""
        f = self.field
        ivec = f.i.c
        b = Fraction(0)
        for k in range(1, f.degree):
            if ivec[k]:
                b = self.c[k] / ivec[k]
                break
        rest = self - f.i * f.rational(b)
        if any(rest.c[1:]):
            return None
        return GaussianRational(rest.c[0], b)

    def __repr__(self):
        g = self.as_gaussian()
        if g is not None:
            return str(g)
        terms = [f"{c}*a^{k}" if k else str(c) for k, c in enumerate(self.c) if c]
        return "(" + " + ".join(terms) + ")"


QI = NumberField([1, 0, 1], [0, 1], tower=(("i", "a^2 + 1"),))


class Embedding:
    """Field homomorphism src -> dst determined by the image of src's generator."""

    def __init__(self, src: NumberField, dst: NumberField, gen_image: FieldElement):
        self.src = src
        self.dst = dst
        self.gen_image = gen_image
        pw = [dst.one()]
        for _ in range(1, src.degree):
            pw.append(pw[-1] * gen_image)
        self._powers = pw

    def __call__(self, x):
        if isinstance(x, GaussianRational):
            return self.dst.gaussian(x)
        if x.field == self.dst and self.src != self.dst:
            return x
        total = self.dst.zero()
        for c, p in zip(x.c, self._powers):
            if c:
                total = total + p * self.dst.rational(c)
        return total

    def then(self, other: "Embedding") -> "Embedding":
        return Embedding(self.src, other.dst, other(self.gen_image))

    @classmethod
    def identity(cls, field: NumberField) -> "Embedding":
        gen = field.elem([0, 1]) if field.degree > 1 else field.rational(0)
        return cls(field, field, gen)


# univariate polynomials over a field: lists of FieldElements, low degree first


def up_trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def up_add(a, b, field):
    n = max(len(a), len(b))
    z = field.zero()
    return up_trim([(a[k] if k < len(a) else z) + (b[k] if k < len(b) else z) for k in range(n)])


def up_sub(a, b, field):
    return up_add(a, [-x for x in b], field)


def up_mul(a, b, field):
    if not a or not b:
        return []
    out = [field.zero() for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return up_trim(out)


def up_divmod(a, b, field):
    a = up_trim(a)
    b = up_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [field.zero() for _ in range(max(len(a) - len(b) + 1, 0))]
    inv = b[-1].inverse()
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] * inv
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] = a[k + j] - c * y
        a = up_trim(a)
    return up_trim(q), a


def up_monic(p):
    p = up_trim(p)
    if not p:
        return p
    inv = p[-1].inverse()
    return [x * inv for x in p]


def up_gcd(a, b, field):
    a, b = up_trim(a), up_trim(b)
    while b:
        _, r = up_divmod(a, b, field)
        a, b = b, r
    return up_monic(a)


def up_deriv(p, field):
    return up_trim([p[k] * field.rational(k) for k in range(1, len(p))])


def up_compose_linear(p, shift, field):
    """p(y + shift)."""
    result = []
    for c in reversed(p):
        result = up_mul(result, [shift, field.one()], field)
        result = up_add(result, [c], field)
    return result


def up_map(p, emb: Embedding):
    return up_trim([emb(c) for c in p])


def squarefree_decomposition(p, field) -> List[Tuple[list, int]]:
    """Yun's algorithm: p = prod s_k^k with pairwise coprime squarefree s_k (monic)."""
    p = up_monic(p)
    if len(p) <= 1:
        return []
    out = []
    dp = up_deriv(p, field)
    a = up_gcd(p, dp, field)
    b, _ = up_divmod(p, a, field)
    c, _ = up_divmod(dp, a, field)
    d = up_sub(c, up_deriv(b, field), field)
    k = 1
    while len(b) > 1:
        g = up_gcd(b, d, field)
        if len(g) > 1:
            out.append((g, k))
        b, _ = up_divmod(b, g, field)
        c, _ = up_divmod(d, g, field)
        d = up_sub(c, up_deriv(b, field), field)
        k += 1
    return out


_X, _Y = sympy.symbols("x y")


def _norm(p, field) -> List[Fraction]:
    """Norm over Q of p(y) in K[y]: Res_x(m(x), p(y; x))."""
    if field.degree == 1:
        return [c.c[0] for c in p]
    expr = 0
    for j, c in enumerate(p):
        expr += sum(sympy.Rational(v.numerator, v.denominator) * _X**k for k, v in enumerate(c.c) if v) * _Y**j
    mod = sum(sympy.Rational(v.numerator, v.denominator) * _X**k for k, v in enumerate(field.modulus))
    res = sympy.Poly(sympy.resultant(mod, expr, _X), _Y, domain="QQ")
    coeffs = res.all_coeffs()[::-1]
    return [Fraction(int(c.p), int(c.q)) for c in coeffs]


def _qsquarefree(p: List[Fraction]) -> bool:
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p)], _Y, domain="QQ")
    return sympy.degree(sympy.gcd(poly, poly.diff(_Y)), _Y) == 0


def _qfactor(p: List[Fraction]) -> List[List[Fraction]]:
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p)], _Y, domain="QQ")
    _, facs = sympy.factor_list(poly)
    out = []
    for f, _mult in facs:
        cs = [Fraction(int(c.p), int(c.q)) for c in reversed(f.all_coeffs())]
        out.append(cs)
    return out


def _shifts():
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def _generator(field):
    return field.elem([0, 1]) if field.degree > 1 else field.zero()


def factor_squarefree(p, field) -> List[list]:
    """Monic irreducible factors over ``field`` of a squarefree polynomial."""
    p = up_monic(p)
    if len(p) <= 2:
        return [p] if len(p) == 2 else []
    theta = _generator(field)
    for k in _shifts():
        shifted = up_compose_linear(p, theta * field.rational(-k), field)
        norm = _norm(shifted, field)
        if _qsquarefree(norm):
            break
    factors = []
    for nf in _qfactor(norm):
        nk = [field.rational(c) for c in nf]
        g = up_gcd(shifted, nk, field)
        if len(g) > 1:
            factors.append(up_monic(up_compose_linear(g, theta * field.rational(k), field)))
    return sorted(factors, key=len)


def _format_qpoly(p: Sequence[Fraction], var="a") -> str:
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and c == 1:
            terms.append(mono)
        elif mono and c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{c}*{mono}" if mono else str(c))
    return " + ".join(terms).replace("+ -", "- ") or "0"


def adjoin_root(field: NumberField, psi, max_extension: int = 24):
    """Adjoin a root of the irreducible polynomial ``psi`` over ``field``.

    Returns ``(L, embedding field -> L, root in L)``.
    """
    psi = up_monic(psi)
    if len(psi) == 2:
        return field, Embedding.identity(field), -psi[0]
    theta = _generator(field)
    for k in _shifts():
        shifted = up_compose_linear(psi, theta * field.rational(-k), field)
        norm = _norm(shifted, field)
        if _qsquarefree(norm):
            break
    if (len(norm) - 1) // 2 > max_extension:
        raise ExtensionDegreeExceeded(f"extension degree {(len(norm) - 1) // 2} exceeds cap {max_extension}")
    # L = Q(beta) with beta = alpha + k*theta; theta is the unique common
    # root of m(X) and psi(beta - k X; X) over L
    draft = NumberField(norm, [0])
    beta = draft.elem([0, 1])
    lin = [beta, draft.rational(-k)]
    F = []
    for j, c in enumerate(psi):
        term = up_trim([draft.rational(v) for v in c.c])
        for _ in range(j):
            term = up_mul(term, lin, draft)
        F = up_add(F, term, draft)
    g = up_gcd([draft.rational(c) for c in field.modulus], F, draft)
    if len(g) != 2:
        raise RuntimeError("primitive element construction failed")
    theta_L = -g[0]
    i_L = Embedding(field, draft, theta_L)(field.i)
    L = NumberField(norm, list(i_L.c), tower=_tower_entry(field, psi))
    theta_L = L.elem(list(theta_L.c))
    emb = Embedding(field, L, theta_L)
    alpha = L.elem([0, 1]) - theta_L * L.rational(k)
    return L, emb, alpha


def _tower_entry(field, psi):
    level = len(field.tower)
    desc = " + ".join(f"({c!r})*y^{j}" if j else f"({c!r})" for j, c in enumerate(psi) if c)
    return field.tower + ((f"a{level}", desc),)


def roots(p, field: NumberField, split: bool = True, max_extension: int = 24):
    """Roots of p over ``field`` with multiplicities.

    Each entry is ``(root, L, embedding field -> L, multiplicity, conjugates)``.
    With ``split=False`` only one root per irreducible factor is returned and
    ``conjugates`` counts the roots it stands for; otherwise every root is
    listed with ``conjugates == 1``.
    """
    out = []
    for s, mult in squarefree_decomposition(p, field):
        for psi in factor_squarefree(s, field):
            if len(psi) == 2:
                out.append((-psi[0], field, Embedding.identity(field), mult, 1))
                continue
            L, emb, alpha = adjoin_root(field, psi, max_extension)
            if not split:
                out.append((alpha, L, emb, mult, len(psi) - 1))
                continue
            out.append((alpha, L, emb, mult, 1))
            rest, r = up_divmod(up_map(psi, emb), [-alpha, L.one()], L)
            assert not r
            for beta, L2, emb2, m2, c2 in roots(rest, L, True, max_extension):
                out.append((beta, L2, emb.then(emb2), mult * m2, c2))
    return out


def one_root(p, field: NumberField, max_extension: int = 24):
    """Some root of p: ``(root, L, embedding field -> L)``, preferring the smallest extension."""
    best = None
    for s, _ in squarefree_decomposition(p, field):
        for psi in factor_squarefree(s, field):
            if best is None or len(psi) < len(best):
                best = psi
    if best is None:
        raise ValueError("constant polynomial has no roots")
    L, emb, alpha = adjoin_root(field, best, max_extension)
    return alpha, L, emb
