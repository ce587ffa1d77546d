"""Sparse multivariate polynomials over Q(i), real polynomials in z and zbar,
and local monomial orders."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

from .gaussian import ONE, ZERO, GaussianRational, format_gaussian

Monomial = Tuple[int, ...]
INF = float("inf")  # only ever used as the order of the zero germ


class DimensionError(ValueError):
    pass


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def divides(a: Monomial, b: Monomial) -> bool:
    """True when monomial ``a`` divides ``b``."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def unit_vector(n: int, j: int, k: int = 1) -> Monomial:
    e = [0] * n
    e[j] = k
    return tuple(e)


@dataclass(frozen=True)
class LocalOrder:
    """Anti-graded monomial order: lower total degree compares greater.

    ``kind`` is ``"lex"`` or ``"revlex"`` and breaks ties inside a degree;
    ``perm`` lists variable indices from most to least significant.
    """

    kind: str = "lex"
    perm: Tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "revlex"):
            raise ValueError(f"unknown local order kind {self.kind!r}")

    def key(self, m: Monomial):
        perm = self.perm if self.perm is not None else range(len(m))
        if self.kind == "lex":
            return (-sum(m),) + tuple(m[p] for p in perm)
        return (-sum(m),) + tuple(-m[p] for p in reversed(tuple(perm)))

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) > self.key(b)

    def leading(self, monomials: Iterable[Monomial]) -> Monomial:
        return max(monomials, key=self.key)

    def sort(self, monomials: Iterable[Monomial]) -> list:
        """Monomials from greatest to smallest."""
        return sorted(monomials, key=self.key, reverse=True)


DEFAULT_ORDER = LocalOrder("lex")


def _mono_str(m: Monomial, prefix: str = "z") -> list:
    parts = []
    for j, e in enumerate(m):
        if e == 1:
            parts.append(f"{prefix}{j + 1}")
        elif e > 1:
            parts.append(f"{prefix}{j + 1}^{e}")
    return parts


def _join_terms(items) -> str:
    """items: iterable of (coefficient, [factor strings])."""
    out = []
    for c, factors in items:
        neg = False
        if not c.im and c.re < 0:
            neg, c = True, -c
        elif not c.re and c.im < 0:
            neg, c = True, -c
        if factors:
            body = "*".join(factors) if c == 1 else format_gaussian(c) + "*" + "*".join(factors)
        else:
            body = format_gaussian(c)
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) if out else "0"


class Poly:
    """Holomorphic polynomial in z1..zn with Q(i) coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Dict[Monomial, GaussianRational] | None = None):
        self.n = n
        clean = {}
        if terms:
            for m, c in terms.items():
                if len(m) != n:
                    raise DimensionError(f"monomial {m} does not have {n} exponents")
                c = GaussianRational.coerce(c)
                if c:
                    clean[tuple(m)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, n, terms):
        p = cls.__new__(cls)
        p.n = n
        p.terms = terms
        return p

    @classmethod
    def constant(cls, n: int, c=1) -> "Poly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def var(cls, n: int, j: int) -> "Poly":
        """The coordinate z_{j+1} (zero-based index ``j``)."""
        if not 0 <= j < n:
            raise DimensionError(f"variable index {j} out of range for n={n}")
        return cls._raw(n, {unit_vector(n, j): ONE})

    @classmethod
    def monomial(cls, m: Sequence[int], c=1) -> "Poly":
        return cls(len(m), {tuple(m): c})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Poly":
        n = len(coeffs)
        return cls(n, {unit_vector(n, j): c for j, c in enumerate(coeffs)})

    def _check(self, other: "Poly"):
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = GaussianRational.coerce(c)
        if not c:
            return Poly._raw(self.n, {})
        return Poly._raw(self.n, {m: c * v for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, c: GaussianRational) -> "Poly":
        return Poly._raw(self.n, {mono_mul(m, mono): c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        out: Dict[Monomial, GaussianRational] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m)
                out[m] = c1 * c2 if s is None else s + c1 * c2
        return Poly._raw(self.n, {m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, RealPoly):
            return other == self
        try:
            return self == Poly.constant(self.n, other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def ord0(self):
        """Lowest total degree of a term; ``inf`` for the zero polynomial."""
        if not self.terms:
            return INF
        return min(sum(m) for m in self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def constant_term(self) -> GaussianRational:
        return self.terms.get((0,) * self.n, ZERO)

    def is_unit(self) -> bool:
        """Nonzero constant term, i.e. invertible in the local ring."""
        return bool(self.constant_term())

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._raw(self.n, {m: c for m, c in self.terms.items() if sum(m) == d})

    def initial_form(self) -> "Poly":
        """Lowest-degree homogeneous part."""
        if not self.terms:
            return self
        return self.homogeneous_part(self.ord0())

    def conjugate(self) -> "Poly":
        """Coefficientwise complex conjugate (the polynomial zbar -> conj(p(z)))."""
        return Poly._raw(self.n, {m: c.conjugate() for m, c in self.terms.items()})

    def compose(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute z_j := images[j]; all images share one ambient dimension."""
        if len(images) != self.n:
            raise DimensionError(f"need {self.n} images, got {len(images)}")
        m_out = images[0].n if images else 0
        cache = [{0: Poly.constant(m_out), 1: img} for img in images]

        def power(j, e):
            table = cache[j]
            if e not in table:
                table[e] = power(j, e - 1) * images[j]
            return table[e]

        result = Poly._raw(m_out, {})
        for m, c in self.terms.items():
            term = Poly.constant(m_out, c)
            for j, e in enumerate(m):
                if e:
                    term = term * power(j, e)
            result = result + term
        return result

    def substitute_linear(self, matrix: Sequence[Sequence]) -> "Poly":
        """Apply z_j := sum_k A[j][k] z_k for an invertible matrix A over Q(i)."""
        check_invertible(matrix, self.n)
        return self.compose(linear_images(matrix))

    def evaluate(self, point: Sequence) -> GaussianRational:
        total = ZERO
        pt = [GaussianRational.coerce(v) for v in point]
        for m, c in self.terms.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v = v * x ** e
            total = total + v
        return total

    def sorted_terms(self, order: LocalOrder = DEFAULT_ORDER):
        return [(m, self.terms[m]) for m in order.sort(self.terms)]

    def to_real(self) -> "RealPoly":
        zero = (0,) * self.n
        return RealPoly._raw(self.n, {(m, zero): c for m, c in self.terms.items()})

    def __str__(self):
        return _join_terms((c, _mono_str(m)) for m, c in self.sorted_terms())

    def __repr__(self):
        return f"Poly({self.n}, {str(self)!r})"


def linear_images(matrix: Sequence[Sequence]) -> list:
    n = len(matrix)
    return [Poly.linear([GaussianRational.coerce(a) for a in row]) for row in matrix]


def rank(matrix: Sequence[Sequence]) -> int:
    """Rank over Q(i) by exact Gaussian elimination."""
    rows = [[GaussianRational.coerce(a) for a in row] for row in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def check_invertible(matrix, n: int) -> None:
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise DimensionError(f"substitution matrix must be {n}x{n}")
    if rank(matrix) != n:
        raise ValueError("singular substitution matrix")


def kernel_basis(rows: Sequence[Sequence], n: int) -> list:
    """Basis of {v in Q(i)^n : rows . v = 0}, as a list of coefficient vectors."""
    mat = [[GaussianRational.coerce(a) for a in row] for row in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][col].inverse()
        mat[r] = [a * inv for a in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [ZERO] * n
        v[fcol] = ONE
        for i, pcol in enumerate(pivots):
            v[pcol] = -mat[i][fcol]
        basis.append(v)
    return basis


RealMonomial = Tuple[Monomial, Monomial]


class RealPoly:
    """Polynomial in z and zbar: sum of C[a, b] z^a zbar^b."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Dict[RealMonomial, GaussianRational] | None = None):
        self.n = n
        clean = {}
        if terms:
            for (a, b), c in terms.items():
                if len(a) != n or len(b) != n:
                    raise DimensionError(f"bad exponent lengths for n={n}")
                c = GaussianRational.coerce(c)
                if c:
                    clean[(tuple(a), tuple(b))] = c
        self.terms = clean

    @classmethod
    def _raw(cls, n, terms):
        p = cls.__new__(cls)
        p.n = n
        p.terms = terms
        return p

    @classmethod
    def hermitian_square(cls, p: Poly, weight=1) -> "RealPoly":
        """weight * |p|^2."""
        return cls.product(p, p, weight)

    @classmethod
    def product(cls, p: Poly, q: Poly, weight=1) -> "RealPoly":
        """weight * p(z) * conj(q(z))."""
        w = GaussianRational.coerce(weight)
        out = {}
        for a, c1 in p.terms.items():
            for b, c2 in q.terms.items():
                v = w * c1 * c2.conjugate()
                key = (a, b)
                s = out.get(key)
                out[key] = v if s is None else s + v
        return cls._raw(p.n, {k: v for k, v in out.items() if v})

    @classmethod
    def real_part(cls, h: Poly) -> "RealPoly":
        """Re{h} = (h + conj(h)) / 2."""
        half = Fraction(1, 2)
        zero = (0,) * h.n
        out = {}
        for m, c in h.terms.items():
            if m == zero:
                if c.re:
                    out[(m, m)] = GaussianRational(c.re)
                continue
            out[(m, zero)] = c * half
            out[(zero, m)] = c.conjugate() * half
        return cls._raw(h.n, out)

    def _check(self, other):
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if isinstance(other, Poly):
            other = other.to_real()
        elif not isinstance(other, RealPoly):
            other = Poly.constant(self.n, other).to_real()
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return RealPoly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return RealPoly._raw(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, Poly):
            other = other.to_real()
        elif not isinstance(other, RealPoly):
            other = Poly.constant(self.n, other).to_real()
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "RealPoly":
        c = GaussianRational.coerce(c)
        if not c:
            return RealPoly._raw(self.n, {})
        return RealPoly._raw(self.n, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Poly):
            other = other.to_real()
        if not isinstance(other, RealPoly):
            return self.scale(other)
        self._check(other)
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (mono_mul(a1, a2), mono_mul(b1, b2))
                s = out.get(k)
                out[k] = c1 * c2 if s is None else s + c1 * c2
        return RealPoly._raw(self.n, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Poly.constant(self.n).to_real()
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            other = other.to_real()
        if isinstance(other, RealPoly):
            return self.n == other.n and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def ord0(self):
        if not self.terms:
            return INF
        return min(sum(a) + sum(b) for a, b in self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(a) + sum(b) for a, b in self.terms)

    def conjugate(self) -> "RealPoly":
        return RealPoly._raw(self.n, {(b, a): c.conjugate() for (a, b), c in self.terms.items()})

    def is_real(self) -> bool:
        """C[a, b] == conj(C[b, a]) for every pair."""
        for (a, b), c in self.terms.items():
            other = self.terms.get((b, a))
            if other is None or other != c.conjugate():
                return False
        return True

    def is_holomorphic(self) -> bool:
        zero = (0,) * self.n
        return all(b == zero for _, b in self.terms)

    def to_holomorphic(self) -> Poly:
        if not self.is_holomorphic():
            raise ValueError("polynomial involves conjugate variables")
        return Poly._raw(self.n, {a: c for (a, _), c in self.terms.items()})

    def truncate(self, k: int) -> "RealPoly":
        """Drop every term of total degree above ``k``."""
        return RealPoly._raw(self.n, {key: c for key, c in self.terms.items() if sum(key[0]) + sum(key[1]) <= k})

    def compose(self, images: Sequence[Poly]) -> "RealPoly":
        """Substitute z_j := images[j](s) and zbar_j := conj(images[j])(sbar)."""
        if len(images) != self.n:
            raise DimensionError(f"need {self.n} images, got {len(images)}")
        m_out = images[0].n
        cache: Dict[Monomial, Poly] = {}

        def holo(a):
            if a not in cache:
                p = Poly.constant(m_out)
                for j, e in enumerate(a):
                    if e:
                        p = p * images[j] ** e
                cache[a] = p
            return cache[a]

        result = RealPoly._raw(m_out, {})
        for (a, b), c in self.terms.items():
            result = result + RealPoly.product(holo(a), holo(b), c)
        return result

    def substitute_linear(self, matrix: Sequence[Sequence]) -> "RealPoly":
        check_invertible(matrix, self.n)
        return self.compose(linear_images(matrix))

    def evaluate(self, point: Sequence) -> GaussianRational:
        pt = [GaussianRational.coerce(v) for v in point]
        total = ZERO
        for (a, b), c in self.terms.items():
            v = c
            for x, e, f in zip(pt, a, b):
                if e:
                    v = v * x ** e
                if f:
                    v = v * x.conjugate() ** f
            total = total + v
        return total

    def sorted_terms(self):
        def key(item):
            (a, b), _ = item
            return (sum(a) + sum(b), tuple(-x for x in a + b))

        return sorted(self.terms.items(), key=key)

    def __str__(self):
        return _join_terms((c, _mono_str(a) + _mono_str(b, "zb")) for (a, b), c in self.sorted_terms())

    def __repr__(self):
        return f"RealPoly({self.n}, {str(self)!r})"


def ord0(p) -> float | int:
    return p.ord0()
