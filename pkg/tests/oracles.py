"""Independent reference computations used by the tests."""

import itertools

import sympy
from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix


def brute_force_staircase(gens, n):
    """Monomials not divisible by any generator exponent vector (needs pure powers)."""
    bounds = [min(g[j] for g in gens if all(g[i] == 0 for i in range(n) if i != j)) for j in range(n)]
    count = 0
    for m in itertools.product(*(range(b) for b in bounds)):
        if not any(all(g[i] <= m[i] for i in range(n)) for g in gens):
            count += 1
    return count


def _to_qqi(c):
    return QQ_I(sympy.Rational(c.re.numerator, c.re.denominator), sympy.Rational(c.im.numerator, c.im.denominator))


def truncated_colength(gens, n, K):
    """dim C[z] / (I + m^K) by linear algebra on polynomials of degree < K."""
    monos = [m for d in range(K) for m in itertools.product(range(d + 1), repeat=n) if sum(m) == d]
    monos = sorted(set(monos))
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for g in gens:
        for a in monos:
            row = [QQ_I.zero] * len(monos)
            hit = False
            for m, c in g.terms.items():
                e = tuple(x + y for x, y in zip(a, m))
                if sum(e) < K:
                    row[index[e]] += _to_qqi(c)
                    hit = True
            if hit:
                rows.append(row)
    if not rows:
        return len(monos)
    rank = DomainMatrix(rows, (len(rows), len(monos)), QQ_I).rank()
    return len(monos) - rank


def local_colength(gens, n, start=2, stop=14):
    """First stable value of the truncated colength, or None."""
    prev = None
    for K in range(start, stop):
        v = truncated_colength(gens, n, K)
        if v == prev and v < K:
            return v
        prev = v
    return None
