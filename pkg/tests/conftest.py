from hypothesis import settings
from hypothesis import strategies as st

from contact_type.gaussian import GaussianRational
from contact_type.poly import Poly, RealPoly

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        status, text = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {status} - {text}")


small_fraction = st.fractions(min_value=-5, max_value=5, max_denominator=4)
gaussians = st.builds(GaussianRational, small_fraction, small_fraction)


def monomials(n, max_degree):
    return st.lists(st.integers(0, max_degree), min_size=n, max_size=n).map(lambda m: _cap(m, max_degree))


def _cap(m, max_degree):
    out, left = [], max_degree
    for e in m:
        out.append(min(e, left))
        left -= out[-1]
    return tuple(out)


def polys(n, max_degree=4, max_terms=5):
    return st.dictionaries(monomials(n, max_degree), gaussians, max_size=max_terms).map(lambda t: Poly(n, t))


def real_germs(n, max_degree=6, max_terms=5):
    """Real polynomials without constant term: sums of c m + conj(c m)."""
    key = st.lists(st.integers(0, max_degree), min_size=2 * n, max_size=2 * n).map(
        lambda e: _cap(e, max_degree)).filter(lambda e: sum(e) > 0).map(lambda e: (e[:n], e[n:]))

    def build(items):
        r = RealPoly(n, {})
        for (a, b), c in items:
            r = r + RealPoly(n, {(a, b): c}) + RealPoly(n, {(b, a): c.conjugate()})
        return r

    return st.lists(st.tuples(key, gaussians), max_size=max_terms).map(build)
