"""Standard bases in the local ring at the origin (Mora's tangent cone
algorithm) and colengths dim O/I of zero-dimensional ideals."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .gaussian import GaussianRational
from .poly import (
    DEFAULT_ORDER,
    INF,
    DimensionError,
    LocalOrder,
    Monomial,
    Poly,
    divides,
    mono_div,
    mono_lcm,
    rank,
)


class BudgetExceeded(RuntimeError):
    """A computation hit its step or degree cap; no value was produced."""


@dataclass(frozen=True)
class Budget:
    max_steps: int = 200_000
    max_degree: Optional[int] = None  # None: 10 * (sum of generator degrees)


DEFAULT_BUDGET = Budget()


class IdealPresentation:
    """A finitely generated ideal of germs at the origin of C^n."""

    def __init__(self, n: int, generators: Sequence[Poly]):
        gens = list(generators)
        if not gens:
            raise ValueError("an ideal presentation needs at least one generator")
        for g in gens:
            if g.n != n:
                raise DimensionError(f"generator {g} is not in {n} variables")
        self.n = n
        self.generators: Tuple[Poly, ...] = tuple(gens)

    @property
    def is_unit(self) -> bool:
        """True when some generator is a unit of the local ring, so the ideal is (1)."""
        return any(g.is_unit() for g in self.generators)

    def nonzero(self) -> List[Poly]:
        return [g for g in self.generators if g]

    def with_generators(self, extra: Sequence[Poly]) -> "IdealPresentation":
        return IdealPresentation(self.n, list(self.generators) + list(extra))

    def compose(self, images: Sequence[Poly]) -> "IdealPresentation":
        """Pull back along the polynomial map given by ``images``."""
        m = images[0].n
        return IdealPresentation(m, [g.compose(images) for g in self.generators])

    def substitute_linear(self, matrix) -> "IdealPresentation":
        return IdealPresentation(self.n, [g.substitute_linear(matrix) for g in self.generators])

    def max_degree(self) -> int:
        return max(g.degree() for g in self.generators)

    def __repr__(self):
        return f"IdealPresentation({self.n}, [{', '.join(str(g) for g in self.generators)}])"


def maximal_ideal(n: int) -> IdealPresentation:
    return IdealPresentation(n, [Poly.var(n, j) for j in range(n)])


class _Entry:
    __slots__ = ("poly", "lm", "lc", "ecart")

    def __init__(self, poly: Poly, order: LocalOrder):
        self.poly = poly
        self.lm = order.leading(poly.terms)
        self.lc = poly.terms[self.lm]
        self.ecart = poly.degree() - sum(self.lm)


class _Counter:
    def __init__(self, budget: Budget, degree_cap: int):
        self.steps = 0
        self.max_steps = budget.max_steps
        self.degree_cap = degree_cap

    def tick(self, h: Poly):
        self.steps += 1
        if self.steps > self.max_steps:
            raise BudgetExceeded(f"reduction step budget {self.max_steps} exceeded")
        if h.degree() > self.degree_cap:
            raise BudgetExceeded(f"degree cap {self.degree_cap} exceeded")


def _reduce_step(h: Poly, lm_h: Monomial, g: _Entry) -> Poly:
    c = h.terms[lm_h] / g.lc
    return h - g.poly.mul_term(mono_div(lm_h, g.lm), c)


def mora_normal_form(f: Poly, basis: Sequence[_Entry], order: LocalOrder, counter: _Counter) -> Poly:
    """Weak normal form of ``f``: zero iff f lies in the ideal of the local ring."""
    h = f
    todo = list(basis)
    while h:
        lm_h = order.leading(h.terms)
        best = None
        for g in todo:
            if divides(g.lm, lm_h):
                if best is None or g.ecart < best.ecart or (
                    g.ecart == best.ecart and order.key(g.lm) < order.key(best.lm)
                ):
                    best = g
        if best is None:
            break
        ecart_h = h.degree() - sum(lm_h)
        if best.ecart > ecart_h:
            todo.append(_Entry(h, order))
        h = _reduce_step(h, lm_h, best)
        counter.tick(h)
    return h


@dataclass
class StandardBasis:
    ideal: IdealPresentation
    order: LocalOrder
    elements: List[Poly]
    leading: List[Monomial]
    unit: bool = False
    _entries: list = field(default_factory=list, repr=False)

    @property
    def minimal_leading(self) -> List[Monomial]:
        """Minimal generators of the leading-term ideal, sorted."""
        lead = sorted(set(self.leading))
        keep = [m for m in lead if not any(o != m and divides(o, m) for o in lead)]
        return sorted(keep)

    def pure_power_bounds(self) -> Optional[List[int]]:
        """Smallest k_j with z_j^k_j a leading monomial, or None if some variable lacks one."""
        n = self.ideal.n
        bounds = []
        for j in range(n):
            ks = [m[j] for m in self.leading if all(m[i] == 0 for i in range(n) if i != j)]
            if not ks:
                return None
            bounds.append(min(ks))
        return bounds

    @property
    def is_finite(self) -> bool:
        return self.unit or self.pure_power_bounds() is not None

    def staircase_size(self):
        if self.unit:
            return 0
        bounds = self.pure_power_bounds()
        if bounds is None:
            return INF
        return _kernels.staircase_count(np.array(self.minimal_leading, dtype=np.int64), bounds)

    def staircase(self) -> Optional[List[Monomial]]:
        """The standard monomials, or None when there are infinitely many."""
        if self.unit:
            return []
        bounds = self.pure_power_bounds()
        if bounds is None:
            return None
        grid = np.indices(bounds).reshape(len(bounds), -1).T
        mask = _kernels.divisible_mask(grid, np.array(self.minimal_leading, dtype=np.int64))
        return sorted(tuple(int(x) for x in row) for row in grid[~mask])

    def reduce(self, f: Poly, budget: Budget = DEFAULT_BUDGET) -> Poly:
        counter = _Counter(budget, _degree_cap(self.ideal, budget, extra=f.degree()))
        return mora_normal_form(f, self._entries, self.order, counter)

    def contains(self, f: Poly, budget: Budget = DEFAULT_BUDGET) -> bool:
        if self.unit:
            return True
        return not self.reduce(f, budget)


def _degree_cap(ideal: IdealPresentation, budget: Budget, extra: int = 0) -> int:
    if budget.max_degree is not None:
        return budget.max_degree
    return 10 * max(1, sum(max(g.degree(), 0) for g in ideal.generators) + max(extra, 0))


def _spoly(a: _Entry, b: _Entry) -> Poly:
    lcm = mono_lcm(a.lm, b.lm)
    pa = a.poly.mul_term(mono_div(lcm, a.lm), b.lc)
    pb = b.poly.mul_term(mono_div(lcm, b.lm), a.lc)
    return pa - pb


def mora_standard_basis(
    ideal: IdealPresentation, order: LocalOrder = DEFAULT_ORDER, budget: Budget = DEFAULT_BUDGET
) -> StandardBasis:
    """Standard basis of ``ideal`` in the localization at the origin."""
    gens = ideal.nonzero()
    if not gens:
        raise ValueError("the zero ideal has no standard basis here")
    n = ideal.n
    if ideal.is_unit:
        one = Poly.constant(n)
        return StandardBasis(ideal, order, [one], [(0,) * n], unit=True, _entries=[_Entry(one, order)])
    counter = _Counter(budget, _degree_cap(ideal, budget))
    entries: List[_Entry] = []
    for g in gens:
        h = mora_normal_form(g, entries, order, counter) if entries else g
        if h:
            entries.append(_Entry(h.scale(GaussianRational(1) / _Entry(h, order).lc), order))
    pairs = [(i, j) for i in range(len(entries)) for j in range(i + 1, len(entries))]
    while pairs:
        pairs.sort(key=lambda p: (sum(mono_lcm(entries[p[0]].lm, entries[p[1]].lm)), p))
        i, j = pairs.pop(0)
        a, b = entries[i], entries[j]
        if all(x == 0 or y == 0 for x, y in zip(a.lm, b.lm)):
            continue  # coprime leading monomials
        h = mora_normal_form(_spoly(a, b), entries, order, counter)
        if h:
            if h.is_unit() and order.leading(h.terms) == (0,) * n:
                one = Poly.constant(n)
                return StandardBasis(ideal, order, [one], [(0,) * n], unit=True, _entries=[_Entry(one, order)])
            e = _Entry(h, order)
            e = _Entry(h.scale(GaussianRational(1) / e.lc), order)
            entries.append(e)
            k = len(entries) - 1
            pairs.extend((m, k) for m in range(k))
    if any(e.lm == (0,) * n for e in entries):
        one = Poly.constant(n)
        return StandardBasis(ideal, order, [one], [(0,) * n], unit=True, _entries=[_Entry(one, order)])
    return StandardBasis(ideal, order, [e.poly for e in entries], [e.lm for e in entries], _entries=entries)


def colength(ideal: IdealPresentation, order: LocalOrder = DEFAULT_ORDER, budget: Budget = DEFAULT_BUDGET):
    """dim_C O_0 / I: the number of standard monomials, ``inf`` if infinite, 0 for the unit ideal."""
    if ideal.is_unit:
        return 0
    if not ideal.nonzero():
        return INF
    return mora_standard_basis(ideal, order, budget).staircase_size()


class DegenerateFormsError(ValueError):
    pass


class LinearFormSet:
    """q-1 linear forms with zero constant term and full rank."""

    def __init__(self, n: int, matrix: Sequence[Sequence]):
        rows = [[GaussianRational.coerce(a) for a in row] for row in matrix]
        if any(len(r) != n for r in rows):
            raise DimensionError(f"each form needs {n} coefficients")
        if rank(rows) != len(rows):
            raise DegenerateFormsError("linear forms are not independent")
        self.n = n
        self.matrix = tuple(tuple(r) for r in rows)

    @property
    def forms(self) -> List[Poly]:
        return [Poly.linear(list(r)) for r in self.matrix]

    def __len__(self):
        return len(self.matrix)

    def __repr__(self):
        return f"LinearFormSet({self.n}, [{', '.join(str(f) for f in self.forms)}])"

    def plane_parametrization(self) -> List[Poly]:
        """Images z_j = psi_j(s) of a linear isomorphism C^(n-k) -> zero locus of the forms."""
        from .poly import kernel_basis

        basis = kernel_basis(self.matrix, self.n)
        m = len(basis)
        return [Poly.linear([basis[c][j] for c in range(m)]) for j in range(self.n)]

    def to_json(self):
        return [[str(Poly.linear(list(r)))] for r in self.matrix]


def empty_forms(n: int) -> LinearFormSet:
    return LinearFormSet(n, [])


def coordinate_form_sets(n: int, k: int) -> List[LinearFormSet]:
    """All sets of k coordinate functions."""
    out = []
    for combo in itertools.combinations(range(n), k):
        out.append(LinearFormSet(n, [[1 if c == j else 0 for c in range(n)] for j in combo]))
    return out


_TAGS = {"forms": 1, "unitary": 2, "point": 3, "curves": 4}


@dataclass(frozen=True)
class GenericSampler:
    """Seeded source of random parameter choices; each (purpose, index) gets its own stream."""

    seed: int = 1
    sample_count: int = 8
    height: int = 7

    def __post_init__(self):
        if self.sample_count < 1 or self.height < 1:
            raise ValueError("sample_count and height must be positive")

    def rng(self, purpose: str, index: int = 0) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed & 0xFFFFFFFFFFFFFFFF, spawn_key=(_TAGS[purpose], index))
        return np.random.Generator(np.random.PCG64(ss))

    def random_forms(self, n: int, k: int, index: int) -> LinearFormSet:
        """k random integer forms with coefficients in [-H, H], resampled until independent."""
        rng = self.rng("forms", index)
        while True:
            mat = rng.integers(-self.height, self.height + 1, size=(k, n)).tolist()
            try:
                return LinearFormSet(n, mat)
            except DegenerateFormsError:
                continue

    def form_sets(self, n: int, k: int) -> List[LinearFormSet]:
        return [self.random_forms(n, k, i) for i in range(self.sample_count)]


def colength_with_forms(
    ideal: IdealPresentation, forms: LinearFormSet, order: LocalOrder = DEFAULT_ORDER, budget: Budget = DEFAULT_BUDGET
):
    """Colength of (I, w_1, ..., w_{q-1})."""
    if forms.n != ideal.n:
        raise DimensionError("forms and ideal live in different dimensions")
    return colength(ideal.with_generators(forms.forms), order, budget)


@dataclass
class GenericColength:
    value: object
    witness: LinearFormSet
    samples: List[object]
    disagreement: bool
    certificate: str = "sampled_generic"


def generic_colength(
    ideal: IdealPresentation,
    q: int,
    sampler: GenericSampler = GenericSampler(),
    order: LocalOrder = DEFAULT_ORDER,
    budget: Budget = DEFAULT_BUDGET,
) -> GenericColength:
    """Generic value of colength(I, w_1..w_{q-1}) over non-degenerate form sets.

    The infimum over form sets is attained on a dense open set, so the
    minimum over the random draws plus the coordinate form sets is the
    generic value as soon as one draw is generic.
    """
    n = ideal.n
    if not 1 <= q <= n:
        raise ValueError(f"q={q} out of range 1..{n}")
    candidates = sampler.form_sets(n, q - 1) + coordinate_form_sets(n, q - 1)
    best = None
    values = []
    for w in candidates:
        v = colength_with_forms(ideal, w, order, budget)
        values.append(v)
        if best is None or v < best[0]:
            best = (v, w)
    random_values = values[: sampler.sample_count]
    return GenericColength(best[0], best[1], values, disagreement=len(set(random_values)) > 1)
