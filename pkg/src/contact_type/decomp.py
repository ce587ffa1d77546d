"""Holomorphic decompositions of real polynomial germs.

``polarize`` writes a real germ as Re{h} + sum of sign * weight * |p|^2 by
congruence-diagonalizing the Hermitian matrix of mixed coefficients over
Q(i).  From there ``extract_fg`` produces the holomorphic maps f and g,
``sample_unitary`` draws exact unitaries, and ``ideal_U`` builds (h, f - U g).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .curves import CurveJet, pullback
from .gaussian import ONE, ZERO, GaussianRational, I as IMAG
from .localalg import GenericSampler, IdealPresentation, LinearFormSet
from .poly import DEFAULT_ORDER, INF, DimensionError, Poly, RealPoly


class NonSquareWeightError(ValueError):
    def __init__(self, weight: Fraction, hint: Optional[int]):
        self.weight = weight
        self.hint = hint
        msg = f"weight {weight} is not the square of a rational"
        if hint is not None:
            msg += f"; multiplying the germ by {hint} makes every weight a square"
        else:
            msg += "; no common rescaling makes all weights squares"
        super().__init__(msg)


def truncate_jet(r: RealPoly, k: int) -> RealPoly:
    if k < 1:
        raise ValueError("k must be at least 1")
    return r.truncate(k)


@dataclass
class HoloDecomposition:
    """r = Re{h} + sum sign * weight * |p|^2."""

    n: int
    h: Poly
    summands: List[Tuple[int, Fraction, Poly]]

    @property
    def positive(self):
        return [(w, p) for s, w, p in self.summands if s > 0]

    @property
    def negative(self):
        return [(w, p) for s, w, p in self.summands if s < 0]

    @property
    def N(self) -> int:
        return max(len(self.positive), len(self.negative))

    def reconstruct(self) -> RealPoly:
        out = RealPoly.real_part(self.h)
        for s, w, p in self.summands:
            out = out + RealPoly.hermitian_square(p, w * s)
        return out

    def to_json(self):
        return {
            "h": str(self.h),
            "summands": [{"sign": s, "weight": str(w), "p": str(p)} for s, w, p in self.summands],
        }


def polarize(r: RealPoly) -> HoloDecomposition:
    if not r.is_real():
        raise ValueError("germ is not real")
    n = r.n
    zero = (0,) * n
    if (zero, zero) in r.terms:
        raise ValueError("germ does not vanish at the origin")
    h_terms = {}
    mixed: Dict[tuple, Dict[tuple, GaussianRational]] = {}
    monos = set()
    for (a, b), c in r.terms.items():
        if b == zero:
            h_terms[a] = c * 2
        elif a != zero:
            mixed.setdefault(a, {})[b] = c
            monos.add(a)
            monos.add(b)
    h = Poly(n, h_terms)
    index = DEFAULT_ORDER.sort(monos)
    H = [[mixed.get(a, {}).get(b, ZERO) for b in index] for a in index]
    summands = []
    m = len(index)
    while True:
        pivot = next((k for k in range(m) if H[k][k]), None)
        if pivot is not None:
            v = [ZERO] * m
            v[pivot] = ONE
        else:
            pair = next(((j, k) for j in range(m) for k in range(m) if H[j][k]), None)
            if pair is None:
                break
            j, k = pair
            a = H[j][k]
            # t depends only on the phase of a, which keeps the result equivariant under r -> c*r
            t = a.conjugate() / a
            if not a.re:
                t = t * IMAG
            v = [ZERO] * m
            v[j] = ONE
            v[k] = t
        col = [sum((H[a][b] * v[b] for b in range(m)), ZERO) for a in range(m)]
        d = sum((v[a].conjugate() * col[a] for a in range(m)), ZERO)
        d = d.re
        u = [c / d for c in col]
        for a in range(m):
            for b in range(m):
                H[a][b] = H[a][b] - col[a] * col[b].conjugate() / d
        p = Poly(n, {index[a]: u[a] for a in range(m)})
        lead = DEFAULT_ORDER.sort(p.terms)[-1]
        lc = p.terms[lead]
        p = p.scale(lc.inverse())
        w = abs(d) * lc.norm()
        summands.append((1 if d > 0 else -1, w, p))
    return HoloDecomposition(n, h, summands)


def rational_sqrt(q: Fraction) -> Optional[Fraction]:
    q = Fraction(q)
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def _squarefree_class(q: Fraction) -> int:
    """The squarefree integer s with q in s * (Q^*)^2."""
    x = q.numerator * q.denominator
    s, p = 1, 2
    while p * p <= x:
        while x % (p * p) == 0:
            x //= p * p
        if x % p == 0:
            s *= p
            x //= p
        p += 1
    return s * x


def rescale_hint(d: HoloDecomposition) -> Optional[int]:
    """Smallest positive integer c with c * w a rational square for every weight w, if any."""
    classes = {_squarefree_class(w) for _, w, _ in d.summands}
    if len(classes) > 1:
        return None
    return classes.pop() if classes else 1


def rescale(r: RealPoly, c) -> RealPoly:
    c = Fraction(c)
    if c <= 0:
        raise ValueError("rescaling factor must be positive")
    return r.scale(c)


def extract_fg(d: HoloDecomposition) -> Tuple[List[Poly], List[Poly]]:
    """(f, g) with ||f||^2 - ||g||^2 equal to the mixed part; both padded to length N with zeros."""
    f, g = [], []
    for s, w, p in d.summands:
        root = rational_sqrt(w)
        if root is None:
            raise NonSquareWeightError(w, rescale_hint(d))
        (f if s > 0 else g).append(p.scale(root))
    N = d.N
    zero = Poly(d.n, {})
    f += [zero] * (N - len(f))
    g += [zero] * (N - len(g))
    return f, g


# unitaries

_PHASES = (
    GaussianRational(Fraction(3, 5), Fraction(4, 5)),
    GaussianRational(Fraction(4, 5), Fraction(3, 5)),
    GaussianRational(Fraction(5, 13), Fraction(12, 13)),
    GaussianRational(Fraction(12, 13), Fraction(5, 13)),
    GaussianRational(Fraction(8, 17), Fraction(15, 17)),
    ONE,
    -ONE,
    IMAG,
    -IMAG,
)
_ROTATIONS = ((Fraction(3, 5), Fraction(4, 5)), (Fraction(5, 13), Fraction(12, 13)), (Fraction(8, 17), Fraction(15, 17)))


class UnitaryMatrix:
    __slots__ = ("N", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        rows = [tuple(GaussianRational.coerce(x) for x in row) for row in entries]
        if any(len(r) != len(rows) for r in rows):
            raise DimensionError("unitary matrix must be square")
        self.N = len(rows)
        self.entries = tuple(rows)

    @classmethod
    def identity(cls, N: int) -> "UnitaryMatrix":
        return cls([[ONE if j == k else ZERO for k in range(N)] for j in range(N)])

    def __matmul__(self, other: "UnitaryMatrix") -> "UnitaryMatrix":
        N = self.N
        return UnitaryMatrix(
            [[sum((self.entries[j][m] * other.entries[m][k] for m in range(N)), ZERO) for k in range(N)] for j in range(N)]
        )

    def adjoint(self) -> "UnitaryMatrix":
        return UnitaryMatrix([[self.entries[k][j].conjugate() for k in range(self.N)] for j in range(self.N)])

    def is_unitary(self) -> bool:
        return (self @ self.adjoint()).entries == UnitaryMatrix.identity(self.N).entries

    def apply(self, vector: Sequence):
        """U v for a vector of Polys or Gaussian rationals."""
        out = []
        for row in self.entries:
            acc = None
            for a, x in zip(row, vector):
                term = x.scale(a) if isinstance(x, Poly) else a * x
                acc = term if acc is None else acc + term
            out.append(acc)
        return out

    def __eq__(self, other):
        return isinstance(other, UnitaryMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def to_json(self):
        return [[str(Poly.constant(1, x)) for x in row] for row in self.entries]

    def __repr__(self):
        return f"UnitaryMatrix({self.to_json()})"


def sample_unitary(N: int, sampler: GenericSampler = GenericSampler(), index: int = 0) -> UnitaryMatrix:
    """Exact random unitary: a product of permutations, unit diagonals and Pythagorean rotations."""
    if N < 1:
        raise ValueError("N must be positive")
    rng = sampler.rng("unitary", index)
    U = UnitaryMatrix.identity(N)
    for _ in range(2 * N + 1):
        perm = rng.permutation(N).tolist()
        P = UnitaryMatrix([[ONE if perm[j] == k else ZERO for k in range(N)] for j in range(N)])
        phases = [_PHASES[int(x)] for x in rng.integers(0, len(_PHASES), size=N)]
        Dm = UnitaryMatrix([[phases[j] if j == k else ZERO for k in range(N)] for j in range(N)])
        U = U @ P @ Dm
        if N >= 2:
            j, k = sorted(int(x) for x in rng.choice(N, size=2, replace=False))
            c, s = _ROTATIONS[int(rng.integers(0, len(_ROTATIONS)))]
            R = [[ONE if a == b else ZERO for b in range(N)] for a in range(N)]
            R[j][j], R[j][k], R[k][j], R[k][k] = GaussianRational(c), GaussianRational(-s), GaussianRational(s), GaussianRational(c)
            U = U @ UnitaryMatrix(R)
    return U


def ideal_U(d: HoloDecomposition, U: Optional[UnitaryMatrix] = None) -> IdealPresentation:
    """The ideal (h, f - U g)."""
    f, g = extract_fg(d)
    N = len(f)
    if U is None:
        U = UnitaryMatrix.identity(N)
    if U.N != N:
        raise DimensionError(f"unitary is {U.N}x{U.N}, decomposition needs N={N}")
    gens = [d.h]
    if N:
        Ug = U.apply(g)
        gens += [fj - ugj for fj, ugj in zip(f, Ug)]
    return IdealPresentation(d.n, gens)


# q-positivity

@dataclass
class CurveVerdict:
    curve: CurveJet
    status: str  # "pass", "violation" or "precondition_failed"
    order: object = None
    coefficient: Optional[GaussianRational] = None
    reason: str = ""

    def to_json(self):
        out = {"curve": self.curve.to_json(), "status": self.status}
        if self.order is not None:
            out["order"] = "inf" if self.order == INF else self.order
        if self.coefficient is not None:
            out["coefficient"] = str(Poly.constant(1, self.coefficient))
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass
class QPositivityReport:
    q: int
    verdicts: List[CurveVerdict] = field(default_factory=list)

    @property
    def violation(self) -> Optional[CurveVerdict]:
        return next((v for v in self.verdicts if v.status == "violation"), None)

    @property
    def verdict(self) -> str:
        return "violation" if self.violation else "no violation found"

    def to_json(self):
        return {"q": self.q, "verdict": self.verdict, "curves": [v.to_json() for v in self.verdicts]}


def _vanishes(pb) -> bool:
    return pb.is_zero or pb.at_least


def check_q_positivity(
    r: RealPoly, q: int, curves: Sequence[CurveJet], forms: Sequence[LinearFormSet]
) -> QPositivityReport:
    """Search the given curves for a violation of q-positivity.

    ``forms`` is either one form set shared by all curves or one per curve.
    A curve is tested only when h vanishes along it and it lies in the zero
    locus of its forms.  Passing every curve is never a proof.
    """
    if not 1 <= q <= r.n:
        raise ValueError(f"q={q} out of range 1..{r.n}")
    if len(forms) == 1:
        forms = list(forms) * len(curves)
    if len(forms) != len(curves):
        raise ValueError("need one form set per curve or a single shared form set")
    h = polarize(r).h
    report = QPositivityReport(q)
    for phi, W in zip(curves, forms):
        if len(W) != q - 1:
            report.verdicts.append(CurveVerdict(phi, "precondition_failed", reason=f"form set has {len(W)} forms, need {q - 1}"))
            continue
        if not phi.is_gaussian():
            report.verdicts.append(CurveVerdict(phi, "precondition_failed", reason="curve coefficients outside Q(i)"))
            continue
        if not _vanishes(pullback(h, phi)):
            report.verdicts.append(CurveVerdict(phi, "precondition_failed", reason="h does not vanish along the curve"))
            continue
        if not all(_vanishes(pullback(w, phi)) for w in W.forms):
            report.verdicts.append(CurveVerdict(phi, "precondition_failed", reason="curve leaves the zero locus of the forms"))
            continue
        pb = pullback(r, phi)
        if pb.is_zero:
            report.verdicts.append(CurveVerdict(phi, "violation", INF, ZERO, "pullback vanishes identically"))
            continue
        if pb.at_least:
            report.verdicts.append(CurveVerdict(phi, "precondition_failed", reason="precision exhausted"))
            continue
        order = pb.order
        if order % 2:
            report.verdicts.append(CurveVerdict(phi, "violation", order, None, "odd order"))
            continue
        a = order // 2
        coeff = pb.coefficient((a, a)) or ZERO
        if not coeff:
            report.verdicts.append(CurveVerdict(phi, "violation", order, coeff, f"no |t|^{order} term"))
            continue
        report.verdicts.append(CurveVerdict(phi, "pass", order, coeff))
    return report
