"""Threefold intersection rings, chamber verification, restriction, 2D cones.

Threefold Zariski chambers are supplied by the caller and only verified here:
the negative part must have nonnegative coefficients, the positive part must
meet every supplied test curve nonnegatively, and the negative part must be
continuous across walls.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import KStabError
from .exact import PiecewisePoly, Poly, RationalLike, rat
from .picard import Basis, DivisorClass, linear_combine


@dataclass(frozen=True)
class CurveFunctional:
    """A curve class known only through its pairings with the basis divisors."""

    name: str
    pairings: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairings", tuple(rat(x) for x in self.pairings))

    def __call__(self, d: DivisorClass) -> Fraction:
        if len(d.coeffs) != len(self.pairings):
            raise KStabError("basis-mismatch", f"functional {self.name} has wrong length")
        return sum((a * b for a, b in zip(d.coeffs, self.pairings)), Fraction(0))


@dataclass(frozen=True)
class ThreefoldRing:
    basis: Basis
    table: tuple[tuple[tuple[int, int, int], Fraction], ...]
    test_curves: tuple[CurveFunctional, ...] = ()
    name: str = ""

    def __post_init__(self) -> None:
        n = len(self.basis)
        object.__setattr__(self, "_lookup", dict(self.table))
        keys = set(self._lookup)
        for k in itertools.combinations_with_replacement(range(n), 3):
            if k not in keys:
                names = ".".join(self.basis.names[i] for i in k)
                raise KStabError("invalid-triple-form", f"missing entry {names}")
        for c in self.test_curves:
            if len(c.pairings) != n:
                raise KStabError("basis-mismatch", f"test curve {c.name} has wrong length")

    @classmethod
    def from_entries(
        cls,
        basis: Basis,
        entries: Iterable[tuple[Sequence[str], RationalLike]],
        test_curves: Sequence[CurveFunctional] = (),
        name: str = "",
    ) -> "ThreefoldRing":
        """Build from ``(names, value)`` entries.

        Any ordering of a triple may be given; repeated orderings must agree.
        """
        values: dict[tuple[int, int, int], Fraction] = {}
        for names, value in entries:
            if len(names) != 3:
                raise KStabError("invalid-triple-form", f"entry {names} is not a triple")
            key = tuple(sorted(basis.index(s) for s in names))
            v = rat(value)
            if key in values and values[key] != v:
                raise KStabError("invalid-triple-form", f"asymmetric entries for {'.'.join(names)}")
            values[key] = v
        return cls(basis, tuple(sorted(values.items())), tuple(test_curves), name)

    def entry(self, i: int, j: int, k: int) -> Fraction:
        return self._lookup[tuple(sorted((i, j, k)))]


def triple(ring: ThreefoldRing, d1: DivisorClass, d2: DivisorClass, d3: DivisorClass) -> Fraction:
    for d in (d1, d2, d3):
        if d.basis != ring.basis:
            raise KStabError("basis-mismatch", f"class not on ring basis {ring.basis.label}")
    n = len(ring.basis)
    total = Fraction(0)
    for i in range(n):
        a = d1.coeffs[i]
        if not a:
            continue
        for j in range(n):
            b = d2.coeffs[j]
            if not b:
                continue
            for k in range(n):
                c = d3.coeffs[k]
                if c:
                    total += a * b * c * ring.entry(i, j, k)
    return total


@dataclass(frozen=True)
class PolyClass:
    """Divisor class whose coefficients are polynomials in ``u``."""

    basis: Basis
    coeffs: tuple[Poly, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != len(self.basis):
            raise KStabError("basis-mismatch", "coefficient count differs from basis length")

    @classmethod
    def of(cls, d: DivisorClass, p: Poly | RationalLike = 1) -> "PolyClass":
        p = p if isinstance(p, Poly) else Poly.const(p)
        return cls(d.basis, tuple(p * c for c in d.coeffs))

    @classmethod
    def affine(cls, d0: DivisorClass, d1: DivisorClass) -> "PolyClass":
        """``d0 + u*d1``."""
        if d0.basis != d1.basis:
            raise KStabError("basis-mismatch", "affine family mixes bases")
        return cls(d0.basis, tuple(Poly((a, b)) for a, b in zip(d0.coeffs, d1.coeffs)))

    def at(self, u: RationalLike) -> DivisorClass:
        u = rat(u)
        return DivisorClass(self.basis, tuple(p(u) for p in self.coeffs))

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.coeffs)

    def part(self, k: int) -> DivisorClass:
        """Coefficient class of ``u**k``."""
        return DivisorClass(self.basis, tuple(p.coeff(k) for p in self.coeffs))

    def __add__(self, other: "PolyClass") -> "PolyClass":
        if other.basis != self.basis:
            raise KStabError("basis-mismatch", "sum mixes bases")
        return PolyClass(self.basis, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "PolyClass") -> "PolyClass":
        if other.basis != self.basis:
            raise KStabError("basis-mismatch", "difference mixes bases")
        return PolyClass(self.basis, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def pair_with(self, f: CurveFunctional) -> Poly:
        return sum((p * w for p, w in zip(self.coeffs, f.pairings)), Poly())


def triple_poly(ring: ThreefoldRing, a: PolyClass, b: PolyClass, c: PolyClass) -> Poly:
    n = len(ring.basis)
    total = Poly()
    for i, j, k in itertools.product(range(n), repeat=3):
        t = ring.entry(i, j, k)
        if t and not (a.coeffs[i].is_zero() or b.coeffs[j].is_zero() or c.coeffs[k].is_zero()):
            total = total + a.coeffs[i] * b.coeffs[j] * c.coeffs[k] * t
    return total


NegativePart = tuple[tuple[DivisorClass, Poly], ...]


@dataclass(frozen=True)
class Chamber:
    lower: Fraction
    upper: Fraction
    negative: NegativePart = ()


@dataclass(frozen=True)
class ChamberSpec1D:
    ring: ThreefoldRing
    divisor: PolyClass
    chambers: tuple[Chamber, ...]
    tau: Fraction
    name: str = ""
    verified: bool = False

    def negative_class(self, k: int) -> PolyClass:
        out = PolyClass.of(self.ring.basis.zero())
        for c, p in self.chambers[k].negative:
            out = out + PolyClass.of(c, p)
        return out

    def positive(self, k: int) -> PolyClass:
        """``P(u) = D(u) - N(u)`` on chamber ``k``."""
        return self.divisor - self.negative_class(k)


def _fail(spec: ChamberSpec1D, a: Fraction, b: Fraction, witness: str) -> KStabError:
    return KStabError("invalid-chamber", f"{spec.name or 'spec'} on [{a}, {b}]: {witness}")


def _argmin(p: Poly, a: Fraction, b: Fraction) -> Fraction:
    pts = [a, b]
    if p.degree == 2:
        vx = -p.coeffs[1] / (2 * p.coeffs[2])
        if a < vx < b:
            pts.append(vx)
    return min(pts, key=p)


def verify_chambers(spec: ChamberSpec1D, extra_curves: Sequence[CurveFunctional] = ()) -> ChamberSpec1D:
    """Check the chamber invariants exactly and return it marked verified."""
    ring = spec.ring
    if spec.divisor.basis != ring.basis:
        raise KStabError("basis-mismatch", "divisor family is not on the ring basis")
    if spec.divisor.degree > 1:
        raise KStabError("invalid-chamber", "divisor family must be affine in u")
    if not spec.chambers:
        raise KStabError("invalid-chamber", "no chambers")
    prev = Fraction(0)
    for ch in spec.chambers:
        if ch.lower != prev or ch.upper <= ch.lower:
            raise _fail(spec, ch.lower, ch.upper, f"intervals do not partition [0, {spec.tau}]")
        prev = ch.upper
    if prev != spec.tau:
        raise _fail(spec, spec.chambers[-1].lower, prev, f"last chamber does not end at tau = {spec.tau}")
    curves = tuple(ring.test_curves) + tuple(extra_curves)
    for k, ch in enumerate(spec.chambers):
        a, b = ch.lower, ch.upper
        for c, p in ch.negative:
            if c.basis != ring.basis:
                raise KStabError("basis-mismatch", "negative part class not on the ring basis")
            if p.degree > 2:
                raise _fail(spec, a, b, f"coefficient of {c} has degree {p.degree} > 2")
            if p.min_on(a, b) < 0:
                raise _fail(spec, a, b, f"negative coefficient at u={_argmin(p, a, b)} for {c}")
        pos = spec.positive(k)
        for f in curves:
            q = pos.pair_with(f)
            if q.degree > 1:
                raise _fail(spec, a, b, f"pairing with {f.name} has degree {q.degree} > 1")
            for x in (a, b):
                if q(x) < 0:
                    raise _fail(spec, a, b, f"P meets {f.name} negatively at u={x}")
        if k:
            left = spec.negative_class(k - 1).at(a)
            right = spec.negative_class(k).at(a)
            if left != right:
                raise _fail(spec, a, b, f"negative part jumps at u={a}: {left} vs {right}")
    return replace(spec, verified=True)


def volume_poly(spec: ChamberSpec1D) -> PiecewisePoly:
    """``vol(D(u)) = P(u)^3`` per chamber."""
    if not spec.verified:
        raise KStabError("unverified-input", "verify_chambers must run first")
    bps = [spec.chambers[0].lower] + [c.upper for c in spec.chambers]
    pieces = []
    for k in range(len(spec.chambers)):
        p = spec.positive(k)
        pieces.append(triple_poly(spec.ring, p, p, p))
    return PiecewisePoly(tuple(bps), tuple(pieces), continuous=True)


@dataclass(frozen=True)
class RestrictionMap:
    """Linear map from the ring basis to a surface basis; ``rows[i]`` is the image of basis element ``i``."""

    source: Basis
    target: Basis
    rows: tuple[DivisorClass, ...]
    components: tuple[tuple[DivisorClass, tuple[tuple[DivisorClass, int], ...]], ...] = ()
    """Known splittings ``source class -> ((curve, multiplicity), ...)`` of reducible restrictions."""

    def __post_init__(self) -> None:
        if len(self.rows) != len(self.source):
            raise KStabError("basis-mismatch", "restriction needs one image per source name")
        for r in self.rows:
            if r.basis != self.target:
                raise KStabError("basis-mismatch", "restriction image not on target basis")


def restrict(m: RestrictionMap, d: DivisorClass) -> DivisorClass:
    if d.basis != m.source:
        raise KStabError("basis-mismatch", f"class not on source basis {m.source.label}")
    out = m.target.zero()
    for c, r in zip(d.coeffs, m.rows):
        if c:
            out = out + r * c
    return out


def restrict_components(m: RestrictionMap, d: DivisorClass) -> tuple[tuple[DivisorClass, int], ...]:
    """Irreducible pieces of the restriction of an irreducible divisor ``d``.

    Without a declared splitting the restriction counts as one curve.
    """
    for src, parts in m.components:
        if src == d:
            if linear_combine([(k, c) for c, k in parts], m.target) != restrict(m, d):
                raise KStabError("invalid-restriction", f"declared pieces of {d} do not sum to its restriction")
            return parts
    return ((restrict(m, d), 1),)


def restrict_poly(m: RestrictionMap, d: PolyClass) -> PolyClass:
    if d.basis != m.source:
        raise KStabError("basis-mismatch", f"class not on source basis {m.source.label}")
    coeffs = [Poly()] * len(m.target)
    for p, r in zip(d.coeffs, m.rows):
        for j, c in enumerate(r.coeffs):
            if c:
                coeffs[j] = coeffs[j] + p * c
    return PolyClass(m.target, tuple(coeffs))


@dataclass(frozen=True)
class ConeDecision:
    inside: bool
    coefficients: tuple[Fraction, Fraction]


def cone_member_2d(rays: tuple[DivisorClass, DivisorClass], d: DivisorClass) -> ConeDecision:
    """Solve ``d = a*r1 + b*r2`` exactly; inside iff ``a, b >= 0``."""
    r1, r2 = rays
    if r1.basis != r2.basis or d.basis != r1.basis:
        raise KStabError("basis-mismatch", "cone classes on different bases")
    n = len(r1.coeffs)
    for i, j in itertools.combinations(range(n), 2):
        det = r1.coeffs[i] * r2.coeffs[j] - r1.coeffs[j] * r2.coeffs[i]
        if det:
            a = (d.coeffs[i] * r2.coeffs[j] - d.coeffs[j] * r2.coeffs[i]) / det
            b = (r1.coeffs[i] * d.coeffs[j] - r1.coeffs[j] * d.coeffs[i]) / det
            if r1 * a + r2 * b != d:
                raise KStabError("not-in-span", f"{d} is not a combination of the rays")
            return ConeDecision(a >= 0 and b >= 0, (a, b))
    raise KStabError("degenerate-cone", "rays are linearly dependent")


def max_degree(capacity: RationalLike, lambda_min: RationalLike) -> int:
    """Largest integer ``d`` with ``lambda*d <= capacity`` for some ``lambda > lambda_min``."""
    c, lam = rat(capacity), rat(lambda_min)
    if lam <= 0:
        raise KStabError("degenerate-cone", "lambda_min must be positive")
    q = c / lam
    d = q.numerator // q.denominator
    return d - 1 if d == q else d
