"""S-invariants of divisors and curves, and beta.

``s_curve`` evaluates the two-term formula for a surface ``Y`` in the
threefold and a curve ``Z`` on it::

    first  = (3/V) * int (P(u)^2 . Y) * ord_Z(N(u)|_Y) du
    second = (3/V) * int int vol(P(u)|_Y - v Z) dv du

The inner integral ``F(u)`` is a cubic on every region where the sequence of
inner Zariski chambers is constant. Such regions are found by sampling,
fingerprinting the support sequence, and solving exactly for the values of
``u`` where two inner walls meet.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .delpezzo import SurfaceModel
from .errors import KStabError
from .exact import Poly, poly_integrate, poly_interpolate, piecewise_integrate, solve_linear
from .picard import DivisorClass, pair
from .threefold import (
    ChamberSpec1D,
    PolyClass,
    RestrictionMap,
    restrict_components,
    restrict_poly,
    triple_poly,
    volume_poly,
)
from .zariski import support_names, sweep


def tau(spec: ChamberSpec1D) -> Fraction:
    """Pseudoeffective threshold; checks that the volume vanishes there."""
    vol = volume_poly(spec)
    if vol(spec.tau) != 0:
        raise KStabError("not-threshold", f"volume at tau = {spec.tau} is {vol(spec.tau)}")
    return spec.tau


def s_divisor(spec: ChamberSpec1D, anticanonical_volume: Fraction) -> Fraction:
    if anticanonical_volume <= 0:
        raise KStabError("bad-volume", "anticanonical volume must be positive")
    return piecewise_integrate(volume_poly(spec)) / anticanonical_volume


def ord_along(
    n_restricted: Sequence[tuple[DivisorClass, Poly]],
    Z: DivisorClass,
    model: SurfaceModel,
    irreducible: Sequence[DivisorClass] = (),
) -> Poly:
    """Coefficient of ``Z`` in a negative part already split into irreducible curves."""
    if Z not in model.negative_curves and Z not in model.extra_generators and Z not in irreducible:
        raise KStabError("unknown-curve", f"{Z} is not a known irreducible curve")
    out = Poly()
    for c, p in n_restricted:
        if c == Z:
            out = out + p
    return out


@dataclass(frozen=True)
class BetaResult:
    log_discrepancy: Fraction
    s_value: Fraction
    beta: Fraction


def beta(A: Fraction, S: Fraction) -> BetaResult:
    return BetaResult(A, S, A - S)


@dataclass(frozen=True)
class OuterPiece:
    lower: Fraction
    upper: Fraction
    inner: Poly
    """``F(u) = int vol dv`` on this piece."""
    supports: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class SCurveResult:
    first_term: Fraction
    second_term: Fraction
    total: Fraction
    outer_walls: tuple[Fraction, ...]
    audit: tuple[OuterPiece, ...] = ()
    computed_first_term: Fraction | None = None
    """First term from the restricted negative part, when a bound override was used instead."""
    ord_polys: tuple[Poly, ...] = field(default=())


# --- inner wall functions -------------------------------------------------

Affine2 = tuple[Fraction, Fraction, Fraction]  # alpha + beta*u + gamma*t


def _chamber_expressions(
    model: SurfaceModel, B: PolyClass, Z: DivisorClass, support: Sequence[DivisorClass]
) -> list[Affine2]:
    """Affine expressions in ``(u, t)`` whose zeros can end a chamber with this support."""
    form = model.form
    b0, b1 = B.part(0), B.part(1)
    cs = list(support)
    p0, p1, pz = b0, b1, Z
    coeffs: list[Affine2] = []
    if cs:
        g = [[pair(form, x, y) for y in cs] for x in cs]
        a0 = solve_linear(g, [pair(form, b0, c) for c in cs])
        a1 = solve_linear(g, [pair(form, b1, c) for c in cs])
        az = solve_linear(g, [pair(form, Z, c) for c in cs])
        for c, x0, x1, xz in zip(cs, a0, a1, az):
            p0, p1, pz = p0 - c * x0, p1 - c * x1, pz - c * xz
            coeffs.append((x0, x1, -xz))
    exprs = list(coeffs)
    targets = [c for c in model.negative_curves if c not in cs]
    targets += list(model.extra_generators) + [model.anticanonical]
    for x in targets:
        exprs.append((pair(form, p0, x), pair(form, p1, x), -pair(form, pz, x)))
    return exprs


def _wall(e: Affine2) -> Poly:
    alpha, beta_, gamma = e
    return Poly((-alpha / gamma, -beta_ / gamma))


def _crossings(
    model: SurfaceModel, B: PolyClass, Z: DivisorClass, sw: VolumeSweep, u: Fraction, a: Fraction, b: Fraction
) -> set[Fraction]:
    """Values in ``(a, b)`` where the inner chamber structure seen at ``u`` can change.

    These are the points where the first wall of some chamber switches from
    one candidate to another, and where a chamber shrinks to nothing.
    """
    roots: set[Fraction] = set()

    def add_root(p: Poly) -> None:
        if p.degree == 1:
            r = -p.coeffs[0] / p.coeffs[1]
            if a < r < b:
                roots.add(r)

    lower = Poly.const(sw.chambers[0].lower) if sw.chambers else None
    for ch in sw.chambers:
        walls = [_wall(e) for e in _chamber_expressions(model, B, Z, ch.support) if e[2] < 0]
        if not walls:
            continue
        roots |= _envelope_breaks(walls, a, b)
        env = min(walls, key=lambda w: (w(u), w.coeff(1)))
        if lower is not None:
            add_root(env - lower)
        lower = env
    return roots


def _envelope_breaks(lines: Sequence[Poly], a: Fraction, b: Fraction) -> set[Fraction]:
    """Interior points of ``(a, b)`` where the minimum of affine functions changes branch."""
    breaks: set[Fraction] = set()
    x = a
    cur = min(lines, key=lambda w: (w(x), w.coeff(1)))
    while True:
        best = None
        for w in lines:
            dslope = w.coeff(1) - cur.coeff(1)
            if dslope < 0:
                r = (cur.coeff(0) - w.coeff(0)) / dslope
                if r > x and (best is None or r < best):
                    best = r
        if best is None or best >= b:
            return breaks
        breaks.add(best)
        x = best
        cur = min(lines, key=lambda w: (w(x), w.coeff(1)))


def _mid(a: Fraction, b: Fraction) -> Fraction:
    return (a + b) / 2


class _OuterIntegrator:
    def __init__(self, model: SurfaceModel, Z: DivisorClass, samples: int, max_depth: int) -> None:
        self.model, self.Z = model, Z
        self.samples, self.max_depth = samples, max_depth
        self.pieces: list[OuterPiece] = []

    def run(self, B: PolyClass, a: Fraction, b: Fraction, depth: int = 0) -> Fraction:
        if depth > self.max_depth:
            raise KStabError("chamber-refinement-exhausted", f"no stable inner chambers on [{a}, {b}]")
        n = self.samples
        us = [a + (b - a) * Fraction(k, n + 1) for k in range(1, n + 1)]
        sweeps = [sweep(self.model, B.at(u), self.Z) for u in us]
        roots: set[Fraction] = set()
        for u, sw in zip(us, sweeps):
            roots |= _crossings(self.model, B, self.Z, sw, u, a, b)
        if roots:
            return self._split(B, [a] + sorted(roots) + [b], depth)
        prints = [tuple(support_names(s) for s in sw.supports) for sw in sweeps]
        if any(p != prints[0] for p in prints):
            k = next(i for i in range(1, n) if prints[i] != prints[i - 1])
            return self._split(B, [a, _mid(us[k - 1], us[k]), b], depth)
        values = [sw.integral() for sw in sweeps]
        fit = poly_interpolate(list(zip(us[:4], values[:4])), 3)
        if any(fit(u) != v for u, v in zip(us[4:], values[4:])):
            return self._split(B, [a, _mid(a, b), b], depth)
        self.pieces.append(OuterPiece(a, b, fit, prints[0]))
        return poly_integrate(fit, a, b)

    def _split(self, B: PolyClass, cuts: list[Fraction], depth: int) -> Fraction:
        return sum((self.run(B, lo, hi, depth + 1) for lo, hi in zip(cuts, cuts[1:])), Fraction(0))


def s_curve(
    spec: ChamberSpec1D,
    model: SurfaceModel,
    rmap: RestrictionMap,
    Y: DivisorClass,
    Z: DivisorClass,
    anticanonical_volume: Fraction,
    ord_bounds: Sequence[Poly | None] | None = None,
    irreducible: Sequence[DivisorClass] = (),
    samples: int = 6,
    max_depth: int = 8,
) -> SCurveResult:
    """Two-term S-invariant of the curve ``Z`` on ``Y``.

    ``ord_bounds`` optionally replaces, chamber by chamber, the computed
    ``ord_Z`` by a supplied upper bound; the computed value is then kept in
    ``computed_first_term``.
    """
    if not spec.verified:
        raise KStabError("unverified-input", "verify_chambers must run first")
    if samples < 6:
        raise KStabError("bad-sample-count", "need at least 6 samples (4 to fit, 2 to validate)")
    V = anticanonical_volume
    Yp = PolyClass.of(Y)
    integ = _OuterIntegrator(model, Z, samples, max_depth)
    first = Fraction(0)
    first_bound = Fraction(0)
    second = Fraction(0)
    ords: list[Poly] = []
    for k, ch in enumerate(spec.chambers):
        P = spec.positive(k)
        if P.degree > 1:
            raise KStabError("invalid-chamber", "positive part must be affine in u")
        weight = triple_poly(spec.ring, P, P, Yp)
        pieces = []
        for c, p in ch.negative:
            for piece, mult in restrict_components(rmap, c):
                pieces.append((piece, p * mult))
        o = ord_along(pieces, Z, model, irreducible)
        ords.append(o)
        first += poly_integrate(weight * o, ch.lower, ch.upper)
        bound = ord_bounds[k] if ord_bounds is not None else None
        first_bound += poly_integrate(weight * (o if bound is None else bound), ch.lower, ch.upper)
        B = restrict_poly(rmap, P)
        second += integ.run(B, ch.lower, ch.upper)
    scale = Fraction(3) / V
    first, first_bound, second = first * scale, first_bound * scale, second * scale
    used = first_bound if ord_bounds is not None else first
    walls = sorted({p.lower for p in integ.pieces} | {p.upper for p in integ.pieces})
    return SCurveResult(
        used,
        second,
        used + second,
        tuple(walls),
        tuple(integ.pieces),
        first if ord_bounds is not None else None,
        tuple(ords),
    )
