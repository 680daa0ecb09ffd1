"""Zariski decomposition, volumes and one-parameter volume sweeps on surfaces.

The decomposition is the iterative negative-curve procedure: start with the
curves that ``D`` meets negatively, solve the Gram system making ``P``
orthogonal to them, add the curves ``P`` now meets negatively, repeat.

Everything is evaluated on affine families ``D0 + s*D1`` at ``s = 0+``: each
scalar is a pair ``(value, slope)`` compared lexicographically. With
``D1 = 0`` this is the plain decomposition of ``D0``; with ``D1 = -Z`` it is
the decomposition valid on the chamber just to the right of a wall, which is
what the sweep needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .delpezzo import SurfaceModel
from .errors import KStabError
from .exact import Poly, is_negative_definite, solve_linear
from .picard import DivisorClass, linear_combine, pair

Lex = tuple[Fraction, Fraction]


def _sign(x: Lex) -> int:
    v, s = x
    if v:
        return 1 if v > 0 else -1
    if s:
        return 1 if s > 0 else -1
    return 0


@dataclass(frozen=True)
class SurfaceDecomposition:
    positive: DivisorClass
    negative_support: tuple[tuple[DivisorClass, Fraction], ...]
    volume: Fraction

    @property
    def negative(self) -> DivisorClass:
        return linear_combine([(a, c) for c, a in self.negative_support], self.positive.basis)


@dataclass(frozen=True)
class _LexDecomposition:
    support: tuple[int, ...]
    a0: tuple[Fraction, ...]
    a1: tuple[Fraction, ...]
    p0: DivisorClass
    p1: DivisorClass


def _decompose_lex(model: SurfaceModel, d0: DivisorClass, d1: DivisorClass) -> _LexDecomposition:
    curves = model.negative_curves
    form = model.form
    b0 = [pair(form, d0, c) for c in curves]
    b1 = [pair(form, d1, c) for c in curves]
    support = sorted(i for i in range(len(curves)) if _sign((b0[i], b1[i])) < 0)
    a0: list[Fraction] = []
    a1: list[Fraction] = []
    p0, p1 = d0, d1
    for _ in range(len(curves) + 1):
        if support:
            g = [[pair(form, curves[i], curves[j]) for j in support] for i in support]
            if not is_negative_definite(g):
                raise KStabError("not-pseudoeffective", "negative part support is not negative definite")
            try:
                a0 = solve_linear(g, [b0[i] for i in support])
                a1 = solve_linear(g, [b1[i] for i in support])
            except KStabError as exc:
                raise KStabError("degenerate-support", exc.detail) from exc
            if any(_sign(x) < 0 for x in zip(a0, a1)):
                raise KStabError("not-pseudoeffective", "negative coefficient in the negative part")
            p0 = d0 - linear_combine(zip(a0, (curves[i] for i in support)), d0.basis)
            p1 = d1 - linear_combine(zip(a1, (curves[i] for i in support)), d0.basis)
        new = [
            j for j in range(len(curves))
            if j not in support and _sign((pair(form, p0, curves[j]), pair(form, p1, curves[j]))) < 0
        ]
        if not new:
            break
        support = sorted(set(support) | set(new))
    else:  # pragma: no cover - support growth is bounded by the curve list
        raise KStabError("degenerate-support", "support did not stabilise")
    anti = model.anticanonical
    for e in model.extra_generators + (anti,):
        if _sign((pair(form, p0, e), pair(form, p1, e))) < 0:
            raise KStabError("not-pseudoeffective", f"positive part meets {e} negatively")
    if _sign((pair(form, p0, p0), 2 * pair(form, p0, p1))) < 0:
        raise KStabError("not-pseudoeffective", "negative self-intersection of the positive part")
    return _LexDecomposition(tuple(support), tuple(a0), tuple(a1), p0, p1)


def decompose(model: SurfaceModel, D: DivisorClass) -> SurfaceDecomposition:
    """Zariski decomposition ``D = P + N``; raises ``not-pseudoeffective``."""
    if D.basis != model.basis:
        raise KStabError("basis-mismatch", "divisor is not on the model's basis")
    lex = _decompose_lex(model, D, model.basis.zero())
    support = tuple(
        (model.negative_curves[i], a) for i, a in zip(lex.support, lex.a0) if a != 0
    )
    return SurfaceDecomposition(lex.p0, support, pair(model.form, lex.p0, lex.p0))


def volume(model: SurfaceModel, D: DivisorClass) -> Fraction:
    """``P^2`` for pseudoeffective ``D``, else 0."""
    try:
        return decompose(model, D).volume
    except KStabError as exc:
        if exc.code != "not-pseudoeffective":
            raise
        return Fraction(0)


@dataclass(frozen=True)
class SweepChamber:
    lower: Fraction
    upper: Fraction
    support: tuple[DivisorClass, ...]
    vol: Poly
    events: tuple[tuple[str, DivisorClass], ...]
    """What reaches zero at ``upper``: ``("curve", C)`` for a new curve
    meeting ``P`` trivially, ``("coeff", C)`` for a support coefficient,
    ``("extra", C)`` for an extra Mori generator, ``("degree", -K)``."""


@dataclass(frozen=True)
class VolumeSweep:
    """Volumes of ``D0 - v*Z`` for ``v`` from ``start`` to the threshold."""

    direction_divisor: tuple[DivisorClass, DivisorClass]
    chambers: tuple[SweepChamber, ...]
    effective_threshold: Fraction

    @property
    def walls(self) -> tuple[Fraction, ...]:
        if not self.chambers:
            return (self.effective_threshold,)
        return (self.chambers[0].lower,) + tuple(c.upper for c in self.chambers)

    @property
    def supports(self) -> tuple[tuple[DivisorClass, ...], ...]:
        return tuple(c.support for c in self.chambers)

    def integral(self) -> Fraction:
        """``\\int vol dv`` from the start to the threshold."""
        from .exact import poly_integrate

        return sum((poly_integrate(c.vol, c.lower, c.upper) for c in self.chambers), Fraction(0))

    def __call__(self, v: Fraction) -> Fraction:
        for c in self.chambers:
            if c.lower <= v <= c.upper:
                return c.vol(v)
        return Fraction(0)


def sweep(model: SurfaceModel, D0: DivisorClass, Z: DivisorClass, start: Fraction = Fraction(0)) -> VolumeSweep:
    """Walk the chambers of ``v -> D0 - v*Z`` with exact walls."""
    if D0.basis != model.basis or Z.basis != model.basis:
        raise KStabError("basis-mismatch", "sweep classes are not on the model's basis")
    form = model.form
    curves = model.negative_curves
    anti = model.anticanonical
    v = Fraction(start)
    chambers: list[SweepChamber] = []
    for _ in range(4 * len(curves) + 16):
        try:
            lex = _decompose_lex(model, D0 - Z * v, -Z)
        except KStabError as exc:
            if exc.code != "not-pseudoeffective":
                raise
            return VolumeSweep((D0, Z), tuple(chambers), v)
        candidates: list[tuple[Fraction, str, DivisorClass]] = []

        def consider(x0: Fraction, x1: Fraction, kind: str, c: DivisorClass) -> None:
            if x1 < 0:
                candidates.append((-x0 / x1, kind, c))

        for j, c in enumerate(curves):
            if j not in lex.support:
                consider(pair(form, lex.p0, c), pair(form, lex.p1, c), "curve", c)
        for i, a0, a1 in zip(lex.support, lex.a0, lex.a1):
            consider(a0, a1, "coeff", curves[i])
        for e in model.extra_generators:
            consider(pair(form, lex.p0, e), pair(form, lex.p1, e), "extra", e)
        consider(pair(form, lex.p0, anti), pair(form, lex.p1, anti), "degree", anti)
        if not candidates:
            raise KStabError("unbounded-sweep", "volume never reaches zero along this direction")
        step = min(s for s, _, _ in candidates)
        events = tuple((k, c) for s, k, c in candidates if s == step)
        q0 = lex.p0 - lex.p1 * v
        q1 = lex.p1
        vol = Poly((pair(form, q0, q0), 2 * pair(form, q0, q1), pair(form, q1, q1)))
        support = tuple(curves[i] for i, a0, a1 in zip(lex.support, lex.a0, lex.a1) if (a0, a1) != (0, 0))
        chambers.append(SweepChamber(v, v + step, support, vol, events))
        v = v + step
    raise KStabError("unbounded-sweep", "too many chambers")  # pragma: no cover


def support_names(support: Sequence[DivisorClass]) -> tuple[str, ...]:
    return tuple(sorted(str(c) for c in support))
