"""Del Pezzo surface models and their (-1)-curves.

Only points in general position are modelled, so for degree at least 2 every
integral class with ``C^2 = -1`` and ``K.C = -1`` is an irreducible curve and
the Mori cone is spanned by these classes (plus the extra rulings listed for
degree 8, where there are too few (-1)-curves to span it).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import KStabError
from .exact import is_negative_definite, solve_linear
from .picard import Basis, DivisorClass, IntersectionForm, pair


@dataclass(frozen=True)
class SurfaceModel:
    form: IntersectionForm
    canonical: DivisorClass
    negative_curves: tuple[DivisorClass, ...]
    degree: int
    extra_generators: tuple[DivisorClass, ...] = ()
    name: str = ""

    @property
    def basis(self) -> Basis:
        return self.form.basis

    @property
    def anticanonical(self) -> DivisorClass:
        return -self.canonical

    @property
    def mori_generators(self) -> tuple[DivisorClass, ...]:
        return self.negative_curves + self.extra_generators

    def pair(self, d: DivisorClass, c: DivisorClass) -> Fraction:
        return pair(self.form, d, c)

    def parse(self, text: str) -> DivisorClass:
        return self.basis.parse(text)


def _gram_inverse(g: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(g)
    cols = [solve_linear(g, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def enumerate_negative_curves(form: IntersectionForm, K: DivisorClass) -> list[DivisorClass]:
    """All integral ``C`` with ``C^2 = -1`` and ``K.C = -1``, by bounded search.

    Write ``A = -K`` and ``d = A^2``. Any solution is ``C = A/d + w`` with
    ``w`` orthogonal to ``A`` and ``w^2 = -1 - 1/d``. The form is negative
    definite on ``A``'s orthogonal complement, so Cauchy-Schwarz bounds each
    coordinate ``C.x_i`` against the dual basis ``x_i`` to an explicit interval.
    One coordinate is then fixed by the linear condition.
    """
    basis = form.basis
    n = len(basis)
    g = form.gram
    A = -K
    if any(x.denominator != 1 for row in g for x in row) or not A.is_integral():
        raise KStabError("unsupported-model", "lattice and canonical class must be integral")
    d = pair(form, A, A)
    if not 2 <= d <= 8:
        raise KStabError("unsupported-model", f"K^2 = {d} outside the supported range 2..8")
    gA = form.dual(A)
    twisted = [[g[i][j] - 2 * gA[i] * gA[j] / d for j in range(n)] for i in range(n)]
    if not is_negative_definite(twisted):
        raise KStabError("unsupported-model", "form is not hyperbolic with -K on the positive side")

    inv = _gram_inverse(g)
    ranges: list[range] = []
    slack = 1e-9
    for i in range(n):
        xstar = basis.vector([inv[k][i] for k in range(n)])
        mu = pair(form, xstar, A) / d
        y2 = pair(form, xstar, xstar) - mu * mu * d
        r = math.sqrt(float(-y2 * (1 + Fraction(1) / d))) if y2 < 0 else 0.0
        lo = math.ceil(float(mu) - r - slack)
        hi = math.floor(float(mu) + r + slack)
        ranges.append(range(lo, hi + 1))

    piv = min(range(n), key=lambda j: (gA[j] == 0, abs(gA[j]), j))
    if gA[piv] == 0:
        raise KStabError("unsupported-model", "canonical class is zero")
    others = [j for j in range(n) if j != piv]
    found: list[DivisorClass] = []
    for vals in itertools.product(*(ranges[j] for j in others)):
        rest = sum((gA[j] * v for j, v in zip(others, vals)), Fraction(0))
        cp = (1 - rest) / gA[piv]
        if cp.denominator != 1 or int(cp) not in ranges[piv]:
            continue
        coeffs = [Fraction(0)] * n
        for j, v in zip(others, vals):
            coeffs[j] = Fraction(v)
        coeffs[piv] = cp
        c = DivisorClass(basis, tuple(coeffs))
        if pair(form, c, c) == -1:
            found.append(c)
    found.sort(key=lambda c: tuple(-x for x in c.coeffs))
    return found


def _model(basis: Basis, gram, K: DivisorClass, extra: tuple[DivisorClass, ...], name: str) -> SurfaceModel:
    form = IntersectionForm(basis, gram)
    curves = tuple(enumerate_negative_curves(form, K))
    return SurfaceModel(form, K, curves, int(pair(form, K, K)), extra, name)


def build_blowup_plane(n: int, names: Sequence[str] | None = None, line: str = "l") -> SurfaceModel:
    """Plane blown up at ``n`` general points; basis ``(l, e1..en)``."""
    if not isinstance(n, int) or not 1 <= n <= 7:
        raise KStabError("unsupported-model", f"plane blowup needs 1 <= n <= 7, got {n}")
    exc = tuple(names) if names is not None else tuple(f"e{i}" for i in range(1, n + 1))
    if len(exc) != n:
        raise KStabError("unsupported-model", "wrong number of exceptional names")
    basis = Basis((line,) + exc, f"P2#{n}")
    gram = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    gram[0][0] = Fraction(1)
    for i in range(1, n + 1):
        gram[i][i] = Fraction(-1)
    K = basis.vector([-3] + [1] * n)
    extra = (basis.vector([1, -1]),) if n == 1 else ()
    return _model(basis, gram, K, extra, f"plane blown up at {n} points")


def build_blowup_quadric(k: int, names: Sequence[str] | None = None, rulings: tuple[str, str] = ("l1", "l2")) -> SurfaceModel:
    """Quadric surface blown up at ``k`` general points; basis ``(l1, l2, e1..ek)``."""
    if not isinstance(k, int) or not 0 <= k <= 6:
        raise KStabError("unsupported-model", f"quadric blowup needs 0 <= k <= 6, got {k}")
    exc = tuple(names) if names is not None else tuple(f"e{i}" for i in range(1, k + 1))
    if len(exc) != k:
        raise KStabError("unsupported-model", "wrong number of exceptional names")
    basis = Basis(tuple(rulings) + exc, f"P1xP1#{k}")
    m = k + 2
    gram = [[Fraction(0)] * m for _ in range(m)]
    gram[0][1] = gram[1][0] = Fraction(1)
    for i in range(2, m):
        gram[i][i] = Fraction(-1)
    K = basis.vector([-2, -2] + [1] * k)
    extra = (basis.unit(rulings[0]), basis.unit(rulings[1])) if k == 0 else ()
    return _model(basis, gram, K, extra, f"quadric blown up at {k} points")
