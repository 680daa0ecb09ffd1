"""Exact rationals, dense univariate polynomials and piecewise polynomials.

Scalars are :class:`fractions.Fraction`, which is always stored in lowest
terms with a positive denominator, so equality and hashing are canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import KStabError

Rational = Fraction
RationalLike = Union[Fraction, int, str]


def rat(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: a float in a case file or an API call is almost
    always a transcription mistake for a fraction.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise KStabError("bad-rational", "empty string")
        try:
            return Fraction(s)
        except ValueError as exc:
            raise KStabError("bad-rational", repr(x)) from exc
    raise TypeError(f"cannot build an exact rational from {type(x).__name__}")


def fmt(x: Fraction) -> str:
    """``p/q`` text form (``p`` alone for integers)."""
    return str(x)


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Poly:
    """Dense polynomial; ``coeffs[k]`` multiplies ``x**k``."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _trim([rat(c) for c in self.coeffs]))

    @classmethod
    def const(cls, c: RationalLike) -> "Poly":
        return cls((rat(c),))

    @classmethod
    def x(cls) -> "Poly":
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def affine(cls, c0: RationalLike, c1: RationalLike) -> "Poly":
        return cls((rat(c0), rat(c1)))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __call__(self, x: RationalLike) -> Fraction:
        return poly_eval(self, rat(x))

    def __add__(self, other: "Poly | RationalLike") -> "Poly":
        o = _as_poly(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(tuple(self.coeff(k) + o.coeff(k) for k in range(n)))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly | RationalLike") -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other: RationalLike) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other: "Poly | RationalLike") -> "Poly":
        o = _as_poly(other)
        if self.is_zero() or o.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def derivative(self) -> "Poly":
        return Poly(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def antiderivative(self) -> "Poly":
        return Poly((Fraction(0),) + tuple(c / (k + 1) for k, c in enumerate(self.coeffs)))

    def compose(self, inner: "Poly") -> "Poly":
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def min_on(self, a: RationalLike, b: RationalLike) -> Fraction:
        """Exact minimum on ``[a, b]`` for degree at most 2.

        The extremum of a quadratic sits at its rational vertex, so the
        minimum is attained at an endpoint or there.
        """
        a, b = rat(a), rat(b)
        if self.degree > 2:
            raise KStabError("degree-too-high", f"min_on needs degree <= 2, got {self.degree}")
        pts = [a, b]
        if self.degree == 2:
            vertex = -self.coeffs[1] / (2 * self.coeffs[2])
            if a < vertex < b:
                pts.append(vertex)
        return min(self(p) for p in pts)

    def max_on(self, a: RationalLike, b: RationalLike) -> Fraction:
        return -(-self).min_on(a, b)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("u" if k == 1 else f"u^{k}")
            if mono and abs(c) == 1:
                term = mono
            else:
                term = f"{abs(c)}{'*' if mono else ''}{mono}"
            parts.append(("-" if c < 0 else "+", term))
        sign, first = parts[0]
        text = ("-" if sign == "-" else "") + first
        for sign, term in parts[1:]:
            text += f" {sign} {term}"
        return text


def _as_poly(p: "Poly | RationalLike") -> Poly:
    return p if isinstance(p, Poly) else Poly.const(p)


def poly_eval(p: Poly, x: Fraction) -> Fraction:
    """Horner evaluation."""
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_integrate(p: Poly, a: RationalLike, b: RationalLike) -> Fraction:
    """Exact definite integral of ``p`` over ``[a, b]``."""
    a, b = rat(a), rat(b)
    if a > b:
        raise KStabError("empty-interval", f"lower bound {a} exceeds upper bound {b}")
    if a == b:
        return Fraction(0)
    anti = p.antiderivative()
    return poly_eval(anti, b) - poly_eval(anti, a)


def poly_interpolate(points: Sequence[tuple[RationalLike, RationalLike]], degree: int) -> Poly:
    """Unique polynomial of degree <= ``degree`` through ``degree + 1`` points.

    Solved as a Vandermonde system by exact Gaussian elimination.
    """
    if len(points) != degree + 1:
        raise KStabError("bad-sample-count", f"need {degree + 1} points, got {len(points)}")
    xs = [rat(x) for x, _ in points]
    ys = [rat(y) for _, y in points]
    if len(set(xs)) != len(xs):
        raise KStabError("singular-system", "duplicate abscissae")
    rows = [[x**k for k in range(degree + 1)] + [y] for x, y in zip(xs, ys)]
    return Poly(tuple(solve_linear([r[:-1] for r in rows], [r[-1] for r in rows])))


def solve_linear(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve a square system exactly; raises ``singular-system``."""
    n = len(matrix)
    m = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise KStabError("singular-system", "matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / pv
                rr, rc = m[r], m[col]
                for k in range(col, n + 1):
                    rr[k] -= f * rc[k]
    return [m[i][n] / m[i][i] for i in range(n)]


@dataclass(frozen=True)
class PiecewisePoly:
    """Polynomial pieces on consecutive rational intervals.

    ``continuous`` records whether the function is asserted continuous at
    interior breakpoints; construction checks it when set.
    """

    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Poly, ...]
    continuous: bool = False

    def __post_init__(self) -> None:
        bps = tuple(rat(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if len(self.pieces) != len(bps) - 1:
            raise KStabError("bad-piecewise", "need exactly one piece per interval")
        if any(b <= a for a, b in zip(bps, bps[1:])):
            raise KStabError("bad-piecewise", "breakpoints must be strictly increasing")
        if self.continuous:
            for k in range(1, len(bps) - 1):
                left, right = self.pieces[k - 1](bps[k]), self.pieces[k](bps[k])
                if left != right:
                    raise KStabError(
                        "discontinuous", f"jump at {bps[k]}: {left} vs {right}"
                    )

    @property
    def intervals(self) -> list[tuple[Fraction, Fraction]]:
        return list(zip(self.breakpoints, self.breakpoints[1:]))

    def __call__(self, x: RationalLike) -> Fraction:
        """Evaluate; at an interior breakpoint the left piece wins."""
        x = rat(x)
        for (a, b), p in zip(self.intervals, self.pieces):
            if a <= x <= b:
                return p(x)
        raise KStabError("out-of-domain", f"{x} outside [{self.breakpoints[0]}, {self.breakpoints[-1]}]")

    def items(self) -> Iterable[tuple[Fraction, Fraction, Poly]]:
        for (a, b), p in zip(self.intervals, self.pieces):
            yield a, b, p


def piecewise_integrate(f: PiecewisePoly) -> Fraction:
    return sum((poly_integrate(p, a, b) for a, b, p in f.items()), Fraction(0))


def is_negative_definite(matrix: Sequence[Sequence[Fraction]]) -> bool:
    """Exact test via symmetric elimination without pivoting.

    A symmetric matrix is negative definite iff every pivot of its
    LDL^T factorisation is negative; the empty matrix counts as definite.
    """
    n = len(matrix)
    m = [[rat(x) for x in row] for row in matrix]
    for k in range(n):
        piv = m[k][k]
        if piv >= 0:
            return False
        for i in range(k + 1, n):
            f = m[i][k] / piv
            if f:
                for j in range(k + 1, n):
                    m[i][j] -= f * m[k][j]
    return True
