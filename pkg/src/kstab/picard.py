"""Named bases, divisor classes as rational vectors, and surface pairings."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import KStabError
from .exact import RationalLike, rat


@dataclass(frozen=True)
class Basis:
    """Ordered symbol names. ``label`` distinguishes lattices that share names."""

    names: tuple[str, ...]
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise KStabError("bad-basis", f"duplicate names in {self.names}")

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KStabError("unresolved-symbol", f"{name!r} not in basis {self.label or self.names}") from None

    def zero(self) -> "DivisorClass":
        return DivisorClass(self, (Fraction(0),) * len(self))

    def unit(self, name: str) -> "DivisorClass":
        c = [Fraction(0)] * len(self)
        c[self.index(name)] = Fraction(1)
        return DivisorClass(self, tuple(c))

    def vector(self, coeffs: Sequence[RationalLike]) -> "DivisorClass":
        return DivisorClass(self, tuple(rat(c) for c in coeffs))

    def parse(self, text: str) -> "DivisorClass":
        return parse_class(self, text)


@dataclass(frozen=True)
class DivisorClass:
    basis: Basis
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != len(self.basis):
            raise KStabError("basis-mismatch", "coefficient count differs from basis length")

    def _check(self, other: "DivisorClass") -> None:
        if other.basis != self.basis:
            raise KStabError("basis-mismatch", f"{self.basis.label} vs {other.basis.label}")

    def __getitem__(self, name: str) -> Fraction:
        return self.coeffs[self.basis.index(name)]

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(self.basis, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(self.basis, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.basis, tuple(-a for a in self.coeffs))

    def __mul__(self, t: RationalLike) -> "DivisorClass":
        t = rat(t)
        return DivisorClass(self.basis, tuple(t * a for a in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, t: RationalLike) -> "DivisorClass":
        return self * (1 / rat(t))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __str__(self) -> str:
        parts = []
        for name, c in zip(self.basis.names, self.coeffs):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else (f"{abs(c)}" if abs(c).denominator == 1 else f"({abs(c)})")
            parts.append(("-" if c < 0 else "+", f"{mag}{name}"))
        if not parts:
            return "0"
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, term in parts[1:]:
            text += f" {sign} {term}"
        return text


_TERM = re.compile(
    r"\s*([+-])?\s*(?:\(\s*(-?\d+(?:/\d+)?)\s*\)|(\d+(?:/\d+)?))?\s*\*?\s*([A-Za-z_][A-Za-z0-9_]*)?\s*"
)


def parse_class(basis: Basis, text: str) -> DivisorClass:
    """Parse ``"8l - 3e1 - (1/2)e0"`` style linear expressions.

    A bare number with no symbol is rejected; ``"0"`` is the zero class.
    """
    src = text.strip()
    if src == "0":
        return basis.zero()
    coeffs = [Fraction(0)] * len(basis)
    pos, first = 0, True
    while pos < len(src):
        m = _TERM.match(src, pos)
        if not m or m.end() == pos:
            raise KStabError("parse-error", f"cannot parse class {text!r} at offset {pos}")
        sign, paren, num, name = m.groups()
        if sign is None and not first:
            raise KStabError("parse-error", f"missing operator in {text!r} at offset {pos}")
        if name is None:
            raise KStabError("parse-error", f"term without symbol in {text!r}")
        if "*" in m.group(0) and not (paren or num):
            raise KStabError("parse-error", f"'*' without a coefficient in {text!r}")
        c = rat(paren or num or "1")
        if sign == "-":
            c = -c
        coeffs[basis.index(name)] += c
        pos, first = m.end(), False
    return DivisorClass(basis, tuple(coeffs))


@dataclass(frozen=True)
class IntersectionForm:
    """Symmetric bilinear form on a surface Picard lattice."""

    basis: Basis
    gram: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        g = tuple(tuple(rat(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(self.basis)
        if len(g) != n or any(len(r) != n for r in g):
            raise KStabError("bad-form", "gram dimension differs from basis length")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise KStabError("bad-form", "gram matrix is not symmetric")

    def dual(self, c: DivisorClass) -> tuple[Fraction, ...]:
        """Row vector ``x -> x . c``."""
        return tuple(sum((row[j] * c.coeffs[j] for j in range(len(row)) if c.coeffs[j]), Fraction(0)) for row in self.gram)


def pair(form: IntersectionForm, d: DivisorClass, c: DivisorClass) -> Fraction:
    if d.basis != form.basis or c.basis != form.basis:
        raise KStabError("basis-mismatch", f"classes not on {form.basis.label or form.basis.names}")
    total = Fraction(0)
    for i, a in enumerate(d.coeffs):
        if a:
            row = form.gram[i]
            for j, b in enumerate(c.coeffs):
                if b and row[j]:
                    total += a * row[j] * b
    return total


def linear_combine(terms: Iterable[tuple[RationalLike, DivisorClass]], basis: Basis | None = None) -> DivisorClass:
    """Exact linear combination; an empty list needs ``basis`` for the zero class."""
    terms = list(terms)
    if not terms:
        if basis is None:
            raise KStabError("basis-mismatch", "empty combination needs an explicit basis")
        return basis.zero()
    out = (basis or terms[0][1].basis).zero()
    for t, c in terms:
        out = out + c * rat(t)
    return out
