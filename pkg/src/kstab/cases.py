"""Case files: schema-versioned TOML describing one computation each.

Rationals are written as ``"p/q"`` strings, polynomials as coefficient lists
lowest degree first, and classes as linear expressions such as
``"8l - 3e1 - 4e0"``. Families of classes in ``u`` are lists of class
expressions, again lowest degree first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .delpezzo import SurfaceModel, build_blowup_plane, build_blowup_quadric
from .errors import KStabError
from .exact import Poly, rat
from .picard import Basis, DivisorClass
from .threefold import (
    Chamber,
    ChamberSpec1D,
    CurveFunctional,
    PolyClass,
    RestrictionMap,
    ThreefoldRing,
)

SCHEMA_VERSION = 1
KINDS = ("s_divisor", "beta", "s_curve", "cone")
FAMILIES = ("I", "II", "III")


@dataclass(frozen=True)
class ConeCheck:
    name: str
    divisor: DivisorClass
    expected_inside: bool
    expected_coefficients: tuple[Fraction, Fraction] | None


@dataclass(frozen=True)
class DegreeBound:
    name: str
    capacity: Fraction
    lambda_min: Fraction
    expected: int


@dataclass(frozen=True)
class ConeData:
    basis: Basis
    rays: tuple[DivisorClass, DivisorClass]
    checks: tuple[ConeCheck, ...]
    degree_bounds: tuple[DegreeBound, ...] = ()


@dataclass(frozen=True)
class CaseSpecFile:
    id: str
    family: str
    kind: str
    path: Path | None
    description: str = ""
    ring: ThreefoldRing | None = None
    spec: ChamberSpec1D | None = None
    anticanonical_volume: Fraction = Fraction(22)
    model: SurfaceModel | None = None
    restriction: RestrictionMap | None = None
    surface_class: DivisorClass | None = None
    curve: DivisorClass | None = None
    curve_irreducible: bool = False
    ord_bounds: tuple[Poly | None, ...] | None = None
    log_discrepancy: Fraction | None = None
    cone: ConeData | None = None
    expected: Mapping[str, Fraction] = field(default_factory=dict)
    expected_text: Mapping[str, str] = field(default_factory=dict)
    anomalous: bool = False
    bound_only: tuple[str, ...] = ()
    report_only: tuple[str, ...] = ()
    """Expected values shown next to the computed ones but not compared."""
    strict_upper: Fraction | None = None
    """When set, the main computed value must lie strictly below it."""


def _need(table: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in table:
        raise KStabError("schema-error", f"missing {where}.{key}" if where else f"missing {key}")
    return table[key]


def _poly(coeffs: Any, where: str) -> Poly:
    if not isinstance(coeffs, list):
        raise KStabError("schema-error", f"{where}: polynomial must be a coefficient list")
    return Poly(tuple(_rat(c, where) for c in coeffs))


def _rat(x: Any, where: str) -> Fraction:
    if isinstance(x, float):
        raise KStabError("bad-rational", f"{where}: floats are not allowed, write \"p/q\"")
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise KStabError("bad-rational", f"{where}: expected a rational, got {x!r}")
    return rat(x)


_MONO = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?$")


def _triple_key(key: str, basis: Basis) -> tuple[str, ...]:
    """``"H1^2*E1"`` -> ``("H1", "H1", "E1")``; ``"H1.E1.F"`` is also accepted."""
    names: list[str] = []
    for part in re.split(r"[*.]", key.replace(" ", "")):
        m = _MONO.match(part)
        if not m:
            raise KStabError("parse-error", f"bad triple key {key!r}")
        basis.index(m.group(1))
        names.extend([m.group(1)] * int(m.group(2) or 1))
    if len(names) != 3:
        raise KStabError("invalid-triple-form", f"{key!r} is not a product of three divisors")
    return tuple(names)


def _ring(data: Mapping[str, Any]) -> ThreefoldRing:
    basis = Basis(tuple(_need(data, "basis", "ring")), data.get("label", ""))
    triples = _need(data, "triples", "ring")
    entries = [(_triple_key(k, basis), _rat(v, f"ring.triples.{k}")) for k, v in triples.items()]
    curves = []
    for c in data.get("test_curves", []):
        pairings = [_rat(x, "ring.test_curves") for x in _need(c, "pairings", "ring.test_curves")]
        if len(pairings) != len(basis):
            raise KStabError("basis-mismatch", f"test curve {c.get('name')} has wrong length")
        curves.append(CurveFunctional(c.get("name", "curve"), tuple(pairings)))
    return ThreefoldRing.from_entries(basis, entries, curves, data.get("label", ""))


def _family(basis: Basis, exprs: Any) -> PolyClass:
    if isinstance(exprs, str):
        exprs = [exprs]
    out = PolyClass.of(basis.zero())
    for k, text in enumerate(exprs):
        c = basis.parse(text)
        out = out + PolyClass.of(c, Poly((Fraction(0),) * k + (Fraction(1),)))
    return out


def _chambers(data: Mapping[str, Any], ring: ThreefoldRing, name: str) -> ChamberSpec1D:
    basis = ring.basis
    divisor = _family(basis, _need(data, "divisor", "chambers"))
    chambers = []
    for ch in _need(data, "chamber", "chambers"):
        lo, hi = (_rat(x, "chambers.chamber.interval") for x in _need(ch, "interval", "chambers.chamber"))
        neg = tuple(
            (basis.parse(_need(t, "class", "chambers.chamber.negative")), _poly(_need(t, "coeffs", "negative"), "negative"))
            for t in ch.get("negative", [])
        )
        chambers.append(Chamber(lo, hi, neg))
    tau = _rat(_need(data, "tau", "chambers"), "chambers.tau")
    return ChamberSpec1D(ring, divisor, tuple(chambers), tau, name)


def _surface(data: Mapping[str, Any]) -> SurfaceModel:
    kind = _need(data, "constructor", "surface")
    points = _need(data, "points", "surface")
    names = data.get("names")
    if kind == "plane":
        return build_blowup_plane(points, names=names, line=data.get("line", "l"))
    if kind == "quadric":
        return build_blowup_quadric(points, names=names)
    raise KStabError("schema-error", f"unknown surface constructor {kind!r}")


def _restriction(data: Mapping[str, Any], ring: ThreefoldRing, model: SurfaceModel) -> RestrictionMap:
    images = _need(data, "map", "restriction")
    missing = [n for n in ring.basis.names if n not in images]
    if missing:
        raise KStabError("unresolved-symbol", f"restriction has no image for {missing}")
    extra = [k for k in images if k not in ring.basis.names]
    if extra:
        raise KStabError("unresolved-symbol", f"restriction names unknown symbols {extra}")
    rows = tuple(model.parse(images[n]) for n in ring.basis.names)
    comps = []
    for c in data.get("components", []):
        src = ring.basis.parse(_need(c, "source", "restriction.components"))
        pieces = tuple((model.parse(p), int(m)) for p, m in _need(c, "pieces", "restriction.components"))
        comps.append((src, pieces))
    return RestrictionMap(ring.basis, model.basis, rows, tuple(comps))


def load_case(path: str | Path) -> CaseSpecFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise KStabError("io-error", f"{path}: {exc}") from exc
    return parse_case(text, path)


def parse_case(text: str, path: Path | None = None) -> CaseSpecFile:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise KStabError("parse-error", f"{path or '<text>'}: {exc}") from exc
    version = _need(doc, "schema_version", "")
    if version != SCHEMA_VERSION:
        raise KStabError("schema-version", f"unsupported schema_version {version!r}")
    cid = _need(doc, "id", "")
    family = _need(doc, "family", "")
    kind = _need(doc, "kind", "")
    if family not in FAMILIES:
        raise KStabError("schema-error", f"unknown family {family!r}")
    if kind not in KINDS:
        raise KStabError("schema-error", f"unknown kind {kind!r}")

    expected_raw = doc.get("expected", {})
    expected = {k: _rat(v, f"expected.{k}") for k, v in expected_raw.items()}
    flags = doc.get("flags", {})
    bound_only = tuple(flags.get("bound_only", []))
    for b in bound_only:
        if b not in expected:
            raise KStabError("schema-error", f"bound_only names {b!r} with no expected value")
    report_only = tuple(flags.get("report_only", []))
    for b in report_only:
        if b not in expected:
            raise KStabError("schema-error", f"report_only names {b!r} with no expected value")
    common = dict(
        id=cid,
        family=family,
        kind=kind,
        path=path,
        description=doc.get("description", ""),
        expected=expected,
        expected_text={k: str(v) for k, v in expected_raw.items()},
        anomalous=bool(flags.get("anomalous", False)),
        bound_only=bound_only,
        report_only=report_only,
        strict_upper=_rat(flags["strict_upper"], "flags.strict_upper") if "strict_upper" in flags else None,
    )
    if kind == "cone":
        return CaseSpecFile(cone=_cone(_need(doc, "cone", "")), **common)

    if not expected:
        raise KStabError("schema-error", f"{cid}: no expected values")
    ring = _ring(_need(doc, "ring", ""))
    spec = _chambers(_need(doc, "chambers", ""), ring, cid)
    vol = _rat(doc["chambers"].get("anticanonical_volume", "22"), "chambers.anticanonical_volume")
    A = None
    if kind == "beta":
        A = _rat(_need(_need(doc, "beta", ""), "log_discrepancy", "beta"), "beta.log_discrepancy")
    if kind != "s_curve":
        return CaseSpecFile(ring=ring, spec=spec, anticanonical_volume=vol, log_discrepancy=A, **common)

    model = _surface(_need(doc, "surface", ""))
    rdata = _need(doc, "restriction", "")
    rmap = _restriction(rdata, ring, model)
    Y = ring.basis.parse(_need(rdata, "surface_class", "restriction"))
    cdata = _need(doc, "curve", "")
    Z = model.parse(_need(cdata, "class", "curve"))
    bounds = None
    if "ord_bound" in cdata:
        raw = cdata["ord_bound"]
        if len(raw) != len(spec.chambers):
            raise KStabError("schema-error", "curve.ord_bound needs one entry per chamber")
        bounds = tuple(None if b == "computed" else _poly(b, "curve.ord_bound") for b in raw)
    return CaseSpecFile(
        ring=ring,
        spec=spec,
        anticanonical_volume=vol,
        model=model,
        restriction=rmap,
        surface_class=Y,
        curve=Z,
        curve_irreducible=bool(cdata.get("irreducible", False)),
        ord_bounds=bounds,
        **common,
    )


def _cone(data: Mapping[str, Any]) -> ConeData:
    basis = Basis(tuple(_need(data, "basis", "cone")), "cone")
    rays = tuple(basis.parse(r) for r in _need(data, "rays", "cone"))
    if len(rays) != 2:
        raise KStabError("schema-error", "cone needs exactly two rays")
    checks = []
    for c in data.get("checks", []):
        verdict = _need(c, "expected", "cone.checks")
        if verdict not in ("inside", "outside"):
            raise KStabError("schema-error", f"cone verdict must be inside/outside, got {verdict!r}")
        coeffs = c.get("coefficients")
        checks.append(
            ConeCheck(
                c.get("name", ""),
                basis.parse(_need(c, "divisor", "cone.checks")),
                verdict == "inside",
                tuple(_rat(x, "cone.checks.coefficients") for x in coeffs) if coeffs else None,
            )
        )
    bounds = tuple(
        DegreeBound(
            b.get("name", ""),
            _rat(_need(b, "capacity", "cone.degree_bounds"), "capacity"),
            _rat(_need(b, "lambda_min", "cone.degree_bounds"), "lambda_min"),
            int(_need(b, "expected", "cone.degree_bounds")),
        )
        for b in data.get("degree_bounds", [])
    )
    return ConeData(basis, rays, tuple(checks), bounds)


def discover(corpus: str | Path) -> list[Path]:
    root = Path(corpus)
    if not root.is_dir():
        raise KStabError("io-error", f"{root} is not a directory")
    return sorted(root.glob("*.toml"))
