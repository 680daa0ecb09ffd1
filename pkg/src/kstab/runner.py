"""Case execution, verdicts, corpus runs and the numeric oracle."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import kernels
from .cases import CaseSpecFile, discover, load_case
from .errors import KStabError
from .exact import Poly
from .invariants import beta, s_curve, s_divisor, tau
from .picard import pair
from .threefold import (
    CurveFunctional,
    PolyClass,
    cone_member_2d,
    max_degree,
    restrict,
    restrict_components,
    restrict_poly,
    triple_poly,
    verify_chambers,
)

MATCH = "match"
MISMATCH = "mismatch"
ANOMALOUS = "anomalous-informational"
ERROR = "error"
ORACLE_TOL = 1e-3
ORACLE_GRID = 200
ORACLE_POINTS_1D = 10_000
MAIN_VALUE = {"s_divisor": "s_divisor", "beta": "beta", "s_curve": "s_curve_total"}


@dataclass
class CaseReport:
    id: str
    family: str
    kind: str
    computed: dict[str, str] = field(default_factory=dict)
    expected: dict[str, str] = field(default_factory=dict)
    verdicts: dict[str, str] = field(default_factory=dict)
    verdict: str = MATCH
    oracle: dict[str, float] | None = None
    oracle_ok: bool | None = None
    elapsed_ms: float = 0.0
    notes: list[str] = field(default_factory=list)

    def to_dict(self, timing: bool = True) -> dict[str, Any]:
        d = {
            "id": self.id,
            "family": self.family,
            "kind": self.kind,
            "computed": self.computed,
            "expected": self.expected,
            "verdict": self.verdict,
            "verdicts": self.verdicts,
            "oracle": self.oracle,
            "oracle_ok": self.oracle_ok,
            "notes": self.notes,
        }
        if timing:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d


def surface_functionals(case: CaseSpecFile) -> list[CurveFunctional]:
    """Threefold curve functionals ``D -> D|_Y . C`` for the curves ``C`` of the surface ``Y``."""
    if case.model is None or case.restriction is None:
        return []
    model, rmap = case.model, case.restriction
    out = []
    for c in model.mori_generators:
        pairings = tuple(pair(model.form, row, c) for row in rmap.rows)
        out.append(CurveFunctional(f"Y:{c}", pairings))
    return out


def _compare(key: str, computed: Fraction, case: CaseSpecFile) -> str:
    if case.anomalous or key in case.report_only:
        return ANOMALOUS
    want = case.expected[key]
    if key in case.bound_only:
        return MATCH if computed <= want else MISMATCH
    return MATCH if computed == want else MISMATCH


def compute(case: CaseSpecFile) -> tuple[dict[str, Fraction], list[str]]:
    """Exact values for every quantity this case kind produces."""
    notes: list[str] = []
    values: dict[str, Fraction] = {}
    if case.kind == "cone":
        cone = case.cone
        assert cone is not None
        for chk in cone.checks:
            dec = cone_member_2d(cone.rays, chk.divisor)
            values[f"{chk.name}.inside"] = Fraction(int(dec.inside))
            values[f"{chk.name}.a"], values[f"{chk.name}.b"] = dec.coefficients
        for db in cone.degree_bounds:
            values[f"{db.name}.max_degree"] = Fraction(max_degree(db.capacity, db.lambda_min))
        return values, notes

    assert case.spec is not None
    spec = verify_chambers(case.spec, surface_functionals(case))
    values["tau"] = tau(spec)
    if case.kind in ("s_divisor", "beta"):
        values["s_divisor"] = s_divisor(spec, case.anticanonical_volume)
        if case.kind == "beta":
            assert case.log_discrepancy is not None
            values["beta"] = beta(case.log_discrepancy, values["s_divisor"]).beta
        return values, notes

    assert case.model and case.restriction and case.surface_class and case.curve
    irreducible = (case.curve,) if case.curve_irreducible else ()
    res = s_curve(
        spec,
        case.model,
        case.restriction,
        case.surface_class,
        case.curve,
        case.anticanonical_volume,
        ord_bounds=case.ord_bounds,
        irreducible=irreducible,
    )
    values["s_curve_first_term"] = res.first_term
    values["s_curve_second_term"] = res.second_term
    values["s_curve_total"] = res.total
    if res.computed_first_term is not None:
        values["s_curve_first_term_computed"] = res.computed_first_term
        values["s_curve_total_computed"] = res.computed_first_term + res.second_term
        notes.append("first term uses the case's ord bound; computed-ord values reported alongside")
    notes.append("outer walls: " + ", ".join(str(w) for w in res.outer_walls))
    return values, notes


def _inside_value(key: str, case: CaseSpecFile) -> Fraction | None:
    cone = case.cone
    if cone is None:
        return None
    for chk in cone.checks:
        if key == f"{chk.name}.inside":
            return Fraction(int(chk.expected_inside))
        if chk.expected_coefficients and key in (f"{chk.name}.a", f"{chk.name}.b"):
            return chk.expected_coefficients[0 if key.endswith(".a") else 1]
    for db in cone.degree_bounds:
        if key == f"{db.name}.max_degree":
            return Fraction(db.expected)
    return None


def run_case(case: CaseSpecFile, oracle: bool = False) -> CaseReport:
    t0 = time.perf_counter()
    report = CaseReport(case.id, case.family, case.kind)
    try:
        values, notes = compute(case)
    except KStabError as exc:
        report.verdict = ERROR
        report.notes.append(f"{case.id}: {exc}")
        report.elapsed_ms = (time.perf_counter() - t0) * 1000
        return report
    report.notes.extend(notes)
    report.computed = {k: str(v) for k, v in values.items()}
    expected = dict(case.expected)
    if case.kind == "cone":
        for k in values:
            e = _inside_value(k, case)
            if e is not None:
                expected[k] = e
        case = _with_expected(case, expected)
    report.expected = {k: case.expected_text.get(k, str(v)) for k, v in expected.items()}
    for key in expected:
        if key not in values:
            report.verdicts[key] = ERROR
            report.notes.append(f"expected value {key} is not produced by kind {case.kind}")
            continue
        report.verdicts[key] = _compare(key, values[key], case)
        if key in case.bound_only:
            report.notes.append(f"{key}: bound check computed {values[key]} <= {expected[key]}")
    if case.strict_upper is not None:
        main = MAIN_VALUE[case.kind]
        ok = values[main] < case.strict_upper
        report.verdicts[f"{main}<{case.strict_upper}"] = ANOMALOUS if case.anomalous else (MATCH if ok else MISMATCH)
    verdicts = set(report.verdicts.values())
    if ERROR in verdicts:
        report.verdict = ERROR
    elif MISMATCH in verdicts:
        report.verdict = MISMATCH
    elif ANOMALOUS in verdicts:
        report.verdict = ANOMALOUS
        for key in expected:
            if report.verdicts[key] == ANOMALOUS and values.get(key) != expected[key]:
                report.notes.append(f"{key}: computed {values.get(key)} differs from printed {report.expected[key]}")
    if oracle:
        try:
            report.oracle = {k: float(v) for k, v in numeric_oracle(case).items()}
        except KStabError as exc:
            report.notes.append(f"oracle: {exc}")
            report.oracle_ok = False
        else:
            report.oracle_ok = oracle_agrees(values, report.oracle)
    report.elapsed_ms = (time.perf_counter() - t0) * 1000
    return report


def _with_expected(case: CaseSpecFile, expected: dict[str, Fraction]) -> CaseSpecFile:
    from dataclasses import replace

    return replace(case, expected=expected)


def oracle_agrees(values: dict[str, Fraction], oracle: dict[str, float], tol: float = ORACLE_TOL) -> bool:
    for k, approx in oracle.items():
        exact = float(values[k])
        if abs(approx - exact) / max(1.0, abs(exact)) >= tol:
            return False
    return True


# --- numeric oracle -------------------------------------------------------


def _float_class(c) -> np.ndarray:
    return np.array([float(x) for x in c.coeffs])


def _triple_tensor(ring) -> np.ndarray:
    n = len(ring.basis)
    T = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                T[i, j, k] = float(ring.entry(i, j, k))
    return T


def _midpoints(a: float, b: float, n: int) -> np.ndarray:
    h = (b - a) / n
    return a + h * (np.arange(n) + 0.5)


def numeric_oracle(case: CaseSpecFile, grid: int = ORACLE_GRID, points_1d: int = ORACLE_POINTS_1D) -> dict[str, float]:
    """Floating-point midpoint-rule values for the quantities of ``case``.

    This path shares no code with the exact pipeline beyond the parsed input:
    volumes of threefold classes come from a float trilinear tensor, and
    surface volumes from the float Zariski kernel.
    """
    if case.kind == "cone":
        cone = case.cone
        assert cone is not None
        M = np.column_stack([_float_class(r) for r in cone.rays])
        out: dict[str, float] = {}
        for chk in cone.checks:
            sol, *_ = np.linalg.lstsq(M, _float_class(chk.divisor), rcond=None)
            out[f"{chk.name}.a"], out[f"{chk.name}.b"] = float(sol[0]), float(sol[1])
        return out

    spec = case.spec
    assert spec is not None
    ring = spec.ring
    T = _triple_tensor(ring)
    V = float(case.anticanonical_volume)
    chambers = []
    for k, ch in enumerate(spec.chambers):
        P = spec.positive(k)
        p0, p1 = _float_class(P.part(0)), _float_class(P.part(1))
        chambers.append((float(ch.lower), float(ch.upper), p0, p1, P))
    if case.kind in ("s_divisor", "beta"):
        total = 0.0
        for a, b, p0, p1, _ in chambers:
            us = _midpoints(a, b, points_1d)
            Ps = p0[None, :] + us[:, None] * p1[None, :]
            vols = np.einsum("ijk,ni,nj,nk->n", T, Ps, Ps, Ps)
            total += vols.sum() * (b - a) / points_1d
        s = total / V
        out = {"s_divisor": s}
        if case.kind == "beta":
            out["beta"] = float(case.log_discrepancy) - s
        return out

    model, rmap = case.model, case.restriction
    assert model is not None and rmap is not None and case.surface_class is not None and case.curve is not None
    Yv = _float_class(case.surface_class)
    gram = np.array([[float(x) for x in row] for row in model.form.gram])
    curves = np.array([_float_class(c) for c in model.negative_curves]).reshape(-1, len(model.basis))
    extra = np.array([_float_class(c) for c in model.extra_generators + (model.anticanonical,)])
    Rm = np.array([_float_class(r) for r in rmap.rows])  # source index -> target vector
    Zv = _float_class(case.curve)
    Kv = _float_class(model.anticanonical)
    zdeg = float(Zv @ gram @ Kv)
    if zdeg <= 0:
        raise KStabError("oracle-failed", "curve has nonpositive anticanonical degree")
    first = 0.0
    first_computed = 0.0
    second = 0.0
    for k, (a, b, p0, p1, P) in enumerate(chambers):
        ordp = _float_ord(case, k)
        bound = case.ord_bounds[k] if case.ord_bounds is not None else None
        us = _midpoints(a, b, points_1d)
        Ps = p0[None, :] + us[:, None] * p1[None, :]
        w = np.einsum("ijk,ni,nj,k->n", T, Ps, Ps, Yv)
        h = (b - a) / points_1d
        first_computed += (w * np.polyval(ordp[::-1], us)).sum() * h if ordp.size else 0.0
        o_used = ordp if bound is None else np.array([float(c) for c in bound.coeffs])
        first += (w * np.polyval(o_used[::-1], us)).sum() * h if o_used.size else 0.0
        q0, q1 = p0 @ Rm, p1 @ Rm
        vmax = max(float((q0 + x * q1) @ gram @ Kv) / zdeg for x in (a, b))
        ug = _midpoints(a, b, grid)
        vg = _midpoints(0.0, vmax, grid)
        U, Vv = np.meshgrid(ug, vg, indexing="ij")
        pts = q0[None, :] + U.reshape(-1, 1) * q1[None, :] - Vv.reshape(-1, 1) * Zv[None, :]
        vols = kernels.grid_volumes(gram, curves, extra, pts)
        second += vols.sum() * (b - a) / grid * vmax / grid
    scale = 3.0 / V
    out = {
        "s_curve_first_term": first * scale,
        "s_curve_second_term": second * scale,
        "s_curve_total": (first + second) * scale,
    }
    if case.ord_bounds is not None:
        out["s_curve_first_term_computed"] = first_computed * scale
        out["s_curve_total_computed"] = (first_computed + second) * scale
    return out


def _float_ord(case: CaseSpecFile, k: int) -> np.ndarray:
    assert case.spec is not None and case.restriction is not None
    total = Poly()
    for c, p in case.spec.chambers[k].negative:
        for piece, mult in restrict_components(case.restriction, c):
            if piece == case.curve:
                total = total + p * mult
    return np.array([float(x) for x in total.coeffs])


# --- corpus ---------------------------------------------------------------


@dataclass
class CorpusResult:
    status: int
    reports: list[CaseReport]
    errors: list[str]
    warnings: list[str]


def _run_path(args: tuple[str, bool]) -> CaseReport:
    path, oracle = args
    return run_case(load_case(path), oracle=oracle)


def run_corpus(
    corpus: str | Path,
    family: str | None = None,
    oracle: bool = False,
    jobs: int = 1,
) -> CorpusResult:
    """Run every case in ``corpus``; status 0 iff no non-anomalous mismatch.

    Load or schema errors give status 2; computation errors count as mismatches.
    """
    errors: list[str] = []
    warnings: list[str] = []
    try:
        paths = discover(corpus)
    except KStabError as exc:
        return CorpusResult(2, [], [str(exc)], [])
    if not paths:
        warnings.append(f"no case files in {corpus}")
    cases: list[CaseSpecFile] = []
    for p in paths:
        try:
            cases.append(load_case(p))
        except KStabError as exc:
            errors.append(f"{p.name}: {exc}")
    ids = [c.id for c in cases]
    dups = sorted({i for i in ids if ids.count(i) > 1})
    if dups:
        errors.append(f"duplicate case ids: {', '.join(dups)}")
    if family is not None:
        cases = [c for c in cases if c.family == family]
    cases.sort(key=lambda c: c.id)
    if jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_path, [(str(c.path), oracle) for c in cases]))
    else:
        reports = [run_case(c, oracle=oracle) for c in cases]
    reports.sort(key=lambda r: r.id)
    if errors:
        status = 2
    elif any(r.verdict in (MISMATCH, ERROR) or r.oracle_ok is False for r in reports):
        status = 1
    else:
        status = 0
    return CorpusResult(status, reports, errors, warnings)


def format_table(reports: Iterable[CaseReport], timing: bool = True) -> str:
    lines = []
    for r in reports:
        keys = list(r.expected) or list(r.computed)
        vals = "; ".join(f"{k}={r.computed.get(k, '?')} (expected {r.expected.get(k, '-')})" for k in keys)
        extra = ""
        if r.oracle_ok is not None:
            extra = " oracle=" + ("ok" if r.oracle_ok else "FAIL")
        t = f" {r.elapsed_ms:.0f}ms" if timing else ""
        lines.append(f"{r.id:<24} {r.verdict:<24} {vals}{extra}{t}")
        for n in r.notes:
            if n.startswith("outer walls"):
                continue
            lines.append(f"    note: {n}")
    return "\n".join(lines)


def reports_json(reports: Sequence[CaseReport], timing: bool = True) -> str:
    return json.dumps([r.to_dict(timing) for r in reports], indent=2, sort_keys=True)
