import json
from fractions import Fraction as Fr

import pytest

from conftest import corpus_case
from kstab.runner import (
    ANOMALOUS,
    MATCH,
    MISMATCH,
    ORACLE_TOL,
    format_table,
    numeric_oracle,
    oracle_agrees,
    reports_json,
    run_case,
    run_corpus,
)


def test_run_case_match():
    r = run_case(corpus_case("II.1c.F.s_divisor"))
    assert r.verdict == MATCH
    assert r.computed["s_divisor"] == "161/88"
    assert r.verdicts == {"s_divisor": MATCH}


def test_bound_only_case():
    r = run_case(corpus_case("I.dim1a.case1"))
    assert r.verdict == MATCH
    assert r.computed["s_curve_total"] == "97/132"
    assert r.computed["s_curve_first_term_computed"] == "0"


def test_anomalous_case_is_informational():
    r = run_case(corpus_case("II.1b.sweep"))
    assert r.verdict == ANOMALOUS
    assert r.expected["s_curve_total"] == "18969/1108811"
    assert Fr(r.computed["s_curve_total"]) == Fr(1997, 2464)
    assert any("differs from printed" in n for n in r.notes)


def test_report_only_value_with_strict_bound():
    r = run_case(corpus_case("II.1a.case2"))
    assert r.expected["s_curve_total"] == "182/352"
    assert r.computed["s_curve_total"] == "183/352"
    assert r.verdicts["s_curve_total"] == ANOMALOUS
    assert r.verdicts["s_curve_total<1"] == MATCH
    assert r.verdict == ANOMALOUS


def test_bisecant_line_case_reports_mismatch():
    # the printed second term does not follow from the printed integrand
    r = run_case(corpus_case("I.dim1a.case2"))
    assert r.computed["s_curve_second_term"] == "73/132"
    assert r.verdicts["s_curve_second_term"] == MISMATCH
    assert r.verdicts["s_curve_total<1"] == MATCH


def test_cone_case():
    r = run_case(corpus_case("II.cone"))
    assert r.verdict == MATCH
    assert r.computed["quadric_m1_1.inside"] == "1"
    assert r.computed["surface_degree.max_degree"] == "2"


def test_error_carries_case_id(corpus_dir, tmp_path):
    text = (corpus_dir / "III.F.s_divisor.toml").read_text().replace('tau = "3"', 'tau = "5/2"')
    p = tmp_path / "broken.toml"
    p.write_text(text)
    from kstab.cases import load_case

    r = run_case(load_case(p))
    assert r.verdict == "error"
    assert r.notes[0].startswith("III.F.s_divisor:")


@pytest.mark.parametrize("cid", ["III.F.s_divisor", "I.dim1a.case1", "III.cone"])
def test_oracle_agrees(cid):
    r = run_case(corpus_case(cid), oracle=True)
    assert r.oracle_ok
    for k, approx in r.oracle.items():
        exact = float(Fr(r.computed[k]))
        assert abs(approx - exact) / max(1.0, abs(exact)) < ORACLE_TOL


def test_oracle_value_examples():
    assert numeric_oracle(corpus_case("III.F.s_divisor"))["s_divisor"] == pytest.approx(39 / 22, rel=1e-3)
    total = numeric_oracle(corpus_case("I.dim1a.case1"))["s_curve_total"]
    assert abs(total - 97 / 132) / (97 / 132) < 1e-3


def test_oracle_gate_rejects_far_values():
    assert not oracle_agrees({"x": Fr(1)}, {"x": 1.01})
    assert oracle_agrees({"x": Fr(1)}, {"x": 1.0005})


def test_family_filter(corpus_dir):
    res = run_corpus(corpus_dir, family="III")
    assert [r.id for r in res.reports] == sorted(r.id for r in res.reports)
    assert len(res.reports) == 6
    assert res.status == 0


def test_empty_corpus(tmp_path):
    res = run_corpus(tmp_path)
    assert res.status == 0 and res.reports == []
    assert res.warnings


def test_schema_error_status(tmp_path, corpus_dir):
    (tmp_path / "bad.toml").write_text("schema_version = 1\n")
    res = run_corpus(tmp_path)
    assert res.status == 2


def test_duplicate_ids(tmp_path, corpus_dir):
    text = (corpus_dir / "III.cone.toml").read_text()
    (tmp_path / "a.toml").write_text(text)
    (tmp_path / "b.toml").write_text(text)
    res = run_corpus(tmp_path)
    assert res.status == 2
    assert "duplicate" in res.errors[0]


def test_reports_deterministic(corpus_dir):
    a = run_corpus(corpus_dir, family="III")
    b = run_corpus(corpus_dir, family="III", jobs=2)
    assert reports_json(a.reports, timing=False) == reports_json(b.reports, timing=False)
    assert format_table(a.reports, timing=False) == format_table(b.reports, timing=False)
    doc = json.loads(reports_json(a.reports))
    assert {"id", "family", "kind", "computed", "expected", "verdict", "oracle", "elapsed_ms"} <= set(doc[0])
