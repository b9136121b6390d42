"""
Tests for result records and report rendering
"""

import io
import json

import pytest

from cli.report_renderer import ReportRenderer, ResultRecord
from core.intlinalg import AbelianInvariants
from resources.report_themes import ReportThemes


@pytest.fixture
def record():
    return ResultRecord("homology", {"group": "C6", "degree": 1}, AbelianInvariants(0, (6,)),
                        resolution="cyclic", elapsed=0.25)


def test_summary(record):
    assert record.summary() == "homology(group=C6, degree=1): Z/6    primary [2, 3] (C2 x C3)"


def test_summary_without_invariants():
    rec = ResultRecord("res", {"group": "C4"}, details={"text": "ranks 1 1 1"})
    assert rec.summary() == "res(group=C4): ranks 1 1 1"


def test_trivial_summary():
    rec = ResultRecord("schur", {"group": "Q8"}, AbelianInvariants(0, ()))
    assert rec.summary().endswith(": 0    primary [] (Trivial)")


def test_text_output_includes_notes(record):
    record.notes.append("truncated")
    out = io.StringIO()
    ReportRenderer(out).write_text([record])
    assert out.getvalue().splitlines()[1] == "  note: truncated"


def test_json(record):
    out = io.StringIO()
    ReportRenderer(out, use_color=False).write_json([record])
    data = json.loads(out.getvalue())
    assert data["invariants"] == {"free_rank": 0, "torsion": [6]}
    assert data["resolution"] == "cyclic"
    assert data["elapsed"] == 0.25


def test_json_list_for_several_records(record):
    data = json.loads(ReportRenderer(io.StringIO()).to_json([record, record]))
    assert isinstance(data, list) and len(data) == 2


def test_markdown(record):
    text = ReportRenderer(io.StringIO()).to_markdown([record])
    assert "| homology | group=C6, degree=1 | `Z/6` | C2 x C3 | cyclic | 0.250 |" in text
    assert "```json" in text


@pytest.mark.parametrize("theme", ["light", "dark"])
def test_html(record, theme):
    html = ReportRenderer(io.StringIO()).to_html([record], theme)
    assert html.startswith("<!DOCTYPE html>")
    assert "<table>" in html
    assert ReportThemes.get_theme(theme) in html


def test_unknown_theme_falls_back_to_light():
    assert ReportThemes.get_theme("sepia") == ReportThemes.get_light_theme()
    assert ReportThemes.get_available_themes() == ["light", "dark"]


def test_write_report(tmp_path, record):
    path = tmp_path / "out.md"
    ReportRenderer(io.StringIO()).write_report([record], str(path))
    assert path.read_text(encoding="utf-8").startswith("# homocalc report")


def test_write_report_failure(tmp_path, record):
    with pytest.raises(RuntimeError):
        ReportRenderer(io.StringIO()).write_report([record], str(tmp_path / "no" / "out.html"))
