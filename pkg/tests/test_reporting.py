import csv
import io
import json

import pytest

from fidel_eval.corpus import EvalPair, Manifest, validate_manifest
from fidel_eval.diagnostics import DiagnosticThresholds, diagnose_manifest
from fidel_eval.evaluator import compare_models, score_manifest
from fidel_eval.reporting import (
    CsvReportWriter,
    JsonReportWriter,
    MarkdownReportWriter,
    create_report_writer,
)
from fidel_eval.reporting.markdown_report_writer import HEADER, NORMALIZED_CAPTION
from fidel_eval.reporting.report_writer import format_value

REFS = ("ሰላም ነው ዛሬ", "ሀገር ውብ ናት", "ልጁ ወደ ቤት ሄደ")


def _model(hyps):
    return Manifest(tuple(EvalPair(str(i), r, h) for i, (r, h) in enumerate(zip(REFS, hyps))), "FLEURS test")


@pytest.fixture
def comparison(default_table):
    models = {
        "whisper-small": _model(["ሰላም ነው ዛሬ", "ሐገር ውብ ናት", "ልጁ ወደ ቢት ሄደ"]),
        "whisper-base": _model(["ሰላም ዛሬ", "ሐገር ናት", "ልጁ ቤት"]),
        "zero-shot": _model(["hello", "", "ሀሀሀሀሀሀሀሀሀሀሀ"]),
    }
    return compare_models(models, default_table, thresholds=DiagnosticThresholds())


class TestFactory:

    @pytest.mark.parametrize("name, cls", [
        ("json", JsonReportWriter),
        ("markdown", MarkdownReportWriter),
        ("csv", CsvReportWriter),
    ])
    def test_known_formats(self, name, cls):
        assert isinstance(create_report_writer(name), cls)

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            create_report_writer("xml")


class TestJsonReport:

    def test_canonical_and_deterministic(self, comparison):
        first = JsonReportWriter().render(comparison)
        second = JsonReportWriter().render(comparison)
        assert first == second
        data = json.loads(first)
        assert data["test_set"] == "FLEURS test"
        assert [row["model"] for row in data["rows"]] == ["whisper-small", "whisper-base", "zero-shot"]
        assert "generated_at" not in data
        assert first.endswith("\n")

    def test_signs_of_deltas(self, comparison):
        for row in json.loads(JsonReportWriter().render(comparison))["rows"]:
            assert row["delta"]["wer"] <= 0
            assert row["delta"]["cer"] <= 0
            assert row["delta"]["corpus_bleu"] >= 0

    def test_timestamps_on_request(self, comparison):
        data = json.loads(JsonReportWriter(timestamps=True).render(comparison))
        assert "generated_at" in data

    def test_ethiopic_is_not_escaped(self, default_table):
        report = score_manifest(_model(list(REFS)), default_table)
        text = JsonReportWriter().render(validate_manifest(_model(list(REFS))))
        assert "\\u" not in text
        assert json.loads(JsonReportWriter().render(report))["pair_count"] == 3

    def test_suite(self, comparison):
        data = json.loads(JsonReportWriter().render([comparison, comparison]))
        assert len(data["reports"]) == 2

    def test_diagnostics(self):
        summary = diagnose_manifest(_model(["", "ሀገር", "ልጁ"]))
        data = json.loads(JsonReportWriter().render(summary, test_set="BDU test"))
        assert data["test_set"] == "BDU test"
        assert data["diagnostics"]["flagged"] == [{"id": "0", "verdicts": ["empty"]}]


class TestMarkdownReport:

    def test_table_layout(self, comparison):
        text = MarkdownReportWriter().render(comparison)
        lines = text.splitlines()
        assert HEADER in lines
        assert any(NORMALIZED_CAPTION in line for line in lines)
        raw_rows = [line for line in lines if line.startswith("| whisper-small")]
        assert len(raw_rows) == 3  # raw, normalized, delta
        assert "Delta (normalized - raw):" in text

    def test_best_values_are_bold(self, comparison):
        text = MarkdownReportWriter().render(comparison)
        normalized_small = [line for line in text.splitlines() if line.startswith("| whisper-small")][1]
        assert normalized_small.startswith("| whisper-small | **10.00** |")

    def test_score_report(self, default_table):
        text = MarkdownReportWriter().render(score_manifest(_model(list(REFS)), default_table))
        assert "| Raw | 0.00 | 0.00 | 100.00 | 100.00 |" in text


class TestCsvReport:

    def test_rows(self, comparison):
        rows = list(csv.DictReader(io.StringIO(CsvReportWriter().render(comparison))))
        assert len(rows) == 9
        assert {row["condition"] for row in rows} == {"raw", "normalized", "delta"}
        first = rows[0]
        assert first["model"] == "whisper-small"
        assert first["pair_count"] == "3"


class TestWrite:

    def test_write_to_file(self, comparison, tmp_path):
        out = tmp_path / "reports" / "fleurs.md"
        text = MarkdownReportWriter().write(comparison, str(out))
        assert out.read_text(encoding="utf-8") == text
        assert not (tmp_path / "reports" / "fleurs.md.tmp").exists()

    def test_failed_replace_removes_temp_file(self, comparison, tmp_path, mocker):
        mocker.patch("fidel_eval.reporting.report_writer.os.replace", side_effect=OSError("disk full"))
        out = tmp_path / "fleurs.json"
        with pytest.raises(OSError, match="disk full"):
            JsonReportWriter().write(comparison, str(out))
        assert list(tmp_path.iterdir()) == []

    def test_write_to_stdout(self, comparison, capsys):
        text = JsonReportWriter().write(comparison)
        assert capsys.readouterr().out == text

    def test_unsupported_object(self):
        with pytest.raises(TypeError):
            JsonReportWriter().render(object())


def test_format_value_drops_negative_zero():
    assert format_value(-0.0) == "0.00"
    assert format_value(-0.001) == "0.00"
    assert format_value(1.5) == "1.50"
