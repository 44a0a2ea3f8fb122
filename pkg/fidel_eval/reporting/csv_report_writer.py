"""CSV reports: one row per model and condition, plus delta rows."""
import csv
import io
from typing import Iterable, List, Sequence

from ..corpus import ValidationReport
from ..diagnostics import DiagnosticSummary
from ..evaluator import CONDITIONS, METRICS, ComparisonReport, ScoreReport
from ..metrics import round_percent
from .report_writer import ReportWriter

SCORE_COLUMNS = ["test_set", "model", "condition", *METRICS, "pair_count"]


class CsvReportWriter(ReportWriter):
    """CSV implementation of the report writer."""

    def _table(self, header: List[str], rows: Iterable[List[object]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buffer.getvalue()

    def _values(self, scores) -> List[float]:
        return [round_percent(getattr(scores, m), self.precision) for m in METRICS]

    def _comparison_rows(self, report: ComparisonReport) -> List[List[object]]:
        rows = []
        for row in report.rows:
            for condition in CONDITIONS:
                scores = row.scores(condition)
                rows.append([report.test_set, row.model, condition, *self._values(scores), scores.pair_count])
            delta = [round_percent(row.delta[m], self.precision) for m in METRICS]
            rows.append([report.test_set, row.model, "delta", *delta, report.pair_count])
        return rows

    def render_comparison(self, report: ComparisonReport) -> str:
        return self._table(SCORE_COLUMNS, self._comparison_rows(report))

    def render_suite(self, reports: Sequence[ComparisonReport]) -> str:
        rows: List[List[object]] = []
        for report in reports:
            rows.extend(self._comparison_rows(report))
        return self._table(SCORE_COLUMNS, rows)

    def render_score(self, report: ScoreReport) -> str:
        rows = [
            [report.test_set, "", condition, *self._values(report.conditions[condition]), report.pair_count]
            for condition in CONDITIONS if condition in report.conditions
        ]
        return self._table(SCORE_COLUMNS, rows)

    def render_validation(self, report: ValidationReport) -> str:
        header = ["id", "empty_hyp", "non_ethiopic_ref", "ref_ethiopic_ratio", "ref_codepoints", "hyp_codepoints"]
        rows = [
            [p.id, int(p.empty_hyp), int(p.non_ethiopic_ref), round(p.ref_ethiopic_ratio, 4),
             p.ref_codepoints, p.hyp_codepoints]
            for p in report.pairs
        ]
        return self._table(header, rows)

    def render_diagnostics(self, summary: DiagnosticSummary, test_set: str) -> str:
        rows = [[test_set, pair_id, " ".join(sorted(verdicts))] for pair_id, verdicts in summary.flagged]
        return self._table(["test_set", "id", "verdicts"], rows)
