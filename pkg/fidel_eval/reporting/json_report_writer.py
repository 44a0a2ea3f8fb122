"""
Canonical JSON reports.

Keys are sorted and values rounded, so identical inputs give byte-identical
output. A generation timestamp is only added on request.
"""
import json
from datetime import datetime, timezone
from typing import Any, Dict, Sequence

from ..corpus import ValidationReport
from ..diagnostics import DiagnosticSummary
from ..evaluator import ComparisonReport, ScoreReport
from .report_writer import ReportWriter


class JsonReportWriter(ReportWriter):
    """JSON implementation of the report writer."""

    def __init__(self, precision: int = 2, timestamps: bool = False):
        super().__init__(precision)
        self.timestamps = timestamps

    def _dump(self, data: Dict[str, Any]) -> str:
        if self.timestamps:
            data = dict(data, generated_at=datetime.now(timezone.utc).isoformat())
        return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def render_comparison(self, report: ComparisonReport) -> str:
        return self._dump(report.to_dict(self.precision))

    def render_suite(self, reports: Sequence[ComparisonReport]) -> str:
        return self._dump({"reports": [r.to_dict(self.precision) for r in reports]})

    def render_score(self, report: ScoreReport) -> str:
        return self._dump(report.to_dict(self.precision))

    def render_validation(self, report: ValidationReport) -> str:
        return self._dump(report.to_dict())

    def render_diagnostics(self, summary: DiagnosticSummary, test_set: str) -> str:
        return self._dump({"test_set": test_set, "diagnostics": summary.to_dict()})
