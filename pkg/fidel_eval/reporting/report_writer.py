"""Base class for report writers"""
import os
import sys
import logging
from abc import ABC, abstractmethod
from typing import Any, Optional, Sequence

from ..corpus import ValidationReport
from ..diagnostics import DiagnosticSummary
from ..evaluator import ComparisonReport, ScoreReport

logger = logging.getLogger(__name__)


class ReportWriter(ABC):
    """Abstract base class for all report output formats"""

    def __init__(self, precision: int = 2):
        self.precision = precision

    @abstractmethod
    def render_comparison(self, report: ComparisonReport) -> str:
        """Render a two-condition model comparison"""
        pass

    @abstractmethod
    def render_suite(self, reports: Sequence[ComparisonReport]) -> str:
        """Render one comparison per test set"""
        pass

    @abstractmethod
    def render_score(self, report: ScoreReport) -> str:
        """Render the scores of a single manifest"""
        pass

    @abstractmethod
    def render_validation(self, report: ValidationReport) -> str:
        """Render manifest validation findings"""
        pass

    @abstractmethod
    def render_diagnostics(self, summary: DiagnosticSummary, test_set: str) -> str:
        """Render flagged hypotheses"""
        pass

    def render(self, report: Any, test_set: str = "") -> str:
        """Render any supported report object"""
        if isinstance(report, ComparisonReport):
            return self.render_comparison(report)
        if isinstance(report, ScoreReport):
            return self.render_score(report)
        if isinstance(report, ValidationReport):
            return self.render_validation(report)
        if isinstance(report, DiagnosticSummary):
            return self.render_diagnostics(report, test_set)
        if isinstance(report, (list, tuple)) and all(isinstance(r, ComparisonReport) for r in report):
            return self.render_suite(report)
        raise TypeError(f"cannot render {type(report).__name__}")

    def write(self, report: Any, out_path: Optional[str] = None, test_set: str = "") -> str:
        """
        Render a report and write it to out_path, or to standard output.

        Files are written to a temporary path first and then moved into place.

        Returns:
            The rendered text
        """
        text = self.render(report, test_set)
        if out_path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return text

        directory = os.path.dirname(os.path.abspath(out_path))
        os.makedirs(directory, exist_ok=True)
        temp_file = f"{out_path}.tmp"
        try:
            with open(temp_file, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
            os.replace(temp_file, out_path)
        except BaseException:
            if os.path.exists(temp_file):
                os.remove(temp_file)
            raise
        logger.info("Report written to %s", out_path)
        return text


def format_value(value: float) -> str:
    """Two-decimal rendering without negative zero"""
    text = f"{value:.2f}"
    return "0.00" if text == "-0.00" else text
