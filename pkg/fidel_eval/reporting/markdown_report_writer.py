"""Markdown tables in the column order WER(%) CER(%) corpusBLEU(%) avg.BLEU."""
from typing import List, Sequence

from ..corpus import ValidationReport
from ..diagnostics import DiagnosticSummary
from ..evaluator import CONDITIONS, METRICS, NORMALIZED, RAW, ComparisonReport, ScoreReport
from ..metrics import round_percent
from .report_writer import ReportWriter, format_value

HEADER = "| Models | WER(%) | CER(%) | corpusBLEU(%) | avg.BLEU |"
ALIGN = "|---|---:|---:|---:|---:|"
NORMALIZED_CAPTION = "*Evaluation on normalized references and predictions*"
CONDITION_TITLES = {RAW: "Raw", NORMALIZED: NORMALIZED_CAPTION}


class MarkdownReportWriter(ReportWriter):
    """Markdown implementation of the report writer."""

    def _cells(self, scores, bold: Sequence[bool] = (False,) * 4) -> List[str]:
        cells = []
        for metric, is_bold in zip(METRICS, bold):
            text = format_value(round_percent(getattr(scores, metric), self.precision))
            cells.append(f"**{text}**" if is_bold else text)
        return cells

    def render_comparison(self, report: ComparisonReport) -> str:
        lines = [f"### {report.test_set} ({report.pair_count} pairs)", "", HEADER, ALIGN]
        for condition in CONDITIONS:
            if condition == NORMALIZED:
                lines.append(f"| {NORMALIZED_CAPTION} | | | | |")
            for row in report.rows:
                bold = [report.is_best(row.model, condition, m) for m in METRICS]
                cells = self._cells(row.scores(condition), bold)
                lines.append(f"| {row.model} | " + " | ".join(cells) + " |")
        lines += [
            "",
            "Delta (normalized - raw):",
            "",
            HEADER,
            ALIGN,
        ]
        for row in report.rows:
            cells = [format_value(round_percent(row.delta[m], self.precision)) for m in METRICS]
            lines.append(f"| {row.model} | " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"

    def render_suite(self, reports: Sequence[ComparisonReport]) -> str:
        return "\n".join(self.render_comparison(r) for r in reports)

    def render_score(self, report: ScoreReport) -> str:
        lines = [f"### {report.test_set} ({report.pair_count} pairs)", "", HEADER, ALIGN]
        for condition in CONDITIONS:
            if condition in report.conditions:
                cells = self._cells(report.conditions[condition])
                lines.append(f"| {CONDITION_TITLES[condition]} | " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"

    def render_validation(self, report: ValidationReport) -> str:
        lines = [
            f"### Validation of {report.source_label} ({len(report.pairs)} pairs)",
            "",
            f"Empty hypotheses: {report.empty_hyp_count}  ",
            f"Non-Ethiopic references: {report.non_ethiopic_ref_count}",
            "",
            "| id | empty hyp | non-Ethiopic ref | ref codepoints | hyp codepoints |",
            "|---|---|---|---:|---:|",
        ]
        for pair in report.flagged:
            lines.append(
                f"| {pair.id} | {'yes' if pair.empty_hyp else ''} | "
                f"{'yes' if pair.non_ethiopic_ref else ''} | {pair.ref_codepoints} | {pair.hyp_codepoints} |"
            )
        return "\n".join(lines) + "\n"

    def render_diagnostics(self, summary: DiagnosticSummary, test_set: str) -> str:
        lines = [
            f"### Diagnostics for {test_set}",
            "",
            f"Flagged {summary.flagged_count} of {summary.pair_count} hypotheses "
            f"({100.0 * summary.flagged_fraction:.2f}%)",
            "",
            "| id | verdicts |",
            "|---|---|",
        ]
        for pair_id, verdicts in summary.flagged:
            lines.append(f"| {pair_id} | {', '.join(sorted(verdicts))} |")
        return "\n".join(lines) + "\n"
