"""Factory for creating report writer instances."""
import logging

from ..config import get_config
from .csv_report_writer import CsvReportWriter
from .json_report_writer import JsonReportWriter
from .markdown_report_writer import MarkdownReportWriter
from .report_writer import ReportWriter

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("json", "markdown", "csv")


def create_report_writer(output_format: str = "json", timestamps: bool = False) -> ReportWriter:
    """Create a report writer for the requested output format.

    Returns:
        ReportWriter: Writer using the configured reporting precision
    """
    precision = get_config().REPORT_PRECISION
    if output_format == "json":
        writer: ReportWriter = JsonReportWriter(precision, timestamps=timestamps)
    elif output_format == "markdown":
        writer = MarkdownReportWriter(precision)
    elif output_format == "csv":
        writer = CsvReportWriter(precision)
    else:
        raise ValueError(f"unknown output format {output_format!r}")
    logger.debug("Using %s report writer", output_format)
    return writer
