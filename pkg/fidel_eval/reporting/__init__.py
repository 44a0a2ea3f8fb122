"""Report output formats for fidel_eval"""
from .report_writer import ReportWriter
from .json_report_writer import JsonReportWriter
from .markdown_report_writer import MarkdownReportWriter
from .csv_report_writer import CsvReportWriter
from .report_writer_factory import OUTPUT_FORMATS, create_report_writer

__all__ = [
    'ReportWriter',
    'JsonReportWriter',
    'MarkdownReportWriter',
    'CsvReportWriter',
    'OUTPUT_FORMATS',
    'create_report_writer',
]
