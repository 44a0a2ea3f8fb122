"""
Command-line interface for fidel_eval.

Subcommands: normalize, score, compare, validate, diag and suite. Reports go
to standard output (or ``--out``); logs and summaries go to standard error.

Exit codes: 0 success, 1 data or validation failure, 2 usage error.
"""
import os
import io
import sys
import json
import argparse
import logging
from typing import Any, Dict, Optional, Sequence, TextIO, Tuple

from colorama import Fore, Style
from jsonschema import Draft7Validator

from . import __version__
from .config import get_config, initialize
from .corpus import FORMATS, EvalPair, Manifest, load_manifest, validate_manifest, write_manifest
from .diagnostics import DiagnosticThresholds, diagnose_manifest
from .errors import FidelEvalError, ConfigurationError
from .ethiopic_text import NormalizationStats, normalize_text, resolve_table
from .evaluator import ScoringOptions, compare_models, compare_suite, score_manifest
from .metrics import nfc
from .reporting import OUTPUT_FORMATS, create_report_writer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE_ERROR = 2

SUITE_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["test_sets"],
    "properties": {
        "test_sets": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["label", "models"],
                "properties": {
                    "label": {"type": "string", "minLength": 1},
                    "refs": {"type": "string"},
                    "format": {"enum": list(FORMATS)},
                    "models": {
                        "type": "object",
                        "minProperties": 1,
                        "additionalProperties": {"type": "string"},
                    },
                },
            },
        },
    },
}


def _ratio(value: str) -> float:
    try:
        ratio = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not a number")
    if not 0.0 <= ratio <= 1.0:
        raise argparse.ArgumentTypeError("ratio must lie in [0, 1]")
    return ratio


def _positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not an integer")
    if number < 1:
        raise argparse.ArgumentTypeError("value must be at least 1")
    return number


def setup_parser() -> argparse.ArgumentParser:
    """
    Set up the argument parser.

    Returns:
        Configured argument parser
    """
    parser = argparse.ArgumentParser(
        prog='fidel-eval',
        description='Evaluation toolkit for Ethiopic-script ASR output',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter
    )
    parser.add_argument(
        '--version', '-V',
        action='version',
        version=f'fidel-eval v{__version__}'
    )

    # Options shared by several subcommands
    io_options = argparse.ArgumentParser(add_help=False)
    io_options.add_argument('--format', choices=FORMATS, default='jsonl', help='Manifest format')
    io_options.add_argument('--out', metavar='PATH', help='Write output to PATH instead of standard output')
    io_options.add_argument('--verbose', '-v', action='store_true', help='Log progress to standard error')

    report_options = argparse.ArgumentParser(add_help=False)
    report_options.add_argument('--output', choices=OUTPUT_FORMATS, default='json', help='Report format')
    report_options.add_argument('--timestamps', action='store_true',
                                help='Add a generation timestamp to JSON reports')

    table_options = argparse.ArgumentParser(add_help=False)
    table_options.add_argument('--table', metavar='PATH',
                               help='Homophone table override (falls back to FIDEL_EVAL_TABLE)')

    metric_options = argparse.ArgumentParser(add_help=False)
    metric_options.add_argument('--per-utterance-mean', action='store_true',
                                help='Average per-utterance WER/CER instead of pooling edits')
    metric_options.add_argument('--strip-punct', action='store_true',
                                help='Strip Ethiopic and ASCII punctuation before tokenization')
    metric_options.add_argument('--case-fold', action='store_true',
                                help='Lowercase non-Ethiopic letters before scoring')

    threshold_options = argparse.ArgumentParser(add_help=False)
    threshold_options.add_argument('--min-ethiopic-ratio', type=_ratio, metavar='R',
                                   help='Flag hypotheses whose Ethiopic share is below R')
    threshold_options.add_argument('--max-char-run', type=_positive_int, metavar='N',
                                   help='Flag hypotheses repeating one character N times')
    threshold_options.add_argument('--max-token-run', type=_positive_int, metavar='N',
                                   help='Flag hypotheses repeating one word N times')

    subparsers = parser.add_subparsers(dest='command', help='Command to execute')

    normalize_parser = subparsers.add_parser(
        'normalize', parents=[table_options],
        help='Apply homophone normalization to text or a manifest'
    )
    normalize_parser.add_argument('input', help="Text file, manifest, or '-' for standard input")
    normalize_parser.add_argument('--format', choices=FORMATS,
                                  help='Read INPUT as a manifest of this format instead of plain text')
    normalize_parser.add_argument('--out', metavar='PATH', help='Write output to PATH instead of standard output')
    normalize_parser.add_argument('--verbose', '-v', action='store_true', help='Log progress to standard error')

    score_parser = subparsers.add_parser(
        'score', parents=[io_options, report_options, table_options, metric_options, threshold_options],
        help='Score one manifest'
    )
    score_parser.add_argument('manifest', help='Manifest with id, ref and hyp')
    score_parser.add_argument('--normalize', action='store_true',
                              help='Also score the homophone-normalized condition')
    score_parser.add_argument('--label', help='Test-set label (defaults to the file name)')

    compare_parser = subparsers.add_parser(
        'compare', parents=[io_options, report_options, table_options, metric_options, threshold_options],
        help='Compare models on one test set, raw and normalized'
    )
    compare_parser.add_argument('refs', help='Reference manifest (hyp field optional)')
    compare_parser.add_argument('models', nargs='+', metavar='[NAME=]PATH',
                                help='Hypothesis manifest per model')
    compare_parser.add_argument('--label', help='Test-set label (defaults to the reference file name)')

    validate_parser = subparsers.add_parser(
        'validate', parents=[io_options, report_options],
        help='Check a manifest and report data-quality flags'
    )
    validate_parser.add_argument('manifest', help='Manifest to validate')
    validate_parser.add_argument('--min-ethiopic-ratio', type=_ratio, metavar='R',
                                 help='Flag references whose Ethiopic share is below R')

    diag_parser = subparsers.add_parser(
        'diag', parents=[io_options, report_options, threshold_options],
        help='List hypotheses showing degenerate output'
    )
    diag_parser.add_argument('manifest', help='Manifest whose hypotheses are diagnosed')

    suite_parser = subparsers.add_parser(
        'suite', parents=[report_options, table_options, metric_options, threshold_options],
        help='Compare models on several test sets from a JSON configuration'
    )
    suite_parser.add_argument('config', help='Suite configuration (JSON)')
    suite_parser.add_argument('--out', metavar='PATH', help='Write output to PATH instead of standard output')
    suite_parser.add_argument('--verbose', '-v', action='store_true', help='Log progress to standard error')

    return parser


def _paint(text: str, color: str) -> str:
    if sys.stderr.isatty():
        return f"{color}{text}{Style.RESET_ALL}"
    return text


def print_error(message: str) -> None:
    print(_paint(f"error: {message}", Fore.RED), file=sys.stderr)


def print_summary(message: str) -> None:
    print(_paint(message, Fore.CYAN), file=sys.stderr)


def _configure_logging(verbose: bool) -> None:
    level = logging.INFO if verbose else getattr(logging, get_config().LOG_LEVEL, logging.WARNING)
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr
    )


def _scoring_options(args: argparse.Namespace) -> ScoringOptions:
    return ScoringOptions(
        strip_punct=getattr(args, 'strip_punct', False),
        case_fold=getattr(args, 'case_fold', False),
        per_utterance_mean=getattr(args, 'per_utterance_mean', False),
        max_n=get_config().MAX_NGRAM_ORDER,
    )


def _thresholds(args: argparse.Namespace) -> DiagnosticThresholds:
    return DiagnosticThresholds.from_config(
        min_ethiopic_ratio=getattr(args, 'min_ethiopic_ratio', None),
        max_char_run=getattr(args, 'max_char_run', None),
        max_token_run=getattr(args, 'max_token_run', None),
    )


def _summarize_stats(stats: NormalizationStats) -> str:
    families = ", ".join(f"{name}: {count}" for name, count in sorted(stats.by_family.items()))
    summary = f"normalized {stats.replacements} codepoints"
    if families:
        summary += f" ({families})"
    if stats.skipped:
        summary += f"; {stats.skipped} labiovelar codepoints left unchanged"
    return summary


def _open_text_input(path: str) -> TextIO:
    if path == '-':
        buffer = getattr(sys.stdin, 'buffer', None)
        if buffer is not None:
            return io.TextIOWrapper(buffer, encoding='utf-8', errors='strict', newline='')
        return sys.stdin
    return open(path, 'r', encoding='utf-8', errors='strict', newline='')


def handle_normalize(args: argparse.Namespace) -> int:
    """
    Handle the normalize command.

    Text input is streamed line by line; with ``--format`` the input is read
    as a manifest and both ref and hyp are normalized.

    Returns:
        Exit code
    """
    table = resolve_table(args.table)
    total = NormalizationStats()

    if args.format is not None:
        manifest = load_manifest(args.input, args.format)
        pairs = []
        for pair in manifest.pairs:
            ref, ref_stats = normalize_text(pair.ref, table)
            hyp, hyp_stats = normalize_text(pair.hyp, table)
            total = total + ref_stats + hyp_stats
            pairs.append(EvalPair(pair.id, ref, hyp))
        normalized = Manifest(tuple(pairs), manifest.source_label, manifest.line_numbers)
        if args.out:
            write_manifest(normalized, args.out)
        else:
            for pair in normalized.pairs:
                sys.stdout.write(json.dumps(pair._asdict(), ensure_ascii=False) + "\n")
        print_summary(_summarize_stats(total))
        return EXIT_OK

    source = _open_text_input(args.input)
    sink = open(args.out, 'w', encoding='utf-8', newline='\n') if args.out else sys.stdout
    try:
        for line in source:
            normalized, stats = normalize_text(nfc(line), table)
            total = total + stats
            sink.write(normalized)
    except UnicodeDecodeError as e:
        print_error(f"input is not valid UTF-8: {e.reason}")
        return EXIT_DATA_ERROR
    finally:
        if args.input != '-':
            source.close()
        elif source is not sys.stdin:
            source.detach()
        if sink is not sys.stdout:
            sink.close()
        else:
            sink.flush()
    print_summary(_summarize_stats(total))
    return EXIT_OK


def handle_score(args: argparse.Namespace) -> int:
    """
    Handle the score command.

    Returns:
        Exit code
    """
    manifest = load_manifest(args.manifest, args.format, source_label=args.label)
    table = resolve_table(args.table) if args.normalize else None
    report = score_manifest(manifest, table, _scoring_options(args), _thresholds(args))
    create_report_writer(args.output, args.timestamps).write(report, args.out)
    return EXIT_OK


def _parse_model_arg(value: str) -> Tuple[str, str]:
    name, sep, path = value.partition('=')
    if sep and name and path:
        return name, path
    return os.path.splitext(os.path.basename(value))[0], value


def handle_compare(args: argparse.Namespace) -> int:
    """
    Handle the compare command.

    Returns:
        Exit code
    """
    reference = load_manifest(args.refs, args.format, source_label=args.label, require_hyp=False)
    model_manifests: Dict[str, Manifest] = {}
    for value in args.models:
        name, path = _parse_model_arg(value)
        if name in model_manifests:
            print_error(f"model name '{name}' given twice")
            return EXIT_USAGE_ERROR
        model_manifests[name] = load_manifest(path, args.format, source_label=reference.source_label)

    table = resolve_table(args.table)
    report = compare_models(model_manifests, table, _scoring_options(args), _thresholds(args),
                            reference=reference)
    create_report_writer(args.output, args.timestamps).write(report, args.out)
    return EXIT_OK


def handle_validate(args: argparse.Namespace) -> int:
    """
    Handle the validate command. Flags are reported, not treated as failures.

    Returns:
        Exit code
    """
    manifest = load_manifest(args.manifest, args.format)
    report = validate_manifest(manifest, args.min_ethiopic_ratio)
    create_report_writer(args.output, args.timestamps).write(report, args.out)
    print_summary(
        f"{len(report.pairs)} pairs: {report.empty_hyp_count} empty hypotheses, "
        f"{report.non_ethiopic_ref_count} non-Ethiopic references"
    )
    return EXIT_OK


def handle_diag(args: argparse.Namespace) -> int:
    """
    Handle the diag command.

    Returns:
        Exit code
    """
    manifest = load_manifest(args.manifest, args.format)
    summary = diagnose_manifest(manifest, _thresholds(args))
    create_report_writer(args.output, args.timestamps).write(summary, args.out,
                                                            test_set=manifest.source_label)
    print_summary(f"{summary.flagged_count} of {summary.pair_count} hypotheses flagged")
    return EXIT_OK


def _load_suite_config(path: str) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            config = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path}: invalid JSON: {e.msg} (line {e.lineno})")
    error = next(iter(Draft7Validator(SUITE_SCHEMA).iter_errors(config)), None)
    if error is not None:
        location = "/".join(str(p) for p in error.absolute_path) or "<root>"
        raise ConfigurationError(f"{path}: {location}: {error.message}")
    return config


def handle_suite(args: argparse.Namespace) -> int:
    """
    Handle the suite command: one comparison per configured test set.

    Paths in the configuration are relative to the configuration file.

    Returns:
        Exit code
    """
    config = _load_suite_config(args.config)
    base_dir = os.path.dirname(os.path.abspath(args.config))
    labels = [entry['label'] for entry in config['test_sets']]
    if len(set(labels)) != len(labels):
        raise ConfigurationError(f"{args.config}: test-set labels must be unique")

    test_sets: Dict[str, Dict[str, Manifest]] = {}
    references: Dict[str, Manifest] = {}
    for entry in config['test_sets']:
        label = entry['label']
        fmt = entry.get('format', 'jsonl')
        if 'refs' in entry:
            references[label] = load_manifest(os.path.join(base_dir, entry['refs']), fmt,
                                              source_label=label, require_hyp=False)
        test_sets[label] = {
            name: load_manifest(os.path.join(base_dir, path), fmt, source_label=label)
            for name, path in entry['models'].items()
        }

    table = resolve_table(args.table)
    reports = compare_suite(test_sets, table, _scoring_options(args), _thresholds(args), references)
    create_report_writer(args.output, args.timestamps).write(reports, args.out)
    return EXIT_OK


HANDLERS = {
    'normalize': handle_normalize,
    'score': handle_score,
    'compare': handle_compare,
    'validate': handle_validate,
    'diag': handle_diag,
    'suite': handle_suite,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main function for CLI.

    Returns:
        Exit code
    """
    parser = setup_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE_ERROR

    if not getattr(args, 'command', None):
        parser.print_help(sys.stderr)
        return EXIT_USAGE_ERROR

    try:
        initialize({"table_path": getattr(args, 'table', None)})
        _configure_logging(getattr(args, 'verbose', False))
        return HANDLERS[args.command](args)
    except FidelEvalError as e:
        print_error(str(e))
        return e.exit_code
    except OSError as e:
        print_error(f"{e.filename or ''}: {e.strerror}" if e.filename else str(e))
        return EXIT_DATA_ERROR
    except ValueError as e:
        print_error(str(e))
        return EXIT_USAGE_ERROR


if __name__ == '__main__':
    sys.exit(main())
