"""
Scoring under the raw and normalized text conditions.

In the normalized condition the homophone table is applied to both the
reference and the hypothesis of every pair before tokenization. Manifests are
never modified; every condition works on its own prepared copy of the text.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .corpus import Manifest, align_manifests
from .diagnostics import DiagnosticSummary, DiagnosticThresholds, diagnose_manifest
from .errors import EmptyCorpusError, InvariantViolationError
from .ethiopic_text import NormalizationStats, NormalizationTable, normalize_text
from .metrics import (
    DEFAULT_MAX_N,
    MetricScores,
    PairStatistics,
    aggregate_scores,
    pair_statistics,
    prepare_text,
    round_percent,
)

logger = logging.getLogger(__name__)

RAW = "raw"
NORMALIZED = "normalized"
CONDITIONS = (RAW, NORMALIZED)

METRICS = ("wer", "cer", "corpus_bleu", "avg_bleu")
LOWER_IS_BETTER = {"wer": True, "cer": True, "corpus_bleu": False, "avg_bleu": False}


@dataclass(frozen=True)
class EvalCondition:
    """A text condition: raw, or normalized with a table."""

    label: str
    table: Optional[NormalizationTable] = None

    def __post_init__(self):
        if self.label not in CONDITIONS:
            raise ValueError(f"unknown condition {self.label!r}")
        if (self.label == NORMALIZED) != (self.table is not None):
            raise ValueError("the normalized condition needs a table and the raw one must not have one")

    @classmethod
    def raw(cls) -> "EvalCondition":
        return cls(RAW)

    @classmethod
    def normalized(cls, table: NormalizationTable) -> "EvalCondition":
        return cls(NORMALIZED, table)


@dataclass(frozen=True)
class ScoringOptions:
    strip_punct: bool = False
    case_fold: bool = False
    per_utterance_mean: bool = False
    max_n: int = DEFAULT_MAX_N

    def to_dict(self) -> Dict[str, Any]:
        return {
            "strip_punct": self.strip_punct,
            "case_fold": self.case_fold,
            "per_utterance_mean": self.per_utterance_mean,
            "max_n": self.max_n,
        }


def _score(manifest: Manifest, condition: EvalCondition,
           options: ScoringOptions) -> Tuple[MetricScores, NormalizationStats]:
    if not manifest.pairs:
        raise EmptyCorpusError(f"manifest '{manifest.source_label}' contains no pairs")
    stats: List[PairStatistics] = []
    by_family: Counter = Counter()
    replaced = skipped = 0
    for pair in manifest.pairs:
        ref = prepare_text(pair.ref, options.strip_punct, options.case_fold)
        hyp = prepare_text(pair.hyp, options.strip_punct, options.case_fold)
        if condition.table is not None:
            ref, ref_stats = normalize_text(ref, condition.table)
            hyp, hyp_stats = normalize_text(hyp, condition.table)
            for text_stats in (ref_stats, hyp_stats):
                replaced += text_stats.replacements
                skipped += text_stats.skipped
                by_family.update(text_stats.by_family)
        stats.append(pair_statistics(ref, hyp, pair.id, options.max_n))
    scores = aggregate_scores(stats, options.per_utterance_mean)
    replacements = NormalizationStats(replaced, dict(by_family), skipped)
    logger.debug("Scored %s under %s: WER %.2f", manifest.source_label, condition.label, scores.wer)
    return scores, replacements


def score_condition(manifest: Manifest, condition: EvalCondition,
                    options: Optional[ScoringOptions] = None) -> MetricScores:
    """
    Compute WER, CER, corpus BLEU and average BLEU under one condition.

    Raises:
        EmptyReferenceError: Naming the pair whose reference has no words.
    """
    scores, _ = _score(manifest, condition, options or ScoringOptions())
    return scores


def _check_delta_signs(model: str, raw: MetricScores, normalized: MetricScores) -> None:
    # Average BLEU carries no guarantee: sentence smoothing breaks monotonicity.
    if normalized.wer > raw.wer:
        raise InvariantViolationError(f"normalized WER exceeds raw WER for '{model}'")
    if normalized.cer > raw.cer:
        raise InvariantViolationError(f"normalized CER exceeds raw CER for '{model}'")
    if normalized.corpus_bleu < raw.corpus_bleu:
        raise InvariantViolationError(f"normalized corpus BLEU is below raw for '{model}'")


@dataclass(frozen=True)
class ModelRow:
    model: str
    raw: MetricScores
    normalized: MetricScores
    replacements: NormalizationStats
    diagnostics: Optional[DiagnosticSummary] = None

    @property
    def delta(self) -> Dict[str, float]:
        return {m: getattr(self.normalized, m) - getattr(self.raw, m) for m in METRICS}

    def scores(self, condition: str) -> MetricScores:
        return self.raw if condition == RAW else self.normalized


@dataclass(frozen=True)
class ComparisonReport:
    """Two-condition scores per model, sorted by normalized WER."""

    test_set: str
    pair_count: int
    rows: Tuple[ModelRow, ...]
    best: Dict[str, Dict[str, str]] = field(default_factory=dict)
    options: ScoringOptions = ScoringOptions()

    def is_best(self, model: str, condition: str, metric: str) -> bool:
        return self.best.get(condition, {}).get(metric) == model

    def to_dict(self, precision: int = 2) -> Dict[str, Any]:
        rows = []
        for row in self.rows:
            data = {
                "model": row.model,
                RAW: row.raw.to_dict(precision),
                NORMALIZED: row.normalized.to_dict(precision),
                "delta": {m: round_percent(v, precision) for m, v in row.delta.items()},
                "best": {
                    condition: sorted(m for m in METRICS if self.is_best(row.model, condition, m))
                    for condition in CONDITIONS
                },
                "normalization": row.replacements.to_dict(),
            }
            if row.diagnostics is not None:
                data["diagnostics"] = row.diagnostics.to_dict()
            rows.append(data)
        return {
            "test_set": self.test_set,
            "pair_count": self.pair_count,
            "options": self.options.to_dict(),
            "rows": rows,
        }


@dataclass(frozen=True)
class ScoreReport:
    """Scores of a single manifest under one or both conditions."""

    test_set: str
    pair_count: int
    conditions: Dict[str, MetricScores]
    replacements: Optional[NormalizationStats] = None
    diagnostics: Optional[DiagnosticSummary] = None
    options: ScoringOptions = ScoringOptions()

    def to_dict(self, precision: int = 2) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "test_set": self.test_set,
            "pair_count": self.pair_count,
            "options": self.options.to_dict(),
            "conditions": {
                label: self.conditions[label].to_dict(precision, include_breakdown=True)
                for label in CONDITIONS if label in self.conditions
            },
        }
        if RAW in self.conditions and NORMALIZED in self.conditions:
            data["delta"] = {
                m: round_percent(getattr(self.conditions[NORMALIZED], m) - getattr(self.conditions[RAW], m),
                                 precision)
                for m in METRICS
            }
        if self.replacements is not None:
            data["normalization"] = self.replacements.to_dict()
        if self.diagnostics is not None:
            data["diagnostics"] = self.diagnostics.to_dict()
        return data


def score_manifest(manifest: Manifest, table: Optional[NormalizationTable] = None,
                   options: Optional[ScoringOptions] = None,
                   thresholds: Optional[DiagnosticThresholds] = None) -> ScoreReport:
    """
    Score a manifest raw, and also normalized when a table is given.

    Diagnostics of the hypotheses are attached when thresholds are given.
    """
    options = options or ScoringOptions()
    conditions: Dict[str, MetricScores] = {}
    conditions[RAW], _ = _score(manifest, EvalCondition.raw(), options)
    replacements = None
    if table is not None:
        conditions[NORMALIZED], replacements = _score(manifest, EvalCondition.normalized(table), options)
        _check_delta_signs(manifest.source_label, conditions[RAW], conditions[NORMALIZED])
    diagnostics = diagnose_manifest(manifest, thresholds) if thresholds is not None else None
    return ScoreReport(manifest.source_label, len(manifest), conditions, replacements, diagnostics, options)


def _pick_best(rows: Sequence[ModelRow], precision: int) -> Dict[str, Dict[str, str]]:
    # Ties at reporting precision go to the lexicographically first model name.
    best: Dict[str, Dict[str, str]] = {}
    for condition in CONDITIONS:
        best[condition] = {}
        for metric in METRICS:
            def key(row: ModelRow) -> Tuple[float, str]:
                value = round_percent(getattr(row.scores(condition), metric), precision)
                return (value if LOWER_IS_BETTER[metric] else -value, row.model)
            best[condition][metric] = min(rows, key=key).model
    return best


def compare_models(model_manifests: Mapping[str, Manifest], table: NormalizationTable,
                   options: Optional[ScoringOptions] = None,
                   thresholds: Optional[DiagnosticThresholds] = None,
                   reference: Optional[Manifest] = None,
                   test_set: Optional[str] = None,
                   precision: int = 2) -> ComparisonReport:
    """
    Score several models on one test set under both conditions.

    Args:
        model_manifests: Model name to manifest
        table: Normalization table for the normalized condition
        options: Text preparation and aggregation options
        thresholds: If given, hypotheses are diagnosed per model
        reference: Optional reference manifest all models must agree with
        test_set: Report label; defaults to the reference's source label
        precision: Reporting precision used for best-model tie-breaking

    Returns:
        ComparisonReport with rows sorted by normalized WER, then model name

    Raises:
        IdSetMismatchError: Models do not cover the same ids
        ReferenceMismatchError: A reference differs between manifests
        EmptyReferenceError: Naming the offending pair
    """
    options = options or ScoringOptions()
    reference = align_manifests(model_manifests, reference)

    rows: List[ModelRow] = []
    for name in sorted(model_manifests):
        manifest = model_manifests[name]
        raw, _ = _score(manifest, EvalCondition.raw(), options)
        normalized, replacements = _score(manifest, EvalCondition.normalized(table), options)
        _check_delta_signs(name, raw, normalized)
        diagnostics = diagnose_manifest(manifest, thresholds) if thresholds is not None else None
        rows.append(ModelRow(name, raw, normalized, replacements, diagnostics))

    rows.sort(key=lambda r: (r.normalized.wer, r.model))
    report = ComparisonReport(
        test_set=test_set or reference.source_label,
        pair_count=len(reference),
        rows=tuple(rows),
        best=_pick_best(rows, precision),
        options=options,
    )
    logger.info("Compared %d models on %s (%d pairs)", len(rows), report.test_set, report.pair_count)
    return report


def compare_suite(test_sets: Mapping[str, Mapping[str, Manifest]], table: NormalizationTable,
                  options: Optional[ScoringOptions] = None,
                  thresholds: Optional[DiagnosticThresholds] = None,
                  references: Optional[Mapping[str, Manifest]] = None) -> List[ComparisonReport]:
    """One comparison report per test set, in the order the test sets are given."""
    references = references or {}
    return [
        compare_models(models, table, options, thresholds,
                       reference=references.get(label), test_set=label)
        for label, models in test_sets.items()
    ]
