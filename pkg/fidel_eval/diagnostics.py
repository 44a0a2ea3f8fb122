"""Detection of degenerate hypotheses: non-Ethiopic output, repetition, empty output."""
import logging
from dataclasses import dataclass, field
from itertools import groupby
from typing import TYPE_CHECKING, Any, Dict, FrozenSet, List, Optional, Tuple

from .config import get_config
from .ethiopic_text import is_ethiopic
from .metrics import tokenize_words

if TYPE_CHECKING:
    from .corpus import Manifest

logger = logging.getLogger(__name__)

NON_ETHIOPIC = "non_ethiopic"
REPETITIVE = "repetitive"
EMPTY = "empty"
VERDICTS = (EMPTY, NON_ETHIOPIC, REPETITIVE)


@dataclass(frozen=True)
class DiagnosticThresholds:
    min_ethiopic_ratio: float = 0.5
    max_char_run: int = 10
    max_token_run: int = 5

    @classmethod
    def from_config(cls, **overrides: Any) -> "DiagnosticThresholds":
        """Thresholds from the active configuration; None overrides are ignored."""
        config = get_config()
        values = {
            "min_ethiopic_ratio": config.MIN_ETHIOPIC_RATIO,
            "max_char_run": config.MAX_CHAR_RUN,
            "max_token_run": config.MAX_TOKEN_RUN,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "min_ethiopic_ratio": self.min_ethiopic_ratio,
            "max_char_run": self.max_char_run,
            "max_token_run": self.max_token_run,
        }


@dataclass(frozen=True)
class DiagnosticFlags:
    ethiopic_ratio: float
    max_char_run: int
    max_token_run: int
    verdicts: FrozenSet[str] = field(default_factory=frozenset)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ethiopic_ratio": round(self.ethiopic_ratio, 4),
            "max_char_run": self.max_char_run,
            "max_token_run": self.max_token_run,
            "verdicts": sorted(self.verdicts),
        }


def ethiopic_ratio(text: str) -> float:
    """Share of non-whitespace codepoints that are Ethiopic; 0 for blank text."""
    total = 0
    ethiopic = 0
    for ch in text:
        if ch.isspace():
            continue
        total += 1
        if is_ethiopic(ord(ch)):
            ethiopic += 1
    if total == 0:
        return 0.0
    return ethiopic / total


def max_repetition_runs(text: str) -> Tuple[int, int]:
    """
    Longest runs of repeated units.

    Returns:
        Tuple of (longest run of one codepoint, longest run of one word).
        Whitespace ends a codepoint run.
    """
    char_run = 0
    for ch, group in groupby(text):
        if ch.isspace():
            continue
        char_run = max(char_run, sum(1 for _ in group))
    token_run = 0
    for _, group in groupby(tokenize_words(text)):
        token_run = max(token_run, sum(1 for _ in group))
    return char_run, token_run


def diagnose(hyp: str, thresholds: Optional[DiagnosticThresholds] = None) -> DiagnosticFlags:
    """
    Classify one hypothesis.

    Blank text only ever receives the ``empty`` verdict.
    """
    thresholds = thresholds or DiagnosticThresholds()
    ratio = ethiopic_ratio(hyp)
    char_run, token_run = max_repetition_runs(hyp)
    verdicts = set()
    if not hyp.strip():
        verdicts.add(EMPTY)
    else:
        if ratio < thresholds.min_ethiopic_ratio:
            verdicts.add(NON_ETHIOPIC)
        if char_run >= thresholds.max_char_run or token_run >= thresholds.max_token_run:
            verdicts.add(REPETITIVE)
    return DiagnosticFlags(ratio, char_run, token_run, frozenset(verdicts))


@dataclass(frozen=True)
class DiagnosticSummary:
    """Flagged hypotheses of one manifest."""

    pair_count: int
    flagged: Tuple[Tuple[str, FrozenSet[str]], ...]
    thresholds: DiagnosticThresholds

    @property
    def flagged_count(self) -> int:
        return len(self.flagged)

    @property
    def flagged_fraction(self) -> float:
        return self.flagged_count / self.pair_count if self.pair_count else 0.0

    def verdict_counts(self) -> Dict[str, int]:
        counts = {verdict: 0 for verdict in VERDICTS}
        for _, verdicts in self.flagged:
            for verdict in verdicts:
                counts[verdict] += 1
        return counts

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pair_count": self.pair_count,
            "flagged_count": self.flagged_count,
            "flagged_fraction": round(self.flagged_fraction, 4),
            "verdict_counts": self.verdict_counts(),
            "thresholds": self.thresholds.to_dict(),
            "flagged": [{"id": pair_id, "verdicts": sorted(v)} for pair_id, v in self.flagged],
        }


def diagnose_manifest(manifest: "Manifest",
                      thresholds: Optional[DiagnosticThresholds] = None) -> DiagnosticSummary:
    """Diagnose every hypothesis of a manifest, keeping file order."""
    thresholds = thresholds or DiagnosticThresholds()
    flagged: List[Tuple[str, FrozenSet[str]]] = []
    for pair in manifest.pairs:
        flags = diagnose(pair.hyp, thresholds)
        if flags.verdicts:
            flagged.append((pair.id, flags.verdicts))
    summary = DiagnosticSummary(len(manifest.pairs), tuple(flagged), thresholds)
    if summary.flagged_count:
        logger.info("%d of %d hypotheses flagged in %s", summary.flagged_count,
                    summary.pair_count, manifest.source_label)
    return summary
