"""
Edit-distance error rates and BLEU variants.

WER and CER are Levenshtein distances (unit costs) normalised by reference
length and reported as percentages; they may exceed 100. Corpus-level WER and
CER are pooled: total edits over total reference length. Corpus BLEU pools
clipped n-gram matches over the whole corpus before taking precisions;
average BLEU is the mean of smoothed sentence BLEU scores.

Words are whitespace-delimited tokens of NFC-composed text. No other
tokenizer is applied.
"""
import math
import string
import logging
import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import Any, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

import editdistance
from nltk.translate.bleu_score import brevity_penalty
from nltk.util import ngrams

from .errors import EmptyCorpusError, EmptyReferenceError

logger = logging.getLogger(__name__)

DEFAULT_MAX_N = 4

ETHIOPIC_WORDSPACE = "\u1361"
ETHIOPIC_FULL_STOP = "\u1362"
ETHIOPIC_COMMA = "\u1363"

_PUNCT_TABLE = {ord(ETHIOPIC_WORDSPACE): " "}
_PUNCT_TABLE.update({ord(c): None for c in ETHIOPIC_FULL_STOP + ETHIOPIC_COMMA + string.punctuation})


def nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def prepare_text(text: str, strip_punct: bool = False, case_fold: bool = False) -> str:
    """
    Apply the opt-in text preparation flags.

    Args:
        text: Raw transcription
        strip_punct: Turn the Ethiopic wordspace into a space and drop the
            Ethiopic full stop, comma and ASCII punctuation
        case_fold: Lowercase letters; Ethiopic has no case and is unaffected

    Returns:
        NFC-composed text
    """
    text = nfc(text)
    if strip_punct:
        text = text.translate(_PUNCT_TABLE)
    if case_fold:
        text = text.lower()
    return text


def tokenize_words(text: str) -> List[str]:
    """Split NFC-composed text on whitespace runs."""
    return nfc(text).split()


def char_sequence(text: str) -> str:
    """Codepoints of text with whitespace runs collapsed to one space and ends trimmed."""
    return " ".join(tokenize_words(text))


def edit_distance(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Minimal number of insertions, deletions and substitutions turning a into b."""
    return int(editdistance.eval(a, b))


@dataclass(frozen=True)
class BleuBreakdown:
    """Components of a BLEU score."""

    precisions: Tuple[float, ...]
    brevity_penalty: float
    hyp_length: int
    ref_length: int
    matches: Tuple[int, ...]
    totals: Tuple[int, ...]

    def to_dict(self, precision: int = 4) -> Dict[str, Any]:
        return {
            "precisions": [round_percent(p, precision) for p in self.precisions],
            "brevity_penalty": round_percent(self.brevity_penalty, precision),
            "hyp_length": self.hyp_length,
            "ref_length": self.ref_length,
            "matches": list(self.matches),
            "totals": list(self.totals),
        }


@dataclass(frozen=True)
class MetricScores:
    """WER, CER, corpus BLEU and average BLEU of one corpus under one condition."""

    wer: float
    cer: float
    corpus_bleu: float
    avg_bleu: float
    pair_count: int
    bleu: Optional[BleuBreakdown] = None

    def to_dict(self, precision: int = 2, include_breakdown: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "wer": round_percent(self.wer, precision),
            "cer": round_percent(self.cer, precision),
            "corpus_bleu": round_percent(self.corpus_bleu, precision),
            "avg_bleu": round_percent(self.avg_bleu, precision),
            "pair_count": self.pair_count,
        }
        if include_breakdown and self.bleu is not None:
            data["bleu_breakdown"] = self.bleu.to_dict()
        return data


@dataclass(frozen=True)
class PairStatistics:
    """Integer edit and n-gram counts of one scored pair, ready for pooling."""

    pair_id: str
    word_edits: int
    ref_words: int
    hyp_words: int
    char_edits: int
    ref_chars: int
    ngram_matches: Tuple[int, ...]
    ngram_totals: Tuple[int, ...]
    sentence_bleu: float


def round_percent(value: float, precision: int = 2) -> float:
    """Round for reporting; negative zero becomes zero."""
    return round(value, precision) + 0.0


def _ngram_counts(ref_tokens: Sequence[str], hyp_tokens: Sequence[str],
                  max_n: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    matches: List[int] = []
    totals: List[int] = []
    for n in range(1, max_n + 1):
        total = max(0, len(hyp_tokens) - n + 1)
        if total == 0:
            matches.append(0)
            totals.append(0)
            continue
        hyp_grams = Counter(ngrams(hyp_tokens, n))
        ref_grams = Counter(ngrams(ref_tokens, n))
        matches.append(sum(min(count, ref_grams[gram]) for gram, count in hyp_grams.items()))
        totals.append(total)
    return tuple(matches), tuple(totals)


def _corpus_bleu_from_counts(matches: Sequence[int], totals: Sequence[int],
                             hyp_length: int, ref_length: int) -> Tuple[float, BleuBreakdown]:
    precisions = tuple(m / t if t else 0.0 for m, t in zip(matches, totals))
    bp = float(brevity_penalty(ref_length, hyp_length))
    breakdown = BleuBreakdown(
        precisions=precisions,
        brevity_penalty=bp,
        hyp_length=hyp_length,
        ref_length=ref_length,
        matches=tuple(matches),
        totals=tuple(totals),
    )
    # Orders without candidates (every hypothesis shorter than n) are dropped
    # and the weights shared over the remaining orders.
    counted = [(m, t) for m, t in zip(matches, totals) if t > 0]
    if not counted or any(m == 0 for m, _ in counted):
        return 0.0, breakdown
    log_mean = math.fsum(math.log(m / t) for m, t in counted) / len(counted)
    return 100.0 * bp * math.exp(log_mean), breakdown


def _smoothed_sentence_bleu(matches: Sequence[int], totals: Sequence[int],
                            hyp_length: int, ref_length: int) -> float:
    # Orders longer than the hypothesis are dropped and the remaining weights
    # renormalised; zero-match orders n >= 2 use add-one smoothing.
    if hyp_length == 0:
        return 0.0
    logs: List[float] = []
    for n, (m, t) in enumerate(zip(matches, totals), start=1):
        if t == 0:
            continue
        if m == 0:
            if n == 1:
                return 0.0
            logs.append(math.log(1.0 / (t + 1)))
        else:
            logs.append(math.log(m / t))
    bp = float(brevity_penalty(ref_length, hyp_length))
    return 100.0 * bp * math.exp(math.fsum(logs) / len(logs))


def _iter_pairs(pairs: Iterable[Sequence[str]]) -> Iterator[Tuple[str, str, str]]:
    # Accepts (ref, hyp) or (id, ref, hyp); bare pairs are identified by position.
    for index, pair in enumerate(pairs):
        if len(pair) == 3:
            pair_id, ref, hyp = pair
            yield str(pair_id), ref, hyp
        else:
            ref, hyp = pair
            yield str(index), ref, hyp


def pair_statistics(ref: str, hyp: str, pair_id: Optional[str] = None,
                    max_n: int = DEFAULT_MAX_N) -> PairStatistics:
    """
    Score one pair for every metric in a single pass.

    Raises:
        EmptyReferenceError: If ref has no words.
    """
    ref_words = tokenize_words(ref)
    if not ref_words:
        raise EmptyReferenceError(pair_id)
    hyp_words = tokenize_words(hyp)
    ref_chars = " ".join(ref_words)
    hyp_chars = " ".join(hyp_words)
    matches, totals = _ngram_counts(ref_words, hyp_words, max_n)
    return PairStatistics(
        pair_id=pair_id if pair_id is not None else "",
        word_edits=edit_distance(ref_words, hyp_words),
        ref_words=len(ref_words),
        hyp_words=len(hyp_words),
        char_edits=edit_distance(ref_chars, hyp_chars),
        ref_chars=len(ref_chars),
        ngram_matches=matches,
        ngram_totals=totals,
        sentence_bleu=_smoothed_sentence_bleu(matches, totals, len(hyp_words), len(ref_words)),
    )


def aggregate_scores(stats: Sequence[PairStatistics], per_utterance_mean: bool = False) -> MetricScores:
    """
    Reduce per-pair statistics into corpus scores.

    Integer counts are summed before any division, so the result does not
    depend on pair order.

    Args:
        stats: Per-pair statistics
        per_utterance_mean: Average per-pair WER/CER instead of pooling

    Raises:
        EmptyCorpusError: If stats is empty.
    """
    if not stats:
        raise EmptyCorpusError()
    count = len(stats)
    if per_utterance_mean:
        wer_value = math.fsum(100.0 * s.word_edits / s.ref_words for s in stats) / count
        cer_value = math.fsum(100.0 * s.char_edits / s.ref_chars for s in stats) / count
    else:
        wer_value = 100.0 * sum(s.word_edits for s in stats) / sum(s.ref_words for s in stats)
        cer_value = 100.0 * sum(s.char_edits for s in stats) / sum(s.ref_chars for s in stats)

    max_n = len(stats[0].ngram_matches)
    matches = [sum(s.ngram_matches[i] for s in stats) for i in range(max_n)]
    totals = [sum(s.ngram_totals[i] for s in stats) for i in range(max_n)]
    bleu_value, breakdown = _corpus_bleu_from_counts(
        matches, totals,
        hyp_length=sum(s.hyp_words for s in stats),
        ref_length=sum(s.ref_words for s in stats),
    )
    return MetricScores(
        wer=wer_value,
        cer=cer_value,
        corpus_bleu=bleu_value,
        avg_bleu=math.fsum(s.sentence_bleu for s in stats) / count,
        pair_count=count,
        bleu=breakdown,
    )


def wer(ref: str, hyp: str) -> float:
    """
    Word error rate of one pair, in percent.

    Raises:
        EmptyReferenceError: If ref has no words.
    """
    ref_words = tokenize_words(ref)
    if not ref_words:
        raise EmptyReferenceError()
    return 100.0 * edit_distance(ref_words, tokenize_words(hyp)) / len(ref_words)


def cer(ref: str, hyp: str) -> float:
    """
    Character error rate of one pair, in percent.

    Raises:
        EmptyReferenceError: If ref has no non-whitespace codepoint.
    """
    ref_chars = char_sequence(ref)
    if not ref_chars:
        raise EmptyReferenceError()
    return 100.0 * edit_distance(ref_chars, char_sequence(hyp)) / len(ref_chars)


def corpus_wer(pairs: Iterable[Sequence[str]], per_utterance_mean: bool = False) -> float:
    """Pooled WER: total word edits over total reference words."""
    edits: List[Tuple[int, int]] = []
    for pair_id, ref, hyp in _iter_pairs(pairs):
        ref_words = tokenize_words(ref)
        if not ref_words:
            raise EmptyReferenceError(pair_id)
        edits.append((edit_distance(ref_words, tokenize_words(hyp)), len(ref_words)))
    return _pool(edits, per_utterance_mean)


def corpus_cer(pairs: Iterable[Sequence[str]], per_utterance_mean: bool = False) -> float:
    """Pooled CER: total codepoint edits over total reference codepoints."""
    edits: List[Tuple[int, int]] = []
    for pair_id, ref, hyp in _iter_pairs(pairs):
        ref_chars = char_sequence(ref)
        if not ref_chars:
            raise EmptyReferenceError(pair_id)
        edits.append((edit_distance(ref_chars, char_sequence(hyp)), len(ref_chars)))
    return _pool(edits, per_utterance_mean)


def _pool(edits: Sequence[Tuple[int, int]], per_utterance_mean: bool) -> float:
    if not edits:
        raise EmptyCorpusError()
    if per_utterance_mean:
        return math.fsum(100.0 * e / n for e, n in edits) / len(edits)
    return 100.0 * sum(e for e, _ in edits) / sum(n for _, n in edits)


def corpus_bleu(pairs: Iterable[Sequence[str]], max_n: int = DEFAULT_MAX_N) -> Tuple[float, BleuBreakdown]:
    """
    Corpus BLEU with uniform weights over n = 1..max_n, in percent.

    Orders with no candidate n-grams are left out of the geometric mean. The
    score is 0 when a remaining order has no matches.

    Raises:
        EmptyCorpusError: If pairs is empty.
    """
    matches = [0] * max_n
    totals = [0] * max_n
    hyp_length = ref_length = 0
    seen = 0
    for _, ref, hyp in _iter_pairs(pairs):
        ref_tokens = tokenize_words(ref)
        hyp_tokens = tokenize_words(hyp)
        pair_matches, pair_totals = _ngram_counts(ref_tokens, hyp_tokens, max_n)
        for i in range(max_n):
            matches[i] += pair_matches[i]
            totals[i] += pair_totals[i]
        hyp_length += len(hyp_tokens)
        ref_length += len(ref_tokens)
        seen += 1
    if not seen:
        raise EmptyCorpusError()
    return _corpus_bleu_from_counts(matches, totals, hyp_length, ref_length)


def sentence_bleu(ref: str, hyp: str, max_n: int = DEFAULT_MAX_N) -> float:
    """
    Smoothed BLEU of one pair, in percent.

    Raises:
        EmptyReferenceError: If ref has no words.
    """
    ref_tokens = tokenize_words(ref)
    if not ref_tokens:
        raise EmptyReferenceError()
    hyp_tokens = tokenize_words(hyp)
    matches, totals = _ngram_counts(ref_tokens, hyp_tokens, max_n)
    return _smoothed_sentence_bleu(matches, totals, len(hyp_tokens), len(ref_tokens))


def avg_bleu(pairs: Iterable[Sequence[str]], max_n: int = DEFAULT_MAX_N) -> float:
    """Arithmetic mean of sentence BLEU over all pairs."""
    scores: List[float] = []
    for pair_id, ref, hyp in _iter_pairs(pairs):
        try:
            scores.append(sentence_bleu(ref, hyp, max_n))
        except EmptyReferenceError:
            raise EmptyReferenceError(pair_id)
    if not scores:
        raise EmptyCorpusError()
    return math.fsum(scores) / len(scores)
