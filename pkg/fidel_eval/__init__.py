"""
fidel_eval - evaluation toolkit for Ethiopic-script speech recognition output.

Scores hypotheses against references with WER, CER, corpus BLEU and average
BLEU, both on raw text and after homophone normalization, and flags
degenerate model output.
"""

__version__ = '0.1.0'

from .ethiopic_text import (
    DEFAULT_FAMILIES,
    EthiopicSyllable,
    HomophoneFamily,
    NormalizationStats,
    NormalizationTable,
    build_default_table,
    build_table,
    decompose,
    is_ethiopic,
    load_table,
    normalize_text,
    resolve_table,
)
from .metrics import (
    avg_bleu,
    cer,
    corpus_bleu,
    corpus_cer,
    corpus_wer,
    edit_distance,
    sentence_bleu,
    tokenize_words,
    wer,
)
from .corpus import EvalPair, Manifest, align_manifests, load_manifest, validate_manifest, write_manifest
from .diagnostics import DiagnosticThresholds, diagnose, diagnose_manifest
from .evaluator import (
    EvalCondition,
    ScoringOptions,
    compare_models,
    compare_suite,
    score_condition,
    score_manifest,
)

__all__ = [
    '__version__',
    'DEFAULT_FAMILIES',
    'EthiopicSyllable',
    'HomophoneFamily',
    'NormalizationStats',
    'NormalizationTable',
    'build_default_table',
    'build_table',
    'decompose',
    'is_ethiopic',
    'load_table',
    'normalize_text',
    'resolve_table',
    'avg_bleu',
    'cer',
    'corpus_bleu',
    'corpus_cer',
    'corpus_wer',
    'edit_distance',
    'sentence_bleu',
    'tokenize_words',
    'wer',
    'EvalPair',
    'Manifest',
    'align_manifests',
    'load_manifest',
    'validate_manifest',
    'write_manifest',
    'DiagnosticThresholds',
    'diagnose',
    'diagnose_manifest',
    'EvalCondition',
    'ScoringOptions',
    'compare_models',
    'compare_suite',
    'score_condition',
    'score_manifest',
]
