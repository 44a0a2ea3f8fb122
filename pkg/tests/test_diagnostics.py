import pytest

from fidel_eval.corpus import EvalPair, Manifest
from fidel_eval.diagnostics import (
    EMPTY,
    NON_ETHIOPIC,
    REPETITIVE,
    DiagnosticThresholds,
    diagnose,
    diagnose_manifest,
    ethiopic_ratio,
    max_repetition_runs,
)
from fidel_eval.ethiopic_text import normalize_text

CLEAN_AMHARIC = [
    "ሰላም ነው ዛሬ ጥሩ ቀን ነው",
    "ልጆቹ ወደ ትምህርት ቤት ሄዱ",
    "አዲስ አበባ የኢትዮጵያ ዋና ከተማ ናት",
    "ቡና በጣም ጣፋጭ ነው",
    "ነገ ዝናብ ይዘንባል",
]

DEGENERATE = [
    "bonjour tout le monde, comment allez-vous",
    "the weather is nice today",
    "ሀ" * 50,
    "ሰላም ሰላም ሰላም ሰላም ሰላም ሰላም",
    "ናናናናናናናናናናናናናናና",
    "",
]


class TestEthiopicRatio:

    def test_all_ethiopic(self):
        assert ethiopic_ratio("ሀገር") == 1.0

    def test_latin(self):
        assert ethiopic_ratio("hello") == 0.0

    def test_mixed(self):
        assert ethiopic_ratio("ሀገር ok") == pytest.approx(0.6)

    def test_blank(self):
        assert ethiopic_ratio("   ") == 0.0

    def test_invariant_under_normalization(self, default_table):
        text = "ሐገር ዐለም ሠላም ፀሐይ abc"
        normalized, _ = normalize_text(text, default_table)
        assert ethiopic_ratio(normalized) == ethiopic_ratio(text)


class TestRepetitionRuns:

    def test_single_codepoint(self):
        assert max_repetition_runs("ሀሀሀሀሀ") == (5, 1)

    def test_token_run(self):
        assert max_repetition_runs("ሰላም ሰላም ሰላም") == (1, 3)

    def test_empty(self):
        assert max_repetition_runs("") == (0, 0)

    def test_whitespace_is_not_a_run(self):
        assert max_repetition_runs("ሀ          ለ") == (1, 1)


class TestDiagnose:

    def test_french_sentence(self):
        assert diagnose("bonjour tout le monde").verdicts == {NON_ETHIOPIC}

    def test_repeated_letter(self):
        flags = diagnose("ሀ" * 50)
        assert flags.verdicts == {REPETITIVE}
        assert flags.max_char_run == 50

    def test_clean_sentence(self):
        assert diagnose(CLEAN_AMHARIC[0]).verdicts == frozenset()

    def test_empty_gets_only_empty(self):
        flags = diagnose("  ")
        assert flags.verdicts == {EMPTY}
        assert flags.ethiopic_ratio == 0.0

    def test_custom_thresholds(self):
        thresholds = DiagnosticThresholds(min_ethiopic_ratio=0.5, max_char_run=3, max_token_run=2)
        assert diagnose("ሰላም ሰላም", thresholds).verdicts == {REPETITIVE}

    @pytest.mark.parametrize("text", CLEAN_AMHARIC + DEGENERATE + ["ሀገር ok ok ok", "ሀሀሀ abc"])
    def test_raising_thresholds_only_removes_verdicts(self, text):
        strict = DiagnosticThresholds(min_ethiopic_ratio=0.9, max_char_run=2, max_token_run=2)
        loose = DiagnosticThresholds(min_ethiopic_ratio=0.1, max_char_run=20, max_token_run=8)
        assert diagnose(text, loose).verdicts <= diagnose(text, strict).verdicts


def _manifest(hyps):
    return Manifest(tuple(EvalPair(f"p{i}", "ሰላም", hyp) for i, hyp in enumerate(hyps)), "diag")


class TestDiagnoseManifest:

    def test_full_recall_on_degenerate_output(self):
        summary = diagnose_manifest(_manifest(DEGENERATE))
        assert summary.flagged_count == len(DEGENERATE)
        assert summary.flagged_fraction == 1.0

    def test_no_flags_on_clean_output(self):
        summary = diagnose_manifest(_manifest(CLEAN_AMHARIC))
        assert summary.flagged_count == 0

    def test_fraction_and_counts(self):
        summary = diagnose_manifest(_manifest(CLEAN_AMHARIC + DEGENERATE[:2]))
        assert summary.flagged_fraction == pytest.approx(2 / 7)
        assert summary.verdict_counts() == {EMPTY: 0, NON_ETHIOPIC: 2, REPETITIVE: 0}
        assert [pair_id for pair_id, _ in summary.flagged] == ["p5", "p6"]

    def test_to_dict(self):
        data = diagnose_manifest(_manifest(["", "ሰላም"])).to_dict()
        assert data["flagged"] == [{"id": "p0", "verdicts": ["empty"]}]
        assert data["thresholds"] == {"min_ethiopic_ratio": 0.5, "max_char_run": 10, "max_token_run": 5}


class TestThresholdsFromConfig:

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("FIDEL_EVAL_MAX_CHAR_RUN", "4")
        assert DiagnosticThresholds.from_config().max_char_run == 4

    def test_overrides_win_and_none_is_ignored(self, monkeypatch):
        monkeypatch.setenv("FIDEL_EVAL_MAX_CHAR_RUN", "4")
        thresholds = DiagnosticThresholds.from_config(max_char_run=7, max_token_run=None)
        assert thresholds.max_char_run == 7
        assert thresholds.max_token_run == 5
