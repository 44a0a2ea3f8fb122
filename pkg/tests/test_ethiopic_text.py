"""Tests for the Ethiopic script model and homophone normalization."""
import random

import pytest

from fidel_eval.errors import TableFormatError
from fidel_eval.ethiopic_text import (
    DEFAULT_FAMILIES,
    HomophoneFamily,
    NormalizationStats,
    build_default_table,
    build_table,
    decompose,
    is_ethiopic,
    is_series_base,
    load_table,
    normalize_text,
    resolve_table,
)


class TestDecompose:

    def test_series_start(self):
        syllable = decompose(0x1200)
        assert syllable.family_base == 0x1200
        assert syllable.order_index == 1
        assert syllable.char == "ሀ"

    def test_offset_arithmetic(self):
        syllable = decompose(0x1213)
        assert syllable.family_base == 0x1210
        assert syllable.order_index == 4

    def test_outside_block(self):
        assert decompose(0x0041) is None

    def test_punctuation_and_digits_are_not_syllables(self):
        assert decompose(0x1361) is None  # wordspace
        assert decompose(0x1369) is None  # digit one

    def test_unassigned_slot(self):
        assert decompose(0x1249) is None

    @pytest.mark.parametrize("codepoint", range(0x1200, 0x1360))
    def test_order_and_base_consistent(self, codepoint):
        syllable = decompose(codepoint)
        if syllable is not None:
            assert syllable.family_base + syllable.order_index - 1 == codepoint
            assert 1 <= syllable.order_index <= 8


class TestIsEthiopic:

    def test_core_block(self):
        assert is_ethiopic(0x1235)

    def test_latin(self):
        assert not is_ethiopic(0x0041)

    def test_supplement_block(self):
        assert is_ethiopic(0x1390)

    def test_extended_block(self):
        assert is_ethiopic(0x2D80)
        assert not is_ethiopic(0x2DE0)


class TestDefaultTable:

    def test_ha_family_entries(self, default_table):
        assert default_table.map(0x1210) == 0x1200  # ሐ -> ሀ
        assert default_table.map(0x1211) == 0x1201  # ሑ -> ሁ
        assert default_table.map(0x1280) == 0x1200  # ኀ -> ሀ

    def test_identity_off_family(self, default_table):
        assert default_table.map(0x1208) == 0x1208  # ለ
        assert 0x1208 not in default_table.mapping

    def test_other_families(self, default_table):
        assert default_table.map(0x12D0) == 0x12A0  # ዐ -> አ
        assert default_table.map(0x1220) == 0x1230  # ሠ -> ሰ
        assert default_table.map(0x1340) == 0x1338  # ፀ -> ጸ

    def test_fa_series_untouched(self, default_table):
        for slot in range(8):
            assert default_table.map(0x1348 + slot) == 0x1348 + slot

    def test_canonical_series_map_to_themselves(self, default_table):
        for family in DEFAULT_FAMILIES:
            for slot in range(8):
                assert default_table.map(family.canonical_base + slot) == family.canonical_base + slot

    def test_mapping_preserves_order(self, default_table):
        for source, target in default_table.mapping.items():
            assert decompose(source).order_index == decompose(target).order_index

    def test_labiovelars_are_skippable_not_mapped(self, default_table):
        assert 0x1288 in default_table.skippable  # ኈ
        assert 0x1288 not in default_table.mapping

    def test_canonical_override(self):
        table = build_default_table({"sa": 0x1220})
        assert table.map(0x1230) == 0x1220
        assert table.map(0x1220) == 0x1220

    def test_unknown_family_override(self):
        with pytest.raises(ValueError, match="unknown homophone families"):
            build_default_table({"la": 0x1208})

    def test_table_is_immutable(self, default_table):
        with pytest.raises(AttributeError):
            default_table.foo = 1
        with pytest.raises(TypeError):
            default_table.mapping[0x1208] = 0x1200


class TestBuildTable:

    def test_overlapping_families(self):
        families = [
            HomophoneFamily("one", (0x1200, 0x1210), 0x1200),
            HomophoneFamily("two", (0x1210, 0x1280), 0x1280),
        ]
        with pytest.raises(ValueError, match="belongs to both"):
            build_table(families)

    def test_family_rejects_unaligned_base(self):
        with pytest.raises(ValueError):
            HomophoneFamily("bad", (0x1201, 0x1210), 0x1210)

    def test_family_rejects_foreign_canonical(self):
        with pytest.raises(ValueError):
            HomophoneFamily("bad", (0x1200, 0x1210), 0x1280)

    def test_series_base(self):
        assert is_series_base(0x1200)
        assert not is_series_base(0x1201)
        assert not is_series_base(0x0041)


class TestNormalizeText:

    def test_single_replacement(self, default_table):
        text, stats = normalize_text("ሐመር", default_table)
        assert text == "ሀመር"
        assert stats.replacements == 1
        assert stats.by_family == {"ha": 1}

    def test_empty(self, default_table):
        text, stats = normalize_text("", default_table)
        assert text == ""
        assert stats.replacements == 0

    def test_canonical_text_is_fixed_point(self, default_table):
        text, stats = normalize_text("ሰላም ሀገር", default_table)
        assert text == "ሰላም ሀገር"
        assert stats.replacements == 0

    def test_latin_untouched(self, default_table):
        text, stats = normalize_text("hello, world!", default_table)
        assert text == "hello, world!"
        assert stats.replacements == 0

    def test_skipped_labiovelar_counted(self, default_table):
        text, stats = normalize_text("ኈ", default_table)
        assert text == "ኈ"
        assert stats.skipped == 1

    def test_stats_merge(self):
        merged = NormalizationStats(1, {"ha": 1}) + NormalizationStats(2, {"ha": 1, "sa": 1}, skipped=1)
        assert merged.replacements == 3
        assert merged.by_family == {"ha": 2, "sa": 1}
        assert merged.skipped == 1


def _random_string(rng: random.Random) -> str:
    pools = [
        lambda: chr(rng.randint(0x1200, 0x137F)),
        lambda: chr(rng.randint(0x1380, 0x139F)),
        lambda: rng.choice("abcdefgXYZ"),
        lambda: rng.choice(" \t.,!?፡።፣"),
        lambda: chr(rng.randint(0x0400, 0x04FF)),
    ]
    return "".join(rng.choice(pools)() for _ in range(rng.randint(0, 40)))


def test_normalization_invariants_on_random_strings(default_table):
    rng = random.Random(20240519)
    for _ in range(10_000):
        text = _random_string(rng)
        once, _ = normalize_text(text, default_table)
        twice, stats = normalize_text(once, default_table)
        assert twice == once
        assert stats.replacements == 0
        assert len(once) == len(text)
        for before, after in zip(text, once):
            if before == after:
                continue
            assert decompose(ord(before)).order_index == decompose(ord(after)).order_index
        for before, after in zip(text, once):
            if not is_ethiopic(ord(before)):
                assert before == after


class TestLoadTable:

    def test_valid_file(self, write_text):
        path = write_text("# custom\n1200: 1210, 1280\nU+1230: U+1220\n", "table.txt")
        table = load_table(path)
        assert table.map(0x1210) == 0x1200
        assert table.map(0x1220) == 0x1230
        assert table.map(0x12D0) == 0x12D0
        assert [f.name for f in table.families] == ["ሀ", "ሰ"]

    def test_missing_colon(self, write_text):
        path = write_text("1200: 1210\n1230 1220\n", "table.txt")
        with pytest.raises(TableFormatError) as excinfo:
            load_table(path)
        assert excinfo.value.line_no == 2
        assert f"{path}:2:" in str(excinfo.value)

    def test_bad_hex(self, write_text):
        path = write_text("12zz: 1210\n", "table.txt")
        with pytest.raises(TableFormatError, match="not a hexadecimal codepoint"):
            load_table(path)

    def test_not_a_series_base(self, write_text):
        path = write_text("1201: 1210\n", "table.txt")
        with pytest.raises(TableFormatError, match="start of an Ethiopic consonant series"):
            load_table(path)

    def test_overlap_between_lines(self, write_text):
        path = write_text("1200: 1210\n1280: 1210\n", "table.txt")
        with pytest.raises(TableFormatError, match="line 1") as excinfo:
            load_table(path)
        assert excinfo.value.line_no == 2

    def test_empty_file(self, write_text):
        path = write_text("# nothing here\n\n", "table.txt")
        with pytest.raises(TableFormatError, match="no families"):
            load_table(path)

    def test_exit_code_is_usage_error(self, write_text):
        path = write_text("oops\n", "table.txt")
        with pytest.raises(TableFormatError) as excinfo:
            load_table(path)
        assert excinfo.value.exit_code == 2


class TestResolveTable:

    def test_default(self):
        assert resolve_table().mapped_count == build_default_table().mapped_count

    def test_environment_fallback(self, write_text, monkeypatch):
        path = write_text("1200: 1210\n", "table.txt")
        monkeypatch.setenv("FIDEL_EVAL_TABLE", path)
        table = resolve_table()
        assert table.map(0x1210) == 0x1200
        assert table.map(0x1220) == 0x1220

    def test_explicit_path_wins(self, write_text, monkeypatch):
        env_path = write_text("1200: 1210\n", "env.txt")
        flag_path = write_text("1230: 1220\n", "flag.txt")
        monkeypatch.setenv("FIDEL_EVAL_TABLE", env_path)
        table = resolve_table(flag_path)
        assert table.map(0x1220) == 0x1230
        assert table.map(0x1210) == 0x1210

    def test_missing_file(self, tmp_path):
        with pytest.raises(TableFormatError, match="does not exist"):
            resolve_table(str(tmp_path / "absent.txt"))
