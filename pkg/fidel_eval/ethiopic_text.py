"""
Ethiopic script model.

Codepoint classification, decomposition of syllables (fidel) into consonant
series and vowel order, and the homophone normalization applied to references
and hypotheses before scoring.

The Ethiopic block is laid out in 8-slot series starting at U+1200, so the
series base and the order of any syllable follow from offset arithmetic.
"""
import os
import logging
import unicodedata
from collections import Counter
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .config import get_config
from .errors import TableFormatError

logger = logging.getLogger(__name__)

ETHIOPIC_START = 0x1200
ETHIOPIC_END = 0x137F
SERIES_WIDTH = 8

# (first, last) inclusive
ETHIOPIC_RANGES = (
    (0x1200, 0x137F),  # Ethiopic
    (0x1380, 0x139F),  # Ethiopic Supplement
    (0x2D80, 0x2DDF),  # Ethiopic Extended
)

# Labiovelar runs placed after the 8-slot series of their consonant.
LABIOVELAR_EXTENSIONS: Mapping[int, range] = MappingProxyType({
    0x1240: range(0x1248, 0x124E),  # ቀ: ቈ..ቍ
    0x1280: range(0x1288, 0x128E),  # ኀ: ኈ..ኍ
    0x12A8: range(0x12B0, 0x12B6),  # ከ: ኰ..ኵ
    0x1308: range(0x1310, 0x1316),  # ገ: ጐ..ጕ
})


@dataclass(frozen=True)
class EthiopicSyllable:
    """A syllable codepoint split into its series base and vowel order (1..8)."""

    codepoint: int
    family_base: int
    order_index: int

    @property
    def char(self) -> str:
        return chr(self.codepoint)


def is_ethiopic(codepoint: int) -> bool:
    """Return True if the codepoint lies in any Ethiopic block."""
    for first, last in ETHIOPIC_RANGES:
        if first <= codepoint <= last:
            return True
    return False


def _is_assigned_syllable(codepoint: int) -> bool:
    if not ETHIOPIC_START <= codepoint <= ETHIOPIC_END:
        return False
    return unicodedata.name(chr(codepoint), "").startswith("ETHIOPIC SYLLABLE")


def decompose(codepoint: int) -> Optional[EthiopicSyllable]:
    """
    Decompose a codepoint into series base and vowel order.

    Args:
        codepoint: Unicode scalar value

    Returns:
        EthiopicSyllable, or None when the codepoint is not an assigned
        syllable of the Ethiopic block (punctuation, digits, combining marks,
        unassigned slots and everything outside the block).
    """
    if not _is_assigned_syllable(codepoint):
        return None
    offset = (codepoint - ETHIOPIC_START) % SERIES_WIDTH
    return EthiopicSyllable(
        codepoint=codepoint,
        family_base=codepoint - offset,
        order_index=offset + 1,
    )


def is_series_base(codepoint: int) -> bool:
    return (
        ETHIOPIC_START <= codepoint <= ETHIOPIC_END
        and (codepoint - ETHIOPIC_START) % SERIES_WIDTH == 0
    )


@dataclass(frozen=True)
class HomophoneFamily:
    """Consonant series that share one sound, with one series chosen as target."""

    name: str
    member_bases: Tuple[int, ...]
    canonical_base: int

    def __post_init__(self):
        if len(set(self.member_bases)) != len(self.member_bases):
            raise ValueError(f"family '{self.name}' lists a member base twice")
        if self.canonical_base not in self.member_bases:
            raise ValueError(
                f"canonical base U+{self.canonical_base:04X} is not a member of family '{self.name}'"
            )
        for base in self.member_bases:
            if not is_series_base(base):
                raise ValueError(
                    f"U+{base:04X} in family '{self.name}' is not the start of an Ethiopic series"
                )

    def with_canonical(self, canonical_base: int) -> "HomophoneFamily":
        return replace(self, canonical_base=canonical_base)

    @property
    def variant_bases(self) -> Tuple[int, ...]:
        return tuple(b for b in self.member_bases if b != self.canonical_base)


# Canonical series: ሀ, አ, ሰ, ጸ
DEFAULT_FAMILIES: Tuple[HomophoneFamily, ...] = (
    HomophoneFamily("ha", (0x1200, 0x1210, 0x1280), 0x1200),
    HomophoneFamily("a", (0x12A0, 0x12D0), 0x12A0),
    HomophoneFamily("sa", (0x1220, 0x1230), 0x1230),
    HomophoneFamily("tsa", (0x1338, 0x1340), 0x1338),
)


@dataclass
class NormalizationStats:
    """Counts collected while normalizing one or more texts."""

    replacements: int = 0
    by_family: Dict[str, int] = field(default_factory=dict)
    skipped: int = 0

    def __add__(self, other: "NormalizationStats") -> "NormalizationStats":
        merged = Counter(self.by_family)
        merged.update(other.by_family)
        return NormalizationStats(
            replacements=self.replacements + other.replacements,
            by_family=dict(merged),
            skipped=self.skipped + other.skipped,
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "replacements": self.replacements,
            "by_family": {k: self.by_family[k] for k in sorted(self.by_family)},
            "skipped": self.skipped,
        }


class NormalizationTable:
    """
    Immutable codepoint-to-codepoint map realizing a set of homophone families.

    Only non-identity entries are stored; every other codepoint maps to itself.
    Instances are safe to share between threads.
    """

    __slots__ = ("_families", "_mapping", "_family_of", "_skippable", "_translation")

    def __init__(self, families: Iterable[HomophoneFamily], mapping: Mapping[int, int],
                 family_of: Mapping[int, str], skippable: Iterable[int]):
        object.__setattr__(self, "_families", tuple(families))
        object.__setattr__(self, "_mapping", MappingProxyType(dict(mapping)))
        object.__setattr__(self, "_family_of", MappingProxyType(dict(family_of)))
        object.__setattr__(self, "_skippable", frozenset(skippable))
        object.__setattr__(self, "_translation", dict(mapping))

    def __setattr__(self, name, value):
        raise AttributeError("NormalizationTable is immutable")

    @property
    def families(self) -> Tuple[HomophoneFamily, ...]:
        return self._families

    @property
    def mapping(self) -> Mapping[int, int]:
        return self._mapping

    @property
    def mapped_count(self) -> int:
        return len(self._mapping)

    @property
    def skippable(self) -> FrozenSet[int]:
        return self._skippable

    def map(self, codepoint: int) -> int:
        return self._mapping.get(codepoint, codepoint)

    def family_of(self, codepoint: int) -> Optional[str]:
        return self._family_of.get(codepoint)

    def apply(self, text: str) -> str:
        """Normalize text without collecting statistics."""
        return text.translate(self._translation)

    def __repr__(self) -> str:
        names = ", ".join(f.name for f in self._families)
        return f"NormalizationTable(families=[{names}], mapped_count={self.mapped_count})"


def build_table(families: Iterable[HomophoneFamily]) -> NormalizationTable:
    """
    Build a normalization table from homophone families.

    For every non-canonical member series and every order slot, the source
    syllable maps to the canonical syllable of the same order when both slots
    hold assigned characters. Families must not share a series.

    Raises:
        ValueError: If two families overlap.
    """
    families = tuple(families)
    seen: Dict[int, str] = {}
    for family in families:
        for base in family.member_bases:
            if base in seen:
                raise ValueError(
                    f"series U+{base:04X} belongs to both '{seen[base]}' and '{family.name}'"
                )
            seen[base] = family.name

    mapping: Dict[int, int] = {}
    family_of: Dict[int, str] = {}
    skippable: List[int] = []
    for family in families:
        for base in family.variant_bases:
            for slot in range(SERIES_WIDTH):
                source = base + slot
                target = family.canonical_base + slot
                if _is_assigned_syllable(source) and _is_assigned_syllable(target):
                    mapping[source] = target
                    family_of[source] = family.name
            extension = LABIOVELAR_EXTENSIONS.get(base, ())
            skippable.extend(cp for cp in extension if _is_assigned_syllable(cp))

    logger.debug("Built normalization table with %d entries", len(mapping))
    return NormalizationTable(families, mapping, family_of, skippable)


def build_default_table(canonical: Optional[Mapping[str, int]] = None) -> NormalizationTable:
    """
    Build the table for the four Amharic homophone families (ha, a, sa, tsa).

    Args:
        canonical: Optional per-family override of the target series, keyed by
            family name, e.g. ``{"sa": 0x1220}``.
    """
    canonical = dict(canonical or {})
    unknown = set(canonical) - {f.name for f in DEFAULT_FAMILIES}
    if unknown:
        raise ValueError(f"unknown homophone families: {', '.join(sorted(unknown))}")
    families = [
        f.with_canonical(canonical[f.name]) if f.name in canonical else f
        for f in DEFAULT_FAMILIES
    ]
    return build_table(families)


def normalize_text(text: str, table: NormalizationTable) -> Tuple[str, NormalizationStats]:
    """
    Map every homophone variant in text onto its canonical series.

    The output has the same number of codepoints as the input.

    Returns:
        Tuple of (normalized text, statistics)
    """
    mapping = table.mapping
    skippable = table.skippable
    by_family: Counter = Counter()
    skipped = 0
    for cp in map(ord, text):
        if cp in mapping:
            by_family[table.family_of(cp)] += 1
        elif cp in skippable:
            skipped += 1

    if not by_family:
        normalized = text
    else:
        normalized = table.apply(text)
    stats = NormalizationStats(
        replacements=sum(by_family.values()),
        by_family=dict(by_family),
        skipped=skipped,
    )
    return normalized, stats


def _parse_base(token: str, path: str, line_no: int) -> int:
    token = token.strip()
    if token.upper().startswith("U+"):
        token = token[2:]
    try:
        value = int(token, 16)
    except ValueError:
        raise TableFormatError(f"'{token}' is not a hexadecimal codepoint", path, line_no)
    if not is_series_base(value):
        raise TableFormatError(
            f"U+{value:04X} is not the start of an Ethiopic consonant series", path, line_no
        )
    return value


def load_table(path: str) -> NormalizationTable:
    """
    Load a table override file.

    One family per line, ``canonical_hex: member_hex,member_hex,...``; blank
    lines and lines starting with ``#`` are ignored.

    Raises:
        TableFormatError: With the offending line number.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()
    except UnicodeDecodeError:
        raise TableFormatError("file is not valid UTF-8", path)
    except OSError as e:
        raise TableFormatError(f"cannot read table: {e.strerror}", path)

    families: List[HomophoneFamily] = []
    owner: Dict[int, int] = {}
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise TableFormatError("expected 'canonical: member,member,...'", path, line_no)
        head, _, tail = line.partition(":")
        canonical = _parse_base(head, path, line_no)
        members = [_parse_base(tok, path, line_no) for tok in tail.split(",") if tok.strip()]
        if not members:
            raise TableFormatError("family lists no member series", path, line_no)
        bases = [canonical] + members
        if len(set(bases)) != len(bases):
            raise TableFormatError("a series is listed twice in one family", path, line_no)
        for base in bases:
            if base in owner:
                raise TableFormatError(
                    f"series U+{base:04X} already belongs to the family on line {owner[base]}",
                    path, line_no,
                )
            owner[base] = line_no
        families.append(HomophoneFamily(chr(canonical), tuple(bases), canonical))

    if not families:
        raise TableFormatError("table defines no families", path)
    logger.info("Loaded %d homophone families from %s", len(families), path)
    return build_table(families)


def resolve_table(path: Optional[str] = None) -> NormalizationTable:
    """Return the override table from path or FIDEL_EVAL_TABLE, else the default table."""
    path = path or get_config().TABLE_PATH
    if path:
        if not os.path.exists(path):
            raise TableFormatError("table file does not exist", path)
        return load_table(path)
    return build_default_table()
