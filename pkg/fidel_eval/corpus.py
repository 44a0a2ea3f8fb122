"""
Ingestion and validation of reference/hypothesis manifests.

Two formats are read:

- JSONL: one ``{"id": ..., "ref": ..., "hyp": ...}`` object per line; unknown
  keys are ignored.
- TSV: ``id<TAB>ref<TAB>hyp`` without header or quoting.

All text is NFC-composed on load. Manifests are immutable once loaded.
"""
import os
import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Mapping, NamedTuple, Optional, Tuple

from jsonschema import Draft7Validator

from .config import get_config
from .diagnostics import ethiopic_ratio
from .errors import (
    DuplicateIdError,
    EmptyReferenceError,
    IdSetMismatchError,
    ManifestEncodingError,
    ManifestParseError,
    ReferenceMismatchError,
)
from .metrics import nfc

logger = logging.getLogger(__name__)

FORMAT_JSONL = "jsonl"
FORMAT_TSV = "tsv"
FORMATS = (FORMAT_JSONL, FORMAT_TSV)

RECORD_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "ref": {"type": "string"},
        "hyp": {"type": "string"},
    },
    "required": ["id", "ref", "hyp"],
}

REFERENCE_RECORD_SCHEMA: Dict[str, Any] = dict(RECORD_SCHEMA, required=["id", "ref"])

_RECORD_VALIDATOR = Draft7Validator(RECORD_SCHEMA)
_REFERENCE_VALIDATOR = Draft7Validator(REFERENCE_RECORD_SCHEMA)


class EvalPair(NamedTuple):
    """One utterance: identifier, reference and hypothesis transcription."""

    id: str
    ref: str
    hyp: str


@dataclass(frozen=True)
class Manifest:
    """Ordered, id-unique collection of evaluation pairs."""

    pairs: Tuple[EvalPair, ...]
    source_label: str
    line_numbers: Tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[EvalPair]:
        return iter(self.pairs)

    @property
    def ids(self) -> Tuple[str, ...]:
        return tuple(p.id for p in self.pairs)

    def by_id(self) -> Dict[str, EvalPair]:
        return {p.id: p for p in self.pairs}

    def line_of(self, pair_id: str) -> Optional[int]:
        for pair, line_no in zip(self.pairs, self.line_numbers):
            if pair.id == pair_id:
                return line_no
        return None


def _read_lines(path: str, max_line_bytes: int) -> Iterator[Tuple[int, str]]:
    """Yield (line number, decoded line) with the line terminator removed."""
    with open(path, "rb") as f:
        line_no = 0
        while True:
            # Room for the content limit plus a CRLF terminator
            raw = f.readline(max_line_bytes + 2)
            if not raw:
                return
            line_no += 1
            content = raw[:-1] if raw.endswith(b"\n") else raw
            if content.endswith(b"\r"):
                content = content[:-1]
            if len(content) > max_line_bytes:
                raise ManifestParseError(
                    f"line exceeds the {max_line_bytes}-byte limit", path, line_no
                )
            try:
                line = content.decode("utf-8")
            except UnicodeDecodeError as e:
                raise ManifestEncodingError(f"invalid UTF-8 at byte {e.start}", path, line_no)
            yield line_no, line


def _parse_jsonl(line: str, path: str, line_no: int, require_hyp: bool) -> Tuple[str, str, str]:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as e:
        raise ManifestParseError(f"invalid JSON: {e.msg}", path, line_no)
    validator = _RECORD_VALIDATOR if require_hyp else _REFERENCE_VALIDATOR
    error = next(iter(validator.iter_errors(record)), None)
    if error is not None:
        raise ManifestParseError(f"invalid record: {error.message}", path, line_no)
    fields = (record["id"], record["ref"], record.get("hyp", ""))
    # JSON escapes can spell lone surrogates, which are not Unicode text
    for name, value in zip(("id", "ref", "hyp"), fields):
        try:
            value.encode("utf-8")
        except UnicodeEncodeError as e:
            raise ManifestEncodingError(
                f"field '{name}' holds an unpaired surrogate at position {e.start}", path, line_no
            )
    return fields


def _parse_tsv(line: str, path: str, line_no: int, require_hyp: bool) -> Tuple[str, str, str]:
    fields = line.split("\t")
    if len(fields) == 2 and not require_hyp:
        fields.append("")
    if len(fields) != 3:
        raise ManifestParseError(f"expected 3 tab-separated fields, found {len(fields)}", path, line_no)
    if not fields[0]:
        raise ManifestParseError("empty id", path, line_no)
    return fields[0], fields[1], fields[2]


def load_manifest(path: str, format: str = FORMAT_JSONL, source_label: Optional[str] = None,
                  require_hyp: bool = True) -> Manifest:
    """
    Load and validate a manifest.

    Args:
        path: Manifest file
        format: ``jsonl`` or ``tsv``
        source_label: Test-set label; defaults to the file name without extension
        require_hyp: If False, records may omit the hypothesis (reference-only
            manifests); it is then empty

    Returns:
        Manifest with NFC-composed text, in file order

    Raises:
        ManifestParseError: Malformed line, overlong line, or no records
        ManifestEncodingError: Invalid UTF-8, or an escaped unpaired surrogate
        DuplicateIdError: Id seen on an earlier line
        EmptyReferenceError: Reference without non-whitespace text
    """
    if format not in FORMATS:
        raise ValueError(f"unknown manifest format {format!r}")
    parse = _parse_jsonl if format == FORMAT_JSONL else _parse_tsv
    max_line_bytes = get_config().MAX_LINE_BYTES

    pairs: List[EvalPair] = []
    line_numbers: List[int] = []
    seen: Dict[str, int] = {}
    for line_no, line in _read_lines(path, max_line_bytes):
        if not line.strip():
            continue
        pair_id, ref, hyp = parse(line, path, line_no, require_hyp)
        pair_id, ref, hyp = nfc(pair_id), nfc(ref), nfc(hyp)
        if pair_id in seen:
            raise DuplicateIdError(pair_id, path, line_no)
        if not ref.strip():
            raise EmptyReferenceError(pair_id, path, line_no)
        seen[pair_id] = line_no
        pairs.append(EvalPair(pair_id, ref, hyp))
        line_numbers.append(line_no)

    if not pairs:
        raise ManifestParseError("manifest contains no records", path)

    label = source_label or os.path.splitext(os.path.basename(path))[0]
    logger.info("Loaded %d pairs from %s", len(pairs), path)
    return Manifest(tuple(pairs), label, tuple(line_numbers))


def write_manifest(manifest: Manifest, path: str) -> None:
    """Write a manifest as JSONL (UTF-8, LF), replacing path atomically."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    temp_file = f"{path}.tmp"
    try:
        with open(temp_file, "w", encoding="utf-8", newline="\n") as f:
            for pair in manifest.pairs:
                f.write(json.dumps({"id": pair.id, "ref": pair.ref, "hyp": pair.hyp}, ensure_ascii=False))
                f.write("\n")
        os.replace(temp_file, path)
    except BaseException:
        if os.path.exists(temp_file):
            os.remove(temp_file)
        raise
    logger.info("Wrote %d pairs to %s", len(manifest), path)


@dataclass(frozen=True)
class PairValidation:
    """Findings for one pair; flags never fail the load."""

    id: str
    empty_hyp: bool
    non_ethiopic_ref: bool
    ref_ethiopic_ratio: float
    ref_codepoints: int
    hyp_codepoints: int

    @property
    def flagged(self) -> bool:
        return self.empty_hyp or self.non_ethiopic_ref

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "empty_hyp": self.empty_hyp,
            "non_ethiopic_ref": self.non_ethiopic_ref,
            "ref_ethiopic_ratio": round(self.ref_ethiopic_ratio, 4),
            "ref_codepoints": self.ref_codepoints,
            "hyp_codepoints": self.hyp_codepoints,
        }


@dataclass(frozen=True)
class ValidationReport:
    source_label: str
    pairs: Tuple[PairValidation, ...]

    @property
    def empty_hyp_count(self) -> int:
        return sum(1 for p in self.pairs if p.empty_hyp)

    @property
    def non_ethiopic_ref_count(self) -> int:
        return sum(1 for p in self.pairs if p.non_ethiopic_ref)

    @property
    def flagged(self) -> Tuple[PairValidation, ...]:
        return tuple(p for p in self.pairs if p.flagged)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "test_set": self.source_label,
            "pair_count": len(self.pairs),
            "empty_hyp_count": self.empty_hyp_count,
            "non_ethiopic_ref_count": self.non_ethiopic_ref_count,
            "pairs": [p.to_dict() for p in self.pairs],
        }


def validate_manifest(manifest: Manifest, min_ethiopic_ratio: Optional[float] = None) -> ValidationReport:
    """
    Report per-pair data-quality flags without modifying the manifest.

    A reference is flagged as non-Ethiopic when its Ethiopic ratio is below
    ``min_ethiopic_ratio`` (the configured diagnostic threshold by default).
    """
    if min_ethiopic_ratio is None:
        min_ethiopic_ratio = get_config().MIN_ETHIOPIC_RATIO
    results = []
    for pair in manifest.pairs:
        ratio = ethiopic_ratio(pair.ref)
        results.append(PairValidation(
            id=pair.id,
            empty_hyp=not pair.hyp.strip(),
            non_ethiopic_ref=ratio < min_ethiopic_ratio,
            ref_ethiopic_ratio=ratio,
            ref_codepoints=len(pair.ref),
            hyp_codepoints=len(pair.hyp),
        ))
    return ValidationReport(manifest.source_label, tuple(results))


def align_manifests(model_manifests: Mapping[str, Manifest],
                    reference: Optional[Manifest] = None) -> Manifest:
    """
    Check that model manifests cover the same ids with byte-identical references.

    Args:
        model_manifests: Model name to manifest
        reference: Optional reference manifest; defaults to the manifest of
            the lexicographically first model

    Returns:
        The manifest every other one was checked against

    Raises:
        IdSetMismatchError: A model misses ids or has extra ones
        ReferenceMismatchError: A reference differs for some id
    """
    if not model_manifests:
        raise ValueError("no model manifests to align")
    names = sorted(model_manifests)
    if reference is None:
        reference = model_manifests[names[0]]
    expected = reference.by_id()
    for name in names:
        manifest = model_manifests[name]
        ids = set(manifest.ids)
        missing = set(expected) - ids
        unexpected = ids - set(expected)
        if missing or unexpected:
            raise IdSetMismatchError(name, missing, unexpected)
        for pair in manifest.pairs:
            if pair.ref != expected[pair.id].ref:
                raise ReferenceMismatchError(pair.id, name)
    return reference
