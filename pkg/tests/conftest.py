"""Shared fixtures for the fidel_eval test suite."""
import json
import os
from typing import Callable, Iterable, Sequence

import pytest

from fidel_eval import config as config_module
from fidel_eval.ethiopic_text import build_default_table

FIXTURES_DIR = os.path.join(os.path.dirname(__file__), "fixtures")

ENV_VARS = (
    "FIDEL_EVAL_TABLE",
    "FIDEL_EVAL_MIN_ETHIOPIC_RATIO",
    "FIDEL_EVAL_MAX_CHAR_RUN",
    "FIDEL_EVAL_MAX_TOKEN_RUN",
    "FIDEL_EVAL_MAX_LINE_BYTES",
    "FIDEL_EVAL_LOG_LEVEL",
)


@pytest.fixture(autouse=True)
def clean_config(monkeypatch):
    """Run every test against built-in defaults, unaffected by the caller's environment."""
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setattr(config_module, "load_dotenv", lambda **kwargs: False)
    monkeypatch.setattr(config_module, "_config", None)
    yield
    config_module._config = None


@pytest.fixture
def default_table():
    return build_default_table()


@pytest.fixture
def fixture_path() -> Callable[[str], str]:
    return lambda name: os.path.join(FIXTURES_DIR, name)


@pytest.fixture
def write_jsonl(tmp_path) -> Callable[..., str]:
    """Write (id, ref, hyp) triples as a JSONL manifest and return its path."""

    def _write(rows: Iterable[Sequence[str]], name: str = "manifest.jsonl") -> str:
        path = tmp_path / name
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for row in rows:
                record = {"id": row[0], "ref": row[1]}
                if len(row) > 2:
                    record["hyp"] = row[2]
                f.write(json.dumps(record, ensure_ascii=False) + "\n")
        return str(path)

    return _write


@pytest.fixture
def write_text(tmp_path) -> Callable[[str, str], str]:
    def _write(content: str, name: str = "input.txt") -> str:
        path = tmp_path / name
        path.write_text(content, encoding="utf-8")
        return str(path)

    return _write
