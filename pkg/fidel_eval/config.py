"""Configuration management for fidel_eval"""
import os
import logging
from typing import Dict, Any, Optional

from dotenv import load_dotenv

from .errors import ConfigurationError

logger = logging.getLogger(__name__)

# Environment variable naming the normalization table override file
TABLE_ENV_VAR = "FIDEL_EVAL_TABLE"

DEFAULT_MIN_ETHIOPIC_RATIO = 0.5
DEFAULT_MAX_CHAR_RUN = 10
DEFAULT_MAX_TOKEN_RUN = 5
DEFAULT_MAX_NGRAM_ORDER = 4
DEFAULT_MAX_LINE_BYTES = 1024 * 1024
DEFAULT_REPORT_PRECISION = 2


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be a number, got {raw!r}")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")


class Config:
    """Configuration settings for evaluation runs"""

    def __init__(self):
        """Initialize configuration with environment variables and defaults"""
        # .env values never override variables already set in the process
        load_dotenv(override=False)

        # Normalization
        self.TABLE_PATH = os.environ.get(TABLE_ENV_VAR) or None

        # Diagnostic thresholds
        self.MIN_ETHIOPIC_RATIO = _env_float("FIDEL_EVAL_MIN_ETHIOPIC_RATIO", DEFAULT_MIN_ETHIOPIC_RATIO)
        self.MAX_CHAR_RUN = _env_int("FIDEL_EVAL_MAX_CHAR_RUN", DEFAULT_MAX_CHAR_RUN)
        self.MAX_TOKEN_RUN = _env_int("FIDEL_EVAL_MAX_TOKEN_RUN", DEFAULT_MAX_TOKEN_RUN)

        # Metrics and reporting
        self.MAX_NGRAM_ORDER = DEFAULT_MAX_NGRAM_ORDER
        self.REPORT_PRECISION = DEFAULT_REPORT_PRECISION

        # Ingestion
        self.MAX_LINE_BYTES = _env_int("FIDEL_EVAL_MAX_LINE_BYTES", DEFAULT_MAX_LINE_BYTES)

        # Logging
        self.LOG_LEVEL = os.environ.get("FIDEL_EVAL_LOG_LEVEL", "WARNING").upper()

        self._validate()

    def _validate(self) -> None:
        if not 0.0 <= self.MIN_ETHIOPIC_RATIO <= 1.0:
            raise ConfigurationError(
                f"minimum Ethiopic ratio must lie in [0, 1], got {self.MIN_ETHIOPIC_RATIO}"
            )
        for name in ("MAX_CHAR_RUN", "MAX_TOKEN_RUN", "MAX_LINE_BYTES"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be positive, got {getattr(self, name)}")
        if self.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ConfigurationError(f"unknown log level {self.LOG_LEVEL!r}")

    def as_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary format"""
        return {
            "table_path": self.TABLE_PATH,
            "min_ethiopic_ratio": self.MIN_ETHIOPIC_RATIO,
            "max_char_run": self.MAX_CHAR_RUN,
            "max_token_run": self.MAX_TOKEN_RUN,
            "max_ngram_order": self.MAX_NGRAM_ORDER,
            "report_precision": self.REPORT_PRECISION,
            "max_line_bytes": self.MAX_LINE_BYTES,
            "log_level": self.LOG_LEVEL,
        }

    def update(self, config_dict: Dict[str, Any]) -> None:
        """Update configuration from dictionary"""
        for key, value in config_dict.items():
            if value is None:
                continue
            if hasattr(self, key.upper()):
                setattr(self, key.upper(), value)
            else:
                logger.warning("Ignoring unknown configuration key %s", key)
        self._validate()


# Global configuration instance
_config: Optional[Config] = None


def get_config() -> Config:
    """Get the global configuration instance"""
    global _config
    if _config is None:
        _config = Config()
    return _config


def initialize(config_override: Optional[Dict[str, Any]] = None) -> Config:
    """Initialize configuration with optional overrides"""
    global _config
    _config = Config()

    if config_override:
        _config.update(config_override)

    logger.debug("Configuration initialized: %s", _config.as_dict())
    return _config
