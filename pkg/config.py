import os
import logging
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

LOG_FORMAT = "[%(asctime)s] %(levelname)s: %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    """Process-wide limits read from the environment."""

    max_qubits: int = 4096
    tiling_attempts: int = 10000
    sweep_max_steps: int = 1_000_000
    log_level: str = "INFO"


def _positive_int(name, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value <= 0:
        error_msg = f"{name} must be a positive integer, got {raw!r}"
        logger.error(error_msg)
        raise ValueError(error_msg)
    return value


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    level = os.getenv("LOCALITY_LOG_LEVEL", "INFO").strip().upper()
    if level not in _LEVELS:
        error_msg = f"LOCALITY_LOG_LEVEL must be one of {', '.join(_LEVELS)}, got {level!r}"
        logger.error(error_msg)
        raise ValueError(error_msg)

    return Settings(
        max_qubits=_positive_int("LOCALITY_MAX_QUBITS", 4096),
        tiling_attempts=_positive_int("LOCALITY_TILING_ATTEMPTS", 10000),
        sweep_max_steps=_positive_int("LOCALITY_SWEEP_MAX_STEPS", 1_000_000),
        log_level=level,
    )


def reload_settings() -> Settings:
    get_settings.cache_clear()
    return get_settings()


def configure_logging(level=None):
    """Install the timestamped stream handler on the root logger."""
    level = (level or get_settings().log_level).upper()
    logging.basicConfig(level=level, format=LOG_FORMAT, datefmt=DATE_FORMAT, force=True)
    logger.debug(f"Logging configured at {level}")
