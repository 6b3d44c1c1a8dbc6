"""Runtime configuration read from the environment (and an optional .env file)."""

import os

from dotenv import load_dotenv

load_dotenv(override=False)


def _flag(name: str, default: str = "0") -> bool:
    return os.getenv(name, default) not in ("", "0", "false", "False")


def _int(name: str, default: int, minimum: int = 1) -> int:
    try:
        value = int(os.getenv(name, str(default)))
    except ValueError:
        value = default
    return max(minimum, value)


def threads() -> int:
    """Worker cap for fiber inversion (APW_THREADS)."""
    return _int("APW_THREADS", os.cpu_count() or 1)


def default_seed() -> int:
    return _int("APW_SEED", 20240611, minimum=0)


def log_level() -> str:
    if _flag("APW_DEBUG"):
        return "DEBUG"
    return os.getenv("APW_LOG_LEVEL", "INFO").upper()


def log_file() -> str | None:
    return os.getenv("APW_LOG_FILE") or None


# Numerical defaults; every one can be overridden per call.
DROP_THRESHOLD = 1e-14
ANALYTIC_TAIL = 1e-8
SINGULAR_RATIO = 1e-8
CONDITION_CAP = 1e10
NEAR_CRITICAL_RATIO = 1e-6
DEFAULT_PAD = 2.0
