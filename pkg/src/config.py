# src/config.py
"""
Configuration module
--------------------
Handles environment variables, folder paths, and global constants.
Ensures all key directories exist before the rest of the system runs.
"""

import os
from dotenv import load_dotenv

# Load variables from .env (optional, nothing here is secret)
load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"❌ {name} must be an integer, got {raw!r}. Check your .env file.")


# === DIRECTORY CONSTANTS ===
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

OUTPUT_DIR = os.environ.get("PPCALC_OUTPUT_DIR", os.path.join(BASE_DIR, "output"))
REPORT_DIR = os.path.join(OUTPUT_DIR, "reports")
SCHEMA_DIR = os.path.join(BASE_DIR, "schemas")
DOCUMENT_DIR = os.path.join(BASE_DIR, "documents")
LOG_DIR = os.environ.get("PPCALC_LOG_DIR", os.path.join(BASE_DIR, "logs"))

# === GLOBAL SETTINGS ===
LOG_FILE = os.path.join(LOG_DIR, "activity.log")
FIXTURE_FILE = os.path.join(SCHEMA_DIR, "fixtures.json")
REPORT_SCHEMA_VERSION = "1"

# Desk-scale bounds: every algorithm is exhaustive-safe below these.
MAX_RINGOID_ORDER = _int_env("PPCALC_MAX_RINGOID_ORDER", 2 ** 16)
MAX_MODULE_ORDER = _int_env("PPCALC_MAX_MODULE_ORDER", 2 ** 16)
ENUMERATION_LIMIT = _int_env("PPCALC_ENUMERATION_LIMIT", 2 ** 12)

# Sampled-family and search bounds
DEFAULT_BOUND_VARS = _int_env("PPCALC_BOUND_VARS", 1)
DEFAULT_BOUND_COLS = _int_env("PPCALC_BOUND_COLS", 3)

SIDES = ("left", "right")


def ensure_directories_exist():
    """Create required directories if they don't exist."""
    for path in [OUTPUT_DIR, REPORT_DIR, LOG_DIR]:
        os.makedirs(path, exist_ok=True)


# Ensure folder structure is ready at import time
ensure_directories_exist()
