# src/persistence.py
"""
Persistence module
------------------
Handles saving and loading command reports and the activity log.
Each CLI or API run can write its report as a JSON record in output/reports/.
"""

import os
import json
from datetime import datetime
from config import REPORT_DIR, LOG_FILE


def _timestamp() -> str:
    """Generate a readable timestamp for filenames and logging."""
    return datetime.now().strftime("%Y-%m-%d_%H-%M-%S")


def _report_file(command: str) -> str:
    """Constructs a report filename based on the command name and timestamp."""
    safe_name = command.replace(" ", "_").replace("/", "_")
    return os.path.join(REPORT_DIR, f"{safe_name}_{_timestamp()}.json")


def save_report(report, path: str | None = None) -> str:
    """
    Save a Report as indented JSON.
    Without an explicit path the report lands in output/reports/.
    """
    path = path or _report_file(report.command)
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)

    with open(path, "w", encoding="utf-8") as f:
        f.write(report_to_json(report))
        f.write("\n")

    log_action(f"Report saved for '{report.command}' → {os.path.basename(path)}")
    return path


def report_to_json(report) -> str:
    """Deterministic JSON text for a Report (fixed key order, no timestamps)."""
    return json.dumps(report.model_dump(mode="json"), indent=2, ensure_ascii=False)


def load_report(file_path: str):
    """Load a report file from disk."""
    from api_models import Report

    with open(file_path, "r", encoding="utf-8") as f:
        return Report.model_validate(json.load(f))


def log_action(message: str):
    """Append an action or event to the activity log."""
    os.makedirs(os.path.dirname(LOG_FILE), exist_ok=True)
    with open(LOG_FILE, "a", encoding="utf-8") as f:
        f.write(f"[{datetime.now()}] {message}\n")
