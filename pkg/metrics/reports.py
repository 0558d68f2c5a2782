"""Stable JSON rendering of report dataclasses."""
import json
from pathlib import Path

REPORT_VERSION = 1


def report_json(report) -> str:
    """Sorted keys, two-space indent, trailing newline."""
    payload = report.to_dict() if hasattr(report, "to_dict") else dict(report)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_report(report, path):
    Path(path).write_text(report_json(report), encoding="utf-8", newline="\n")
