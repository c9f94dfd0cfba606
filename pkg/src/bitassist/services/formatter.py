"""
Rendering of command reports as human-readable text or structured JSON.
"""
import json
from typing import Any, List

from bitassist.models.status import ReportFormat
from bitassist.schemas.report import Report
from bitassist.services.storage import dump_document


def format_report(report: Report, format_type: ReportFormat = ReportFormat.HUMAN) -> str:
    """
    Render a report.

    Args:
        report: the command report
        format_type: human text or structured JSON

    Returns:
        The rendered text, newline-terminated
    """
    if ReportFormat(format_type) == ReportFormat.STRUCTURED:
        return dump_document(report)
    return "\n".join(format_human(report)) + "\n"


def _scalar(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    return str(value)


def format_human(report: Report) -> List[str]:
    lines = [f"== {report.command} =="]
    for name, path in sorted(report.inputs.items()):
        lines.append(f"  input {name}: {path}")
    if report.options:
        opts = ", ".join(f"{k}={_scalar(v)}" for k, v in sorted(report.options.items()))
        lines.append(f"  options: {opts}")

    lines.append("values:")
    for name, value in sorted(report.values.items()):
        lines.append(f"  {name:<24} {_scalar(value)}")

    if report.certificates:
        lines.append("certificates:")
        for name, value in sorted(report.certificates.items()):
            lines.append(f"  {name:<24} {_scalar(value)}")

    if report.checks:
        lines.append("checks:")
        for name, passed in sorted(report.checks.items()):
            lines.append(f"  [{'PASS' if passed else 'FAIL'}] {name}")

    lines.append("OK" if report.ok else "FAILED")
    return lines
