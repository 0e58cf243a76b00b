"""One-line check summaries for stderr"""

from typing import Iterable

from rich.console import Console
from rich.text import Text

from ..models.report import Check, Report


def check_line(check: Check) -> Text:
    """Render a check summary"""
    text = Text()

    if check.passed:
        text.append("● ", style="bold green")
        text.append(check.name, style="green")
    else:
        text.append("○ ", style="bold red")
        text.append(check.name, style="red")

    if check.t is not None or check.params:
        text.append(" | ", style="dim")
        text.append(check.label, style="dim")

    text.append(" | ", style="dim")
    text.append(f"defect {check.max_defect:.3e}", style="dim")
    return text


def summary_line(report: Report) -> Text:
    failure = report.first_failure
    text = Text()
    if failure is None:
        text.append("● ", style="bold green")
        text.append(f"{report.command}: all {len(report.checks)} checks passed", style="green")
    else:
        text.append("○ ", style="bold red")
        text.append(f"{report.command}: first failure {failure.name}", style="red")
        if failure.label:
            text.append(" | ", style="dim")
            text.append(failure.label, style="dim")
    return text


def print_checks(console: Console, checks: Iterable[Check]):
    for check in checks:
        console.print(check_line(check))
