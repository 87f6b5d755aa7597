# -*- coding: utf-8 -*-

from rich.console import Console
from rich.highlighter import RegexHighlighter
from rich.theme import Theme

# Default color scheme for reports
DEFAULT_THEME = Theme(
    {
        "good": "green",
        "poor": "red",
        "report.number": "cyan",
        "report.path": "magenta",
    }
)

# Consoles for rendering output
console = Console(theme=DEFAULT_THEME, soft_wrap=True)
err_console = Console(theme=DEFAULT_THEME, stderr=True)


class ReportHighlighter(RegexHighlighter):
    """Highlighter that colors numbers and file paths in summary lines."""

    base_style = "report."
    highlights = [
        r"(?P<number>(?<![\w.])[-+]?\d+(\.\d+)?([eE][-+]?\d+)?)",
        r"(?P<path>[\w./-]+\.(csv|jsonl|json))",
    ]
