"""
Report Renderer - Text, JSON, markdown and HTML output of result records
"""

import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, TextIO

import markdown
from pygments import highlight
from pygments.formatters import TerminalFormatter
from pygments.lexers import JsonLexer

from core.intlinalg import AbelianInvariants
from resources.report_themes import ReportThemes

logger = logging.getLogger(__name__)


@dataclass
class ResultRecord:
    """One command result as echoed to the user"""
    command: str
    inputs: Dict[str, Any]
    invariants: Optional[AbelianInvariants] = None
    resolution: Optional[str] = None
    details: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        data: Dict[str, Any] = {"command": self.command, "inputs": dict(self.inputs)}
        if self.resolution is not None:
            data["resolution"] = self.resolution
        if self.invariants is not None:
            data["invariants"] = self.invariants.to_dict()
            data["primary"] = self.invariants.primary()
        data.update(self.details)
        data["notes"] = list(self.notes)
        data["elapsed"] = round(self.elapsed, 6)
        return data

    def summary(self) -> str:
        """The human-readable result line"""
        inputs = ", ".join(f"{k}={v}" for k, v in self.inputs.items())
        if self.invariants is not None:
            primary = self.invariants.primary()
            text = f"{self.invariants}    primary {primary if primary else '[]'} ({self.invariants.primary_str()})"
        elif "text" in self.details:
            text = self.details["text"]
        else:
            text = json.dumps({k: v for k, v in self.details.items()}, default=str)
        return f"{self.command}({inputs}): {text}"


class Timer:
    """Context manager filling ResultRecord.elapsed"""

    def __init__(self, record: ResultRecord):
        self.record = record

    def __enter__(self):
        self._start = time.perf_counter()
        return self.record

    def __exit__(self, *exc):
        self.record.elapsed = time.perf_counter() - self._start
        return False


class ReportRenderer:
    """Writes records to a stream or to a report file"""

    def __init__(self, stream: TextIO = None, use_color: Optional[bool] = None):
        self.stream = stream or sys.stdout
        if use_color is None:
            use_color = hasattr(self.stream, "isatty") and self.stream.isatty()
        self.use_color = use_color
        self.md = markdown.Markdown(
            extensions=[
                'codehilite',
                'fenced_code',
                'tables',
            ],
            extension_configs={
                'codehilite': {
                    'css_class': 'highlight',
                    'use_pygments': True
                }
            }
        )

    def write_text(self, records: List[ResultRecord]):
        for record in records:
            self.stream.write(record.summary() + "\n")
            for note in record.notes:
                self.stream.write(f"  note: {note}\n")

    def to_json_payload(self, payload) -> str:
        return json.dumps(payload, indent=2, default=str)

    def to_json(self, records: List[ResultRecord]) -> str:
        payload = [r.to_dict() for r in records]
        return self.to_json_payload(payload[0] if len(payload) == 1 else payload)

    def write_json(self, records: List[ResultRecord]):
        text = self.to_json(records)
        if self.use_color:
            text = highlight(text, JsonLexer(), TerminalFormatter())
        self.stream.write(text.rstrip("\n") + "\n")

    def to_markdown(self, records: List[ResultRecord], title: str = "homocalc report") -> str:
        lines = [f"# {title}", "", "| command | inputs | result | primary | resolution | seconds |",
                 "|---|---|---|---|---|---|"]
        for r in records:
            inputs = ", ".join(f"{k}={v}" for k, v in r.inputs.items())
            if r.invariants is not None:
                result, primary = f"`{r.invariants}`", r.invariants.primary_str()
            else:
                result, primary = f"`{r.details.get('text', '')}`", ""
            lines.append(f"| {r.command} | {inputs} | {result} | {primary} | "
                         f"{r.resolution or ''} | {r.elapsed:.3f} |")
        lines += ["", "## Records", "", "```json", self.to_json(records), "```", ""]
        return "\n".join(lines)

    def to_html(self, records: List[ResultRecord], theme: str = "light") -> str:
        self.md.reset()
        body = self.md.convert(self.to_markdown(records))
        css = ReportThemes.get_theme(theme)
        return f"""<!DOCTYPE html>
<html>
<head>
    <meta charset="utf-8">
    <title>homocalc report</title>
    <style>
        {css}
    </style>
</head>
<body>
{body}
</body>
</html>
"""

    def write_report(self, records: List[ResultRecord], path: str, theme: str = "light"):
        """Markdown for .md files, HTML otherwise"""
        ext = os.path.splitext(path)[1].lower()
        content = self.to_markdown(records) if ext in (".md", ".markdown") else self.to_html(records, theme)
        try:
            with open(path, 'w', encoding='utf-8') as f:
                f.write(content)
            logger.info(f"Report written to {path}")
        except OSError as e:
            raise RuntimeError(f"Failed to write report: {e}") from e
