# utils/report_formatter.py
"""
Text and CSV rendering for command results. Text output rounds reals to 12
significant digits; JSON output keeps full doubles.
"""
import csv
import io
import json
import os
from typing import Any, Dict, Iterable, List, Optional, Sequence

from core.logger import logger

SIGNIFICANT_DIGITS = 12


def format_value(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(format_value(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {format_value(v)}" for k, v in value.items()) + "}"
    return str(value)


def render_text(payload: Dict[str, Any], indent: int = 0) -> str:
    lines: List[str] = []
    pad = "  " * indent
    for key, value in payload.items():
        if isinstance(value, dict) and value:
            lines.append(f"{pad}{key}:")
            lines.append(render_text(value, indent + 1))
        elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  - " + ", ".join(f"{k}={format_value(v)}" for k, v in item.items()))
        else:
            lines.append(f"{pad}{key}: {format_value(value)}")
    return "\n".join(lines)


def render_table(rows: Sequence[Dict[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
    if not rows:
        return ""
    columns = list(columns or rows[0].keys())
    cells = [[format_value(row.get(c)) for c in columns] for row in rows]
    widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(columns)]
    header = "  ".join(c.ljust(w) for c, w in zip(columns, widths))
    body = ["  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in cells]
    return "\n".join([header, "  ".join("-" * w for w in widths)] + body)


def rows_to_csv(rows: Iterable[Dict[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
    rows = list(rows)
    buffer = io.StringIO()
    if not rows and not columns:
        return ""
    writer = csv.DictWriter(buffer, fieldnames=list(columns or rows[0].keys()), extrasaction="ignore",
                            lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buffer.getvalue()


def to_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2)


def emit(text: str, out: Optional[str] = None) -> None:
    """Write to the output path, or stdout when none is given."""
    if out is None:
        print(text)
        return
    directory = os.path.dirname(out)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(out, "w", encoding="utf-8") as f:
        f.write(text if text.endswith("\n") else text + "\n")
    logger.info(f"Report written to '{out}'.")
