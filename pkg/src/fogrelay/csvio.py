"""Deterministic CSV output: 17-significant-digit floats, LF newlines.

The fixed float formatting round-trips doubles exactly, so regression
diffs of emitted files are byte-level meaningful.
"""

import os

from .experiments import TableData


def format_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def render_table(table: TableData) -> str:
    lines = [",".join(table.header)]
    lines.extend(",".join(format_value(v) for v in row) for row in table.rows)
    return "\n".join(lines) + "\n"


def write_table(out_dir: str, table: TableData) -> str:
    """Write one table under out_dir; returns the file path."""
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, table.filename)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_table(table))
    return path
