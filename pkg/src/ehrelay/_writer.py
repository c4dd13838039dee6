# See LICENSE for details.

"""
Responsible for writing result rows as CSV or JSON and for reading CSV
results back.
"""

from __future__ import annotations

import csv
import io
import json

from pathlib import Path
from typing import Any, Iterable

import click

from ._runner import COLUMNS, ResultRow


_INTEGER_COLUMNS = {"n_relays", "trials", "seed"}
_TEXT_COLUMNS = {"scheme", "method"}


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        # repr round-trips exactly.
        return repr(value)
    return str(value)


def render_csv(rows: Iterable[ResultRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        record = row.as_record()
        writer.writerow([_cell(record[column]) for column in COLUMNS])
    return buffer.getvalue()


def render_json(rows: Iterable[ResultRow]) -> str:
    records = [
        {column: row.as_record()[column] for column in COLUMNS} for row in rows
    ]
    return json.dumps(records, indent=2) + "\n"


def render(rows: Iterable[ResultRow], fmt: str) -> str:
    if fmt == "json":
        return render_json(rows)
    return render_csv(rows)


def write_output(content: str, output: str) -> None:
    """
    Write *content* to the file *output*, or to standard output for ``-``.
    """
    if output == "-":
        click.echo(content, nl=False)
        return
    with Path(output).open("w", encoding="utf8", newline="") as f:
        f.write(content)


def _parse_cell(column: str, text: str) -> Any:
    if text == "":
        return None
    if column in _TEXT_COLUMNS:
        return text
    if column in _INTEGER_COLUMNS:
        return int(text)
    return float(text)


def parse_csv(text: str) -> list[ResultRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != COLUMNS:
        raise ValueError(f"unexpected columns {header}")
    rows = []
    for cells in reader:
        values = {c: _parse_cell(c, cell) for c, cell in zip(COLUMNS, cells)}
        rows.append(ResultRow(**values))
    return rows
