"""CSV helpers shared by observation files and experiment records."""

from __future__ import annotations

import csv
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from io import StringIO
from pathlib import Path
from typing import Any

__all__ = [
    "ParseResult",
    "parse_table",
    "read_table",
    "write_records",
    "write_table",
]


@dataclass(slots=True)
class ParseResult:
    """Result of parsing a CSV payload."""

    headers: list[str] | None
    rows: list[list[str]]


def parse_table(value: str) -> ParseResult:
    """Parse ``value`` into a header row and data rows; blank lines are skipped."""

    rows = [row for row in csv.reader(StringIO(value)) if any(cell.strip() for cell in row)]
    if not rows:
        return ParseResult(headers=None, rows=[])
    return ParseResult(headers=[cell.strip() for cell in rows[0]], rows=rows[1:])


def read_table(path: str | Path) -> ParseResult:
    """Read and parse a CSV file."""

    return parse_table(Path(path).read_text(encoding="utf-8"))


def write_table(headers: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Render rows with non-numeric fields quoted, so digit strings stay verbatim."""

    output = StringIO()
    writer = csv.writer(output, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
    writer.writerow(list(headers))
    writer.writerows(rows)
    return output.getvalue()


def write_records(path: str | Path, records: Sequence[Mapping[str, Any]]) -> Path:
    """Write a list of flat mappings; columns appear in first-seen order."""

    headers: list[str] = []
    for record in records:
        headers.extend(key for key in record if key not in headers)
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(
        write_table(headers, ([record.get(key, "") for key in headers] for record in records)),
        encoding="utf-8",
    )
    return target
