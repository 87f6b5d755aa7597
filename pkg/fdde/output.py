#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Writers for result tables.

The format follows the file extension: comma-separated values (csv) or JSON
lines (jsonl). Files are written next to their destination and moved into
place, so a reader never sees a partial table.
"""

import csv
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence, TextIO, Union

import jsonlines

from .errors import ConfigError

# Supported output formats, by file extension
OUTPUT_FORMATS = ("csv", "jsonl")

# Floats are written with enough digits to round-trip
FLOAT_FORMAT = "%.17g"

Row_T = Dict[str, Any]


def format_float(value: float) -> str:
    return FLOAT_FORMAT % value


def output_format(path: Union[str, Path]) -> str:
    """The output format implied by a file extension."""
    fmt = Path(path).suffix.lstrip(".").lower()
    if fmt not in OUTPUT_FORMATS:
        raise ConfigError(f"unsupported output format: {fmt or Path(path).name}")
    return fmt


def _format_row(row: Row_T) -> Row_T:
    return {k: format_float(v) if isinstance(v, float) else v for k, v in row.items()}


def write_table(
    file: TextIO, fmt: str, fieldnames: Sequence[str], rows: Iterable[Row_T]
) -> int:
    """Write rows to an open text stream, returning how many were written."""
    count = 0
    if fmt == "csv":
        writer = csv.DictWriter(file, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(_format_row(row))
            count += 1
    else:
        with jsonlines.Writer(file) as lines:
            for row in rows:
                lines.write({k: row[k] for k in fieldnames})
                count += 1
    return count


def write_rows(
    path: Union[str, Path], fieldnames: Sequence[str], rows: Iterable[Row_T]
) -> Path:
    """Write rows to path atomically, returning the path written."""
    path = Path(path)
    fmt = output_format(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf8", newline="") as file:
            count = write_table(file, fmt, fieldnames, rows)
        os.chmod(tmp_name, 0o644)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logging.info(f"wrote {count} rows to {path}")
    return path
