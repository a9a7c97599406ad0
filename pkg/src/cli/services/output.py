"""CSV / JSON Lines writers with a fixed numeric rendering."""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from utils.errors import OutputError
from utils.helpers import render_number

logger = logging.getLogger("bridgewalk.cli.output")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, float, np.integer, np.floating, bool, np.bool_)):
        return render_number(value)
    return str(value)


def _prepare(path: Path) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {path.parent}: {exc.strerror}") from exc


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> int:
    """Write rows under a header; returns the number of data rows."""
    _prepare(path)
    count = 0
    try:
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_cell(row[name]) for name in columns])
                count += 1
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror}") from exc
    logger.info("Wrote %d row(s) to %s", count, path)
    return count


def _jsonable(value: Any) -> Any:
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if np.isfinite(value) else render_number(value)
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    return value


def write_jsonl(path: Path, records: Iterable[Mapping[str, Any]]) -> int:
    _prepare(path)
    count = 0
    try:
        with path.open("w", encoding="utf-8", newline="\n") as handle:
            for record in records:
                handle.write(json.dumps(_jsonable(record), separators=(",", ":")))
                handle.write("\n")
                count += 1
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror}") from exc
    logger.info("Wrote %d record(s) to %s", count, path)
    return count


def write_json(path: Path, payload: Mapping[str, Any]) -> None:
    _prepare(path)
    try:
        path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n", "utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror}") from exc
