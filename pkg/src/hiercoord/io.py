"""Plain-text channel files and the CSV/JSON result tables.

Channel file::

    N K
    g11 g12 ... g1K
    ...
    gN1 gN2 ... gNK

Result tables carry the run manifest: JSON files as a ``"manifest"`` key,
CSV files as a first line ``# manifest {...json...}`` before the header.
Floats are written with ``repr`` (shortest exact round-trip); NaN becomes an
empty CSV cell or JSON ``null``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import asdict
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import ChannelFileError
from .game import ChannelMatrix

TABLE_COLUMNS = (
    "axis_value",
    "algorithm",
    "mean_ee",
    "se_ee",
    "mean_se",
    "prob_exact",
    "prob_alpha_ge_threshold",
    "mean_alpha_star",
)
_MANIFEST_PREFIX = "# manifest "


def parse_channel_text(text: str) -> ChannelMatrix:
    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines:
        raise ChannelFileError("empty channel file")
    header = lines[0]
    if len(header) != 2:
        raise ChannelFileError(f"first line must be 'N K', got {' '.join(header)!r}")
    try:
        n, k = int(header[0]), int(header[1])
    except ValueError as exc:
        raise ChannelFileError(f"bad dimensions line: {' '.join(header)!r}") from exc
    rows = lines[1:]
    if len(rows) != n:
        raise ChannelFileError(f"expected {n} gain rows, found {len(rows)}")
    try:
        gains = np.array([[float(v) for v in row] for row in rows]) if n else np.zeros((0, k))
    except ValueError as exc:
        raise ChannelFileError(f"non-numeric gain: {exc}") from exc
    if any(len(row) != k for row in rows):
        raise ChannelFileError(f"every row must hold exactly {k} gains")
    try:
        return ChannelMatrix(gains)
    except ValueError as exc:
        raise ChannelFileError(str(exc)) from exc


def read_channel_file(path) -> ChannelMatrix:
    return parse_channel_text(Path(path).read_text())


def format_channel_text(channels: ChannelMatrix) -> str:
    n, k = channels.shape
    body = "\n".join(" ".join(repr(float(g)) for g in row) for row in channels.gains)
    return f"{n} {k}\n{body}\n"


def write_channel_file(path, channels: ChannelMatrix) -> None:
    atomic_write(path, format_channel_text(channels))


def atomic_write(path, text: str) -> None:
    """Write ``text`` to a sibling temporary file, then rename it over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _row_dict(row) -> dict:
    data = asdict(row) if not isinstance(row, dict) else dict(row)
    return {col: data[col] for col in TABLE_COLUMNS}


def _json_value(value):
    if isinstance(value, float) and math.isnan(value):
        return None
    if isinstance(value, np.generic):
        return value.item()
    return value


def _csv_value(value) -> str:
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return str(value)


def format_table(rows: Iterable, manifest: dict, fmt: str) -> str:
    records = [_row_dict(r) for r in rows]
    if fmt == "json":
        payload = {
            "manifest": manifest,
            "columns": list(TABLE_COLUMNS),
            "rows": [{k: _json_value(v) for k, v in rec.items()} for rec in records],
        }
        return json.dumps(payload, indent=2, sort_keys=False, allow_nan=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(_MANIFEST_PREFIX + json.dumps(manifest, sort_keys=True, allow_nan=False) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TABLE_COLUMNS)
        for rec in records:
            writer.writerow([_csv_value(rec[c]) for c in TABLE_COLUMNS])
        return buf.getvalue()
    raise ValueError(f"unknown table format {fmt!r}")


def write_table(path, rows: Iterable, manifest: dict, fmt: str) -> None:
    atomic_write(path, format_table(rows, manifest, fmt))


def _parse_cell(column: str, text: str):
    if column == "algorithm":
        return text
    if text == "":
        return math.nan
    if column == "axis_value":
        try:
            return int(text)
        except ValueError:
            return float(text)
    return float(text)


def read_table(path) -> tuple[dict, list[dict]]:
    """Inverse of :func:`write_table`; the format is detected from the content."""
    text = Path(path).read_text()
    if text.startswith(_MANIFEST_PREFIX):
        first, _, rest = text.partition("\n")
        manifest = json.loads(first[len(_MANIFEST_PREFIX):])
        reader = csv.DictReader(io.StringIO(rest))
        rows = [{c: _parse_cell(c, rec[c]) for c in TABLE_COLUMNS} for rec in reader]
        return manifest, rows
    payload = json.loads(text)
    rows = [{c: (math.nan if rec[c] is None else rec[c]) for c in TABLE_COLUMNS} for rec in payload["rows"]]
    return payload["manifest"], rows
