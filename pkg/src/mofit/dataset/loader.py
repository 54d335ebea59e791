"""CSV loading with manifest-backed validation."""

from __future__ import annotations

import csv
import io
import logging
from pathlib import Path

from .schema import COL_NUMERIC, manifest_for
from .types import RawTable

log = logging.getLogger(__name__)


class LoadError(ValueError):
    pass


def _as_text_lines(data) -> list[str]:
    if isinstance(data, RawTable):
        raise TypeError("already loaded")
    if isinstance(data, (bytes, bytearray)):
        text = data.decode("utf-8-sig")
    elif isinstance(data, str):
        text = data
    elif isinstance(data, Path):
        text = data.read_text(encoding="utf-8-sig")
    elif hasattr(data, "read"):
        raw = data.read()
        text = raw.decode("utf-8-sig") if isinstance(raw, (bytes, bytearray)) else raw
    else:
        raise TypeError(f"cannot load CSV from {type(data)!r}")
    return text.splitlines()


def load_csv(data, source_id: str) -> RawTable:
    """Parse and validate one of the two source CSVs.

    Rejects wrong dimensions, empty cells and unparseable numerics, per the
    manifest for `source_id`.  Duplicate rows are kept but reported.
    """
    manifest = manifest_for(source_id)
    reader = csv.reader(_as_text_lines(data))
    try:
        header = next(reader)
    except StopIteration:
        raise LoadError("empty CSV") from None
    header = [h.strip() for h in header]
    if header != manifest.column_names:
        raise LoadError(
            f"header mismatch for {source_id}: expected {manifest.column_names}, "
            f"got {header}"
        )

    numeric = [c.type == COL_NUMERIC for c in manifest.columns]
    rows: list[list] = []
    for r, record in enumerate(reader):
        if not record:
            continue
        if len(record) != manifest.expected_columns:
            raise LoadError(
                f"row {r} has {len(record)} cells, expected {manifest.expected_columns}"
            )
        parsed: list = []
        for c, cell in enumerate(record):
            cell = cell.strip()
            if cell == "":
                raise LoadError(f"missing value at ({r}, {c})")
            if numeric[c]:
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise LoadError(
                        f"unparseable numeric at ({r}, {c}): {cell!r}"
                    ) from None
            else:
                parsed.append(cell)
        rows.append(parsed)

    if len(rows) != manifest.expected_rows:
        raise LoadError(
            f"{source_id} must have {manifest.expected_rows} rows, got {len(rows)}"
        )

    n_duplicates = len(rows) - len({tuple(row) for row in rows})
    if n_duplicates:
        log.info("%s: %d duplicate rows (kept)", source_id, n_duplicates)

    return RawTable(column_names=header, rows=rows, source_id=source_id)


def load_csv_file(path: str | Path, source_id: str) -> RawTable:
    return load_csv(Path(path), source_id)
