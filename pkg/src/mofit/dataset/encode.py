"""Turn raw tables into numeric matrices according to a task schema."""

from __future__ import annotations

import numpy as np

from .schema import (COL_BINARY, COL_NUMERIC, COL_ONE_HOT, COL_ORDINAL,
                     FeatureSchema, FieldSpec, bodyfat_schema,
                     obesity_classification_schema, weight_regression_schema)
from .types import EncodedDataset, RawTable


class EncodingError(ValueError):
    pass


def _category_index(field: FieldSpec, value, row: int) -> int:
    try:
        return field.categories.index(value)
    except ValueError:
        raise EncodingError(
            f"row {row}: unlisted category {value!r} for {field.name} "
            f"(expected one of {list(field.categories)})"
        ) from None


def _encode_field(field: FieldSpec, value, row: int, out: np.ndarray, pos: int) -> int:
    """Write one field's encoding into out[pos:]; returns the next position."""
    if field.encoding == COL_NUMERIC:
        if not isinstance(value, (int, float)):
            raise EncodingError(f"row {row}: expected a number for {field.name}, got {value!r}")
        out[pos] = float(value)
        return pos + 1
    if field.encoding in (COL_BINARY, COL_ORDINAL):
        out[pos] = _category_index(field, value, row)
        return pos + 1
    if field.encoding == COL_ONE_HOT:
        idx = _category_index(field, value, row)
        out[pos:pos + field.width] = 0.0
        out[pos + idx] = 1.0
        return pos + field.width
    raise EncodingError(f"unknown encoding {field.encoding!r}")


def encode_table(table: RawTable, schema: FeatureSchema) -> EncodedDataset:
    """Encode a full RawTable; a pure function of its inputs."""
    if table.source_id != schema.source_id:
        raise EncodingError(
            f"schema {schema.task_id} expects source {schema.source_id!r}, "
            f"got {table.source_id!r}"
        )
    col_index = {name: i for i, name in enumerate(table.column_names)}
    for f in schema.fields:
        if f.name not in col_index:
            raise EncodingError(f"missing column {f.name!r}")

    n = table.n_rows
    X = np.zeros((n, schema.n_features), dtype=np.float64)
    for r, record in enumerate(table.rows):
        pos = 0
        for f in schema.fields:
            pos = _encode_field(f, record[col_index[f.name]], r, X[r], pos)

    target = schema.target
    if target.combine_mean_of:
        parts = [np.asarray([row[col_index[c]] for row in table.rows], dtype=np.float64)
                 for c in target.combine_mean_of]
        y = np.mean(parts, axis=0)
    elif target.kind.is_classification:
        labels = target.kind.labels
        y = np.empty(n, dtype=np.int64)
        for r, record in enumerate(table.rows):
            value = record[col_index[target.name]]
            try:
                y[r] = labels.index(value)
            except ValueError:
                raise EncodingError(
                    f"row {r}: unlisted target label {value!r}"
                ) from None
    else:
        y = np.asarray([row[col_index[target.name]] for row in table.rows],
                       dtype=np.float64)

    ds = EncodedDataset(X=X, y=y, feature_names=schema.feature_names,
                        target_kind=target.kind,
                        one_hot_groups=schema.one_hot_groups())
    ds.validate()
    return ds


def encode_payload(schema: FeatureSchema, payload: dict) -> tuple[np.ndarray, list[str]]:
    """Encode one request payload (field name -> raw value).

    Returns (vector, errors); errors is a list of field-level messages and
    the vector is only valid when it is empty.  Numeric fields are range
    checked against the manifest bounds.
    """
    out = np.zeros(schema.n_features, dtype=np.float64)
    errors: list[str] = []
    pos = 0
    for f in schema.fields:
        width = f.width
        if f.name not in payload:
            errors.append(f"{f.name}: missing field")
            pos += width
            continue
        value = payload[f.name]
        if f.encoding == COL_NUMERIC:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                errors.append(f"{f.name}: expected a number, got {value!r}")
            elif not np.isfinite(float(value)):
                errors.append(f"{f.name}: must be finite")
            elif f.lo is not None and float(value) < f.lo:
                errors.append(f"{f.name}: {value} below minimum {f.lo}")
            elif f.hi is not None and float(value) > f.hi:
                errors.append(f"{f.name}: {value} above maximum {f.hi}")
            else:
                out[pos] = float(value)
        else:
            if not isinstance(value, str) or value not in f.categories:
                errors.append(
                    f"{f.name}: {value!r} is not one of {list(f.categories)}"
                )
            elif f.encoding == COL_ONE_HOT:
                out[pos + f.categories.index(value)] = 1.0
            else:
                out[pos] = f.categories.index(value)
        pos += width
    return out, errors


def prepare_obesity_classification(table: RawTable) -> EncodedDataset:
    """Habit features -> 7-level obesity target (Weight/Height dropped)."""
    return encode_table(table, obesity_classification_schema())


def prepare_weight_regression(table: RawTable) -> EncodedDataset:
    """Habits + Height + obesity level (ordinal) -> Weight in kg."""
    return encode_table(table, weight_regression_schema())


def prepare_bodyfat(table: RawTable) -> EncodedDataset:
    """Body measurements -> BF = mean(BF1, BF2); derived columns dropped."""
    return encode_table(table, bodyfat_schema())
