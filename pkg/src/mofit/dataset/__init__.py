"""Dataset loading, encoding and splitting."""

from .encode import (EncodingError, encode_payload, encode_table,
                     prepare_bodyfat, prepare_obesity_classification,
                     prepare_weight_regression)
from .loader import LoadError, load_csv, load_csv_file
from .schema import (OBESITY_CLASSES, TASK_SCHEMAS, FeatureSchema, Manifest,
                     bodyfat_schema, manifest_for,
                     obesity_classification_schema, weight_regression_schema)
from .split import kfold_indices, split
from .types import (SOURCE_BODYFAT, SOURCE_OBESITY, TASK_CLASSIFICATION,
                    TASK_REGRESSION, EncodedDataset, RawTable, SplitPair,
                    TargetKind)

__all__ = [
    "load_csv", "load_csv_file", "LoadError",
    "encode_table", "encode_payload", "EncodingError",
    "prepare_obesity_classification", "prepare_weight_regression", "prepare_bodyfat",
    "split", "kfold_indices",
    "FeatureSchema", "Manifest", "manifest_for", "TASK_SCHEMAS", "OBESITY_CLASSES",
    "obesity_classification_schema", "weight_regression_schema", "bodyfat_schema",
    "RawTable", "EncodedDataset", "SplitPair", "TargetKind",
    "SOURCE_OBESITY", "SOURCE_BODYFAT", "TASK_CLASSIFICATION", "TASK_REGRESSION",
]
