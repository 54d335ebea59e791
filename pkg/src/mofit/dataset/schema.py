"""Schema manifests and per-task feature schemas.

The two JSON manifests in ``manifests/`` pin column names, category lists
and orderings for the source CSVs; they are the single source of truth for
the loader, the encoders, the benchmark CLI and the serving API.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .types import SOURCE_BODYFAT, SOURCE_OBESITY, TargetKind

COL_NUMERIC = "numeric"
COL_BINARY = "binary"
COL_ORDINAL = "ordinal"
COL_ONE_HOT = "one_hot"
COL_CLASS_LABEL = "class_label"

ROLE_FEATURE = "feature"
ROLE_TARGET = "target"
ROLE_DROPPED = "dropped"

OBESITY_CLASSES = (
    "Insufficient_Weight",
    "Normal_Weight",
    "Overweight_Level_I",
    "Overweight_Level_II",
    "Obesity_Type_I",
    "Obesity_Type_II",
    "Obesity_Type_III",
)


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    type: str
    categories: tuple[str, ...] = ()
    lo: float | None = None
    hi: float | None = None


@dataclass(frozen=True)
class Manifest:
    version: int
    source_id: str
    expected_rows: int
    columns: tuple[ColumnSpec, ...]

    @property
    def expected_columns(self) -> int:
        return len(self.columns)

    @property
    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def column(self, name: str) -> ColumnSpec:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)


def _load_manifest(name: str) -> Manifest:
    text = resources.files("mofit.dataset").joinpath(f"manifests/{name}.json").read_text()
    doc = json.loads(text)
    cols = tuple(
        ColumnSpec(name=c["name"], type=c["type"],
                   categories=tuple(c.get("categories", ())),
                   lo=c.get("lo"), hi=c.get("hi"))
        for c in doc["columns"]
    )
    return Manifest(version=doc["manifest_version"], source_id=doc["source_id"],
                    expected_rows=doc["expected_rows"], columns=cols)


_MANIFESTS: dict[str, Manifest] = {}


def manifest_for(source_id: str) -> Manifest:
    if source_id not in (SOURCE_OBESITY, SOURCE_BODYFAT):
        raise ValueError(f"unknown source_id {source_id!r}")
    if source_id not in _MANIFESTS:
        _MANIFESTS[source_id] = _load_manifest(source_id)
    return _MANIFESTS[source_id]


@dataclass(frozen=True)
class FieldSpec:
    """One input field of a task: a source column with its encoding."""

    name: str
    encoding: str  # numeric | binary | ordinal | one_hot
    categories: tuple[str, ...] = ()
    lo: float | None = None
    hi: float | None = None

    @property
    def width(self) -> int:
        return len(self.categories) if self.encoding == COL_ONE_HOT else 1

    def feature_names(self) -> list[str]:
        if self.encoding == COL_ONE_HOT:
            return [f"{self.name}={c}" for c in self.categories]
        return [self.name]


@dataclass(frozen=True)
class TargetSpec:
    name: str
    kind: TargetKind
    # columns averaged to form the target (body-fat case); empty = direct
    combine_mean_of: tuple[str, ...] = ()


@dataclass(frozen=True)
class FeatureSchema:
    """Input fields + target of one prediction task, in encoding order."""

    task_id: str
    source_id: str
    fields: tuple[FieldSpec, ...]
    target: TargetSpec
    dropped: tuple[str, ...] = ()
    version: int = 1

    def __post_init__(self):
        names = [f.name for f in self.fields]
        if len(set(names)) != len(names):
            raise ValueError("duplicate field names")

    @property
    def feature_names(self) -> list[str]:
        out: list[str] = []
        for f in self.fields:
            out.extend(f.feature_names())
        return out

    @property
    def n_features(self) -> int:
        return sum(f.width for f in self.fields)

    def one_hot_groups(self) -> list[list[int]]:
        groups = []
        pos = 0
        for f in self.fields:
            if f.encoding == COL_ONE_HOT:
                groups.append(list(range(pos, pos + f.width)))
            pos += f.width
        return groups

    def to_doc(self) -> dict:
        return {
            "schema_version": self.version,
            "task_id": self.task_id,
            "source_id": self.source_id,
            "fields": [
                {"name": f.name, "encoding": f.encoding,
                 "categories": list(f.categories), "lo": f.lo, "hi": f.hi}
                for f in self.fields
            ],
            "target": {
                "name": self.target.name,
                "kind": self.target.kind.kind,
                "labels": list(self.target.kind.labels),
                "units": self.target.kind.units,
                "combine_mean_of": list(self.target.combine_mean_of),
            },
            "dropped": list(self.dropped),
        }

    @staticmethod
    def from_doc(doc: dict) -> "FeatureSchema":
        fields = tuple(
            FieldSpec(name=f["name"], encoding=f["encoding"],
                      categories=tuple(f["categories"]), lo=f["lo"], hi=f["hi"])
            for f in doc["fields"]
        )
        t = doc["target"]
        target = TargetSpec(
            name=t["name"],
            kind=TargetKind(kind=t["kind"], labels=tuple(t["labels"]), units=t["units"]),
            combine_mean_of=tuple(t["combine_mean_of"]),
        )
        return FeatureSchema(task_id=doc["task_id"], source_id=doc["source_id"],
                             fields=fields, target=target,
                             dropped=tuple(doc["dropped"]),
                             version=doc["schema_version"])


def _habit_fields(manifest: Manifest) -> list[FieldSpec]:
    """Obesity habit columns in manifest order, excluding target and body size."""
    fields = []
    for col in manifest.columns:
        if col.name in ("Weight", "Height", "NObeyesdad"):
            continue
        encoding = {COL_NUMERIC: COL_NUMERIC, COL_BINARY: COL_BINARY,
                    COL_ORDINAL: COL_ORDINAL, COL_ONE_HOT: COL_ONE_HOT}[col.type]
        fields.append(FieldSpec(name=col.name, encoding=encoding,
                                categories=col.categories, lo=col.lo, hi=col.hi))
    return fields


def obesity_classification_schema() -> FeatureSchema:
    """Habits -> 7 ordered obesity levels; Weight and Height are dropped."""
    manifest = manifest_for(SOURCE_OBESITY)
    target = TargetSpec(name="NObeyesdad",
                        kind=TargetKind(kind="classes", labels=OBESITY_CLASSES))
    return FeatureSchema(task_id="obesity_level", source_id=SOURCE_OBESITY,
                         fields=tuple(_habit_fields(manifest)), target=target,
                         dropped=("Weight", "Height"))


def weight_regression_schema() -> FeatureSchema:
    """Habits + height + obesity level -> body weight in kg."""
    manifest = manifest_for(SOURCE_OBESITY)
    height = manifest.column("Height")
    fields = _habit_fields(manifest)
    fields.append(FieldSpec(name="Height", encoding=COL_NUMERIC,
                            lo=height.lo, hi=height.hi))
    fields.append(FieldSpec(name="NObeyesdad", encoding=COL_ORDINAL,
                            categories=OBESITY_CLASSES))
    target = TargetSpec(name="Weight", kind=TargetKind(kind="real", units="kg"))
    return FeatureSchema(task_id="body_weight", source_id=SOURCE_OBESITY,
                         fields=tuple(fields), target=target, dropped=())


BODYFAT_DROPPED = ("BF1", "BF2", "Density", "AI", "FatFreeWeight")


def bodyfat_schema() -> FeatureSchema:
    """Body measurements -> body-fat percent, the mean of the two estimates."""
    manifest = manifest_for(SOURCE_BODYFAT)
    fields = tuple(
        FieldSpec(name=c.name, encoding=COL_NUMERIC, lo=c.lo, hi=c.hi)
        for c in manifest.columns
        if c.name not in BODYFAT_DROPPED
    )
    target = TargetSpec(name="BF",
                        kind=TargetKind(kind="real", units="percent"),
                        combine_mean_of=("BF1", "BF2"))
    return FeatureSchema(task_id="body_fat", source_id=SOURCE_BODYFAT,
                         fields=fields, target=target, dropped=BODYFAT_DROPPED)


TASK_SCHEMAS = {
    "obesity_level": obesity_classification_schema,
    "body_weight": weight_regression_schema,
    "body_fat": bodyfat_schema,
}
