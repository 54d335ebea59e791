"""Deployment bundle: the three serving models plus their schemas."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .. import algorithms
from ..dataset.schema import (bodyfat_schema, obesity_classification_schema,
                              weight_regression_schema)
from ..hpo.study import Study
from ..learners import load_model, model_from_doc, model_to_doc
from .config import (TASK_BODYFAT, TASK_OBESITY, TASK_WEIGHT, BenchmarkConfig)
from .runner import derive_seed, load_task_split

BUNDLE_FORMAT = "mofit-bundle"
BUNDLE_VERSION = 1

DEFAULT_SELECTIONS = {
    TASK_OBESITY: algorithms.ALGO_RANDOM_FOREST,
    TASK_WEIGHT: algorithms.ALGO_EXTRA_TREES,
    TASK_BODYFAT: algorithms.ALGO_GBM,
}

_SCHEMA_BUILDERS = {
    TASK_OBESITY: obesity_classification_schema,
    TASK_WEIGHT: weight_regression_schema,
    TASK_BODYFAT: bodyfat_schema,
}


def _best_study(bench_dir: Path, task_id: str, algorithm_id: str,
                samplers) -> tuple[str, Study]:
    """Pick the sampler whose study reached the best CV objective."""
    candidates = []
    for sampler in samplers:
        path = bench_dir / "studies" / f"{task_id}__{algorithm_id}__{sampler}.json"
        if path.exists():
            candidates.append((sampler, Study.load(path)))
    if not candidates:
        raise FileNotFoundError(
            f"no study found for {task_id}/{algorithm_id} under {bench_dir}"
        )
    def score(item):
        sampler, study = item
        best = study.best_trial.objective
        return -best if study.direction == "maximize" else best
    candidates.sort(key=score)
    return candidates[0]


def export_models(config: BenchmarkConfig, selections: dict | None = None,
                  bundle_dir: str | Path | None = None) -> Path:
    """Refit the selected algorithm per task on its training split and write
    the serving bundle (models + schema manifests + content hash)."""
    selections = {**DEFAULT_SELECTIONS, **(selections or {})}
    bench_dir = Path(config.output_dir)
    out = Path(bundle_dir) if bundle_dir is not None else bench_dir / "bundle"
    out.mkdir(parents=True, exist_ok=True)

    entries = {}
    for task_id, algorithm_id in selections.items():
        sampler, study = _best_study(bench_dir, task_id, algorithm_id,
                                     config.samplers)
        best = study.best_trial
        pair = load_task_split(config, task_id)
        refit_seed = derive_seed(config.master_seed, task_id, algorithm_id, "refit")
        model = algorithms.fit(algorithm_id, pair.train, best.params, seed=refit_seed)
        schema = _SCHEMA_BUILDERS[task_id]()

        model_file = f"model__{task_id}.json"
        schema_file = f"schema__{task_id}.json"
        (out / model_file).write_text(json.dumps(model_to_doc(model),
                                                 separators=(",", ":")))
        (out / schema_file).write_text(json.dumps(schema.to_doc(), indent=1))
        entries[task_id] = {
            "algorithm": algorithm_id,
            "sampler": sampler,
            "best_params": best.params,
            "cv_objective": best.objective,
            "model_file": model_file,
            "schema_file": schema_file,
        }

    digest = hashlib.sha256()
    for task_id in sorted(entries):
        for key in ("model_file", "schema_file"):
            name = entries[task_id][key]
            digest.update(name.encode())
            digest.update((out / name).read_bytes())
    manifest = {
        "format": BUNDLE_FORMAT,
        "version": BUNDLE_VERSION,
        "master_seed": config.master_seed,
        "content_hash": digest.hexdigest(),
        "models": entries,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True))
    return out


def load_bundle_manifest(bundle_dir: str | Path) -> dict:
    manifest = json.loads((Path(bundle_dir) / "manifest.json").read_text())
    if manifest.get("format") != BUNDLE_FORMAT:
        raise ValueError("not a model bundle")
    if manifest.get("version") != BUNDLE_VERSION:
        raise ValueError(f"unsupported bundle version {manifest.get('version')}")
    return manifest
