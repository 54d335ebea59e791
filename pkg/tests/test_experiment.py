"""Benchmark runner, determinism, leakage guard, bundle and CLI."""

import json
from pathlib import Path

import numpy as np
import pytest

from mofit.experiment import (BenchmarkConfig, ResultTable, export_models,
                              load_task_split, run_cell, tune_cell)
from mofit.experiment.cli import main as cli_main
from mofit.experiment.runner import run_benchmark
from mofit.dataset.types import EncodedDataset


@pytest.fixture(scope="module")
def fast_config(tmp_path_factory, data_dir) -> BenchmarkConfig:
    out = tmp_path_factory.mktemp("bench")
    return BenchmarkConfig(
        obesity_csv=str(data_dir / "obesity.csv"),
        bodyfat_csv=str(data_dir / "bodyfat.csv"),
        output_dir=str(out), n_trials=3, ga_population=3,
        samplers=("random",), workers=2)


@pytest.fixture(scope="module")
def fast_tables(fast_config):
    return run_benchmark(fast_config, write_outputs=True)


class TestRunner:
    def test_all_cells_complete(self, fast_config, fast_tables):
        assert len(fast_tables) == 3
        for table in fast_tables:
            assert table.all_complete()
            assert set(table.cells) == {(a, s) for a in fast_config.algorithms
                                        for s in fast_config.samplers}

    def test_cell_metric_shapes(self, fast_tables):
        by_task = {t.task: t for t in fast_tables}
        for cell in by_task["obesity_level"].cells.values():
            assert set(cell.metrics) == {"accuracy"}
        for task in ("body_weight", "body_fat"):
            for cell in by_task[task].cells.values():
                assert set(cell.metrics) == {"rmse", "mae", "mape"}
                assert cell.metrics["rmse"] >= cell.metrics["mae"]

    def test_history_files_budget_consistent(self, fast_config, fast_tables):
        table = [t for t in fast_tables if t.task == "body_fat"][0]
        for (algo, sampler), cell in table.cells.items():
            path = (Path(fast_config.output_dir) / "studies"
                    / f"body_fat__{algo}__{sampler}.json")
            doc = json.loads(path.read_text())
            assert len(doc["trials"]) == cell.n_trials == 3
            assert len(doc["history"]) >= 1

    def test_table_files_written(self, fast_config):
        out = Path(fast_config.output_dir)
        assert (out / "tables" / "body_fat.json").exists()
        text = (out / "tables" / "body_fat.txt").read_text()
        assert "RMSE" in text and "RandomForest" in text

    def test_rerun_bit_identical(self, fast_config, fast_tables, tmp_path):
        first = (Path(fast_config.output_dir) / "tables" / "body_fat.json").read_bytes()
        rerun_config = fast_config.override(output_dir=str(tmp_path / "rerun"),
                                            tasks=("body_fat",))
        run_benchmark(rerun_config, write_outputs=True)
        second = (tmp_path / "rerun" / "tables" / "body_fat.json").read_bytes()
        assert first == second

    def test_failed_cell_recorded_not_raised(self, fast_config, monkeypatch):
        import mofit.experiment.runner as runner_mod

        def broken(*args, **kwargs):
            raise RuntimeError("synthetic failure")

        monkeypatch.setattr(runner_mod, "tune_cell", broken)
        result, study = runner_mod.run_cell("body_fat", "knn", "random",
                                            load_task_split(fast_config, "body_fat"),
                                            fast_config)
        assert result.status == "failed" and "synthetic failure" in result.error
        assert study is None


class _Tripwire(EncodedDataset):
    """Raises on any feature/target access; proves the tuner never reads it."""

    def __init__(self, inner):
        self._inner = inner
        self.reads = 0

    def __getattribute__(self, name):
        if name in ("X", "y", "take"):
            object.__setattr__(self, "reads",
                               object.__getattribute__(self, "reads") + 1)
            raise AssertionError("test split accessed during tuning")
        if name in ("_inner", "reads"):
            return object.__getattribute__(self, name)
        return getattr(object.__getattribute__(self, "_inner"), name)


class TestNoLeakage:
    def test_tuning_never_touches_test_rows(self, fast_config):
        pair = load_task_split(fast_config, "body_fat")
        guarded = _Tripwire(pair.test)
        study = tune_cell("body_fat", "decision_tree", "random", pair.train,
                          fast_config)
        assert guarded.reads == 0  # tuning API cannot even see the test split
        assert len(study.trials) == fast_config.n_trials
        with pytest.raises(AssertionError):
            _ = guarded.X


class TestBundle:
    def test_export_and_roundtrip(self, fast_config, fast_tables, tmp_path):
        bundle = export_models(fast_config, bundle_dir=tmp_path / "bundle")
        manifest = json.loads((bundle / "manifest.json").read_text())
        assert set(manifest["models"]) == {"obesity_level", "body_weight", "body_fat"}
        assert len(list(bundle.glob("model__*.json"))) == 3
        assert len(list(bundle.glob("schema__*.json"))) == 3

        # round-trip: reloaded body-fat model reproduces test predictions
        from mofit.learners import load_model
        from mofit import algorithms
        entry = manifest["models"]["body_fat"]
        model = load_model(bundle / entry["model_file"])
        pair = load_task_split(fast_config, "body_fat")
        from mofit.experiment.runner import derive_seed
        refit = algorithms.fit(entry["algorithm"], pair.train, entry["best_params"],
                               seed=derive_seed(fast_config.master_seed, "body_fat",
                                                entry["algorithm"], "refit"))
        assert np.array_equal(model.predict_batch(pair.test.X),
                              refit.predict_batch(pair.test.X))

    def test_content_hash_stable_across_reruns(self, fast_config, fast_tables,
                                               tmp_path):
        b1 = export_models(fast_config, bundle_dir=tmp_path / "b1")
        b2 = export_models(fast_config, bundle_dir=tmp_path / "b2")
        h1 = json.loads((b1 / "manifest.json").read_text())["content_hash"]
        h2 = json.loads((b2 / "manifest.json").read_text())["content_hash"]
        assert h1 == h2

    def test_missing_study_errors(self, fast_config, tmp_path):
        empty = fast_config.override(output_dir=str(tmp_path / "empty"))
        with pytest.raises(FileNotFoundError, match="no study"):
            export_models(empty, bundle_dir=tmp_path / "nope")


class TestCLI:
    def test_datagen_and_run_and_table_and_history(self, tmp_path, capsys):
        assert cli_main(["datagen", "--out", str(tmp_path / "d")]) == 0
        config = {
            "obesity_csv": str(tmp_path / "d" / "obesity.csv"),
            "bodyfat_csv": str(tmp_path / "d" / "bodyfat.csv"),
            "output_dir": str(tmp_path / "out"),
            "n_trials": 2, "ga_population": 2,
            "tasks": ["body_fat"], "samplers": ["random"], "workers": 1,
        }
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(config))
        assert cli_main(["run", "--config", str(cfg_path)]) == 0
        out = capsys.readouterr().out
        assert "body-fat" in out and "artifacts written" in out

        assert cli_main(["table", "--config", str(cfg_path), "body_fat"]) == 0
        assert "RMSE" in capsys.readouterr().out

        assert cli_main(["history", "--config", str(cfg_path),
                         "body_fat", "knn", "random"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("trial_id") and len(lines) == 3



    def test_export_models_verb(self, fast_config, fast_tables, tmp_path):
        cfg_path = tmp_path / "module-config.json"
        fast_config.save(cfg_path)
        assert cli_main(["export-models", "--config", str(cfg_path),
                         "--bundle-dir", str(tmp_path / "bundle")]) == 0
        assert (tmp_path / "bundle" / "manifest.json").exists()

    def test_unknown_table_fails(self, tmp_path):
        assert cli_main(["table", "--data-dir", str(tmp_path), "body_fat",
                         "--output-dir", str(tmp_path / "missing")]) == 1
