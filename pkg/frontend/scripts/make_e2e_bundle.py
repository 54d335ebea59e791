"""Build a small model bundle for the frontend end-to-end tests."""

import sys
import tempfile
from pathlib import Path

from mofit import datagen
from mofit.experiment import BenchmarkConfig, export_models, run_benchmark


def main(out_dir: str) -> int:
    out = Path(out_dir)
    if (out / "manifest.json").exists():
        print(f"bundle already present at {out}")
        return 0
    work = Path(tempfile.mkdtemp(prefix="mofit-e2e-"))
    paths = datagen.write_datasets(work / "data")
    config = BenchmarkConfig(
        obesity_csv=str(paths["obesity"]), bodyfat_csv=str(paths["bodyfat"]),
        output_dir=str(work / "bench"), n_trials=2, ga_population=2,
        samplers=("random",), workers=2)
    run_benchmark(config, write_outputs=True)
    export_models(config, bundle_dir=out)
    print(f"bundle written to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1]))
