"""Benchmark command line: run, table, export-models, history, datagen."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .. import datagen
from ..hpo.study import Study
from .bundle import export_models
from .config import BenchmarkConfig
from .runner import ResultTable, run_benchmark


def _load_config(args) -> BenchmarkConfig:
    if args.config:
        config = BenchmarkConfig.load(args.config)
    else:
        data_dir = Path(getattr(args, "data_dir", "data") or "data")
        config = BenchmarkConfig(obesity_csv=str(data_dir / "obesity.csv"),
                                 bodyfat_csv=str(data_dir / "bodyfat.csv"))
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["master_seed"] = args.seed
    if getattr(args, "budget", None) is not None:
        overrides["n_trials"] = args.budget
    if getattr(args, "output_dir", None):
        overrides["output_dir"] = args.output_dir
    if getattr(args, "workers", None) is not None:
        overrides["workers"] = args.workers
    return config.override(**overrides) if overrides else config


def cmd_run(args) -> int:
    config = _load_config(args)
    tables = run_benchmark(config, write_outputs=True)
    ok = True
    for table in tables:
        print(table.render_text(config.samplers, config.algorithms))
        ok = ok and table.all_complete()
    print(f"artifacts written to {config.output_dir}")
    return 0 if ok else 1


def cmd_table(args) -> int:
    config = _load_config(args)
    path = Path(config.output_dir) / "tables" / f"{args.task}.json"
    if not path.exists():
        print(f"no table for {args.task} under {config.output_dir}", file=sys.stderr)
        return 1
    table = ResultTable.from_doc(json.loads(path.read_text()))
    print(table.render_text(config.samplers, config.algorithms))
    return 0


def cmd_export_models(args) -> int:
    config = _load_config(args)
    selections = None
    if args.selections:
        selections = json.loads(args.selections)
    bundle = export_models(config, selections=selections, bundle_dir=args.bundle_dir)
    print(f"bundle written to {bundle}")
    return 0


def cmd_history(args) -> int:
    config = _load_config(args)
    path = (Path(config.output_dir) / "studies"
            / f"{args.task}__{args.algorithm}__{args.sampler}.json")
    if not path.exists():
        print(f"no study at {path}", file=sys.stderr)
        return 1
    study = Study.load(path)
    print("trial_id\tobjective\tbest_so_far")
    for trial_id, objective, best in study.history():
        print(f"{trial_id}\t{objective:.6f}\t{best:.6f}")
    return 0


def cmd_datagen(args) -> int:
    paths = datagen.write_datasets(args.out, seed=args.seed)
    for source, path in paths.items():
        print(f"{source}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mofit",
        description="Obesity / body-weight / body-fat benchmark pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="benchmark config JSON")
    common.add_argument("--data-dir", default="data",
                        help="directory holding obesity.csv / bodyfat.csv")
    common.add_argument("--seed", type=int, help="master seed override")
    common.add_argument("--budget", type=int, help="trials per cell override")
    common.add_argument("--output-dir", help="artifact directory override")
    common.add_argument("--workers", type=int, help="worker processes (0 = per CPU)")

    p = sub.add_parser("run", parents=[common], help="run the full benchmark")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("table", parents=[common], help="print one task's table")
    p.add_argument("task")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("export-models", parents=[common],
                       help="write the serving bundle from benchmark artifacts")
    p.add_argument("--selections", help='JSON like {"obesity_level": "random_forest"}')
    p.add_argument("--bundle-dir", help="bundle output directory")
    p.set_defaults(func=cmd_export_models)

    p = sub.add_parser("history", parents=[common],
                       help="dump one study's optimization history")
    p.add_argument("task")
    p.add_argument("algorithm")
    p.add_argument("sampler")
    p.set_defaults(func=cmd_history)

    p = sub.add_parser("datagen", help="write the synthetic stand-in datasets")
    p.add_argument("--out", default="data")
    p.add_argument("--seed", type=int, default=datagen.DEFAULT_SEED)
    p.set_defaults(func=cmd_datagen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
