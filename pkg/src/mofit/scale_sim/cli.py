"""Simulated weighing device: `mofit-scale --service-url ... --schedule ...`."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import read, startup
from .publisher import Publisher, http_transport


def load_schedule(path: str | Path) -> list[dict]:
    """JSON list of {"at": seconds_from_start, "grams": mass}, sorted by time."""
    items = json.loads(Path(path).read_text())
    for item in items:
        if "at" not in item or "grams" not in item:
            raise ValueError("schedule entries need 'at' and 'grams'")
    return sorted(items, key=lambda x: float(x["at"]))


def run_device(args, post=None, sleep=time.sleep) -> int:
    state = startup(args.device_id, args.offset, args.counts_per_gram,
                    noise_stddev_counts=args.noise, seed=args.seed,
                    calibration_mass_g=args.calibration_mass)
    post = post or http_transport(args.service_url)
    publisher = Publisher(args.device_id, post)
    publisher.register()

    schedule = load_schedule(args.schedule) if args.schedule else [
        {"at": i * args.interval, "grams": g}
        for i, g in enumerate((100.0, 250.0, 50.0))
    ]
    start = time.time()
    backlog = False
    for item in schedule:
        delay = float(item["at"]) / args.speed - (time.time() - start)
        if delay > 0:
            sleep(delay)
        state, grams = read(state, float(item["grams"]))
        ok = publisher.publish(grams)
        backlog = backlog or not ok
        print(f"{args.device_id}: {grams:.1f} g "
              f"({'sent' if ok else 'queued, service unreachable'})")
    if publisher.queue:
        print(f"{len(publisher.queue)} readings still queued", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mofit-scale",
                                     description="simulated smart weighing scale")
    parser.add_argument("--device-id", default="scale-1")
    parser.add_argument("--service-url", default="http://127.0.0.1:8000")
    parser.add_argument("--offset", type=int, default=8400,
                        help="factory ADC zero offset, counts")
    parser.add_argument("--counts-per-gram", type=float, default=420.0)
    parser.add_argument("--noise", type=float, default=2.0,
                        help="ADC noise stddev, counts")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--calibration-mass", type=float, default=100.0)
    parser.add_argument("--schedule", help="JSON mass schedule file")
    parser.add_argument("--interval", type=float, default=1.0,
                        help="seconds between default readings")
    parser.add_argument("--speed", type=float, default=1.0,
                        help="time acceleration for demos")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run_device(args)


if __name__ == "__main__":
    sys.exit(main())
