"""Service launcher: `mofit-serve --bundle <dir> --data-dir <dir>`."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mofit-serve",
                                     description="MOFit prediction/tracking service")
    parser.add_argument("--bundle", default=os.environ.get("MOFIT_BUNDLE", "bench_out/bundle"),
                        help="model bundle directory (env MOFIT_BUNDLE)")
    parser.add_argument("--data-dir", default=os.environ.get("MOFIT_DATA_DIR", "service_data"),
                        help="persistence directory (env MOFIT_DATA_DIR)")
    parser.add_argument("--host", default=os.environ.get("MOFIT_HOST", "127.0.0.1"))
    parser.add_argument("--port", type=int, default=int(os.environ.get("MOFIT_PORT", "8000")))
    parser.add_argument("--write-api-description", metavar="PATH",
                        help="write the versioned API description file and exit")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    from .app import build_api_description, make_app
    app = make_app(args.bundle, args.data_dir)

    if args.write_api_description:
        doc = build_api_description(app.state.registry)
        Path(args.write_api_description).write_text(json.dumps(doc, indent=1))
        print(f"api description written to {args.write_api_description}")
        return 0

    import uvicorn
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    sys.exit(main())
