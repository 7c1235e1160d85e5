"""Standalone entry point: plotkit --kind dist_overlay --in file.csv --out fig.png"""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, EmptyDataError, PlotSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plotkit", description=__doc__)
    parser.add_argument("--kind", choices=KINDS, required=True)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True, help="input CSV file(s)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--manifest", default=None, help="run manifest JSON (default: sibling of the first CSV)")
    parser.add_argument("--log-y", action="store_true", help="logarithmic y axis")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(inputs=args.inputs, kind=args.kind, out=args.out, log_y=args.log_y, manifest=args.manifest)
    try:
        path = render(spec)
    except (SchemaError, EmptyDataError, FileNotFoundError) as exc:
        print(f"plotkit: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
