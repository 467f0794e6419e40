"""Command line wrapper: plotgen <csv...> --out fig.png [--dpi 150] [--labels ...]"""

from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotgen",
        description="Render entropy-trace CSVs (schema=1) into one figure",
    )
    parser.add_argument("csv", nargs="+", help="input trace CSV files")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--dpi", type=int, default=150)
    parser.add_argument("--labels", nargs="+", help="one legend label per input")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(inputs=args.csv, out=args.out, labels=args.labels, dpi=args.dpi)
    try:
        info = render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}: {info['curves']} curves, "
          f"{len(info['bound_lines'])} bound lines")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
