"""Command line entry point: ``figplots plot <kind> --in a.csv [b.csv ...] --out fig.png``."""

import argparse
import sys

from .plots import KINDS, EmptyDataset, MissingColumn, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figplots")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("plot", help="render a CSV dataset to an image")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--in", dest="inputs", nargs="+", required=True,
                   metavar="CSV")
    p.add_argument("--out", required=True, metavar="IMG")
    p.add_argument("--xlabel", default="")
    p.add_argument("--ylabel", default="")
    p.add_argument("--title", default="")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(kind=args.kind, inputs=tuple(args.inputs), output=args.out,
                    xlabel=args.xlabel, ylabel=args.ylabel, title=args.title)
    try:
        render(spec)
    except (MissingColumn, EmptyDataset, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
