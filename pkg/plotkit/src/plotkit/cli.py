"""plot <kind> --in <csv> --out <img>: standalone figure regeneration."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .recipes import KINDS, FigureRecipe, Style
from .render import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render publication-style figures from rabiholo CSV outputs.",
    )
    parser.add_argument("kind", choices=KINDS, help="figure kind")
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        help="input CSV (repeat for multi-panel kinds)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--title", default=None, help="figure title")
    parser.add_argument("--xlabel", default=None, help="x-axis label override")
    parser.add_argument("--ylabel", default=None, help="y-axis label override")
    parser.add_argument("--even-style", default="-",
                        help="line style for even-parity levels (default solid)")
    parser.add_argument("--odd-style", default="--",
                        help="line style for odd-parity levels (default dashed)")
    parser.add_argument("--dpi", type=int, default=150, help="raster resolution")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    recipe = FigureRecipe(
        kind=args.kind,
        inputs=tuple(Path(p) for p in args.inputs),
        output=Path(args.out),
        style=Style(
            title=args.title,
            xlabel=args.xlabel,
            ylabel=args.ylabel,
            even_linestyle=args.even_style,
            odd_linestyle=args.odd_style,
            dpi=args.dpi,
        ),
    )
    try:
        out = render(recipe)
    except (ValueError, OSError) as exc:
        print(f"plot: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
