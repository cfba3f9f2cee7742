"""Command-line batch renderer: one subcommand per figure kind."""

from __future__ import annotations

import argparse
import sys

from .io import FigureError, Style
from .render import FigureRequest, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epdoublet-figures",
        description="Render publication-style figures from exported doublet data.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    specs = (
        ("surfaces", "two-sheeted Re/Im energy surfaces from a model JSON"),
        ("section3d", "3-d section curve plus its three projections from a trajectory CSV"),
        ("loop", "monodromy loop in the complex energy plane from a loop trajectory CSV"),
    )
    for kind, help_text in specs:
        p = sub.add_parser(kind, help=help_text)
        p.add_argument("input", help="exported input file")
        p.add_argument("output", help="image file to write")
        p.add_argument("--style", default=None, help="style config file (key = value)")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        style = Style.load(args.style) if args.style else Style()
        out = render(FigureRequest(args.kind, args.input, args.output, style=style))
    except FigureError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    sys.stdout.write(f"{out}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
