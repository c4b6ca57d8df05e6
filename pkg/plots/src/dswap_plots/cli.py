"""dswap-plot: render a figure spec JSON into an image file."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, plot


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="dswap-plot",
        description="regenerate dswap experiment figures from CSV outputs",
    )
    parser.add_argument("--spec", required=True, help="figure spec JSON file")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec.from_json(args.spec)
        plot(spec, args.out)
    except (OSError, ValueError, KeyError) as exc:
        print(f"dswap-plot: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
