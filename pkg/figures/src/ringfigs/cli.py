"""Batch renderer: `ringfigs <spec.json> [<spec.json> ...]`."""

from __future__ import annotations

import argparse
import sys

from .render import FigureSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Render figure panels from simulator CSV/JSON outputs.")
    parser.add_argument("specs", nargs="+", help="Figure spec JSON files.")
    args = parser.parse_args(argv)
    for path in args.specs:
        out = render(FigureSpec.load(path))
        print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
