"""linkfigs: render figures from linkcap CSV output.

    linkfigs --figure fig2a --in sweep.csv --out fig2a.png
"""

import argparse
import sys

from linkfigs.figures import FIGURE_IDS, FigureError, FigureSpec, render


def main(argv=None):
    parser = argparse.ArgumentParser(prog="linkfigs", description=__doc__)
    parser.add_argument("--figure", required=True, choices=FIGURE_IDS)
    parser.add_argument("--in", dest="csv_path", required=True,
                        help="input CSV from the linkcap CLI")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)
    try:
        render(FigureSpec(args.csv_path, args.figure, args.out, args.dpi))
    except (FigureError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
