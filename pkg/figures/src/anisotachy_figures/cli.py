"""Command-line front end: ``render <figure-id> --in <csv> [--in2 <csv>] --out <png>``.

Exit codes: 0 success, 1 output I/O failure, 2 bad usage or input schema.
On success one line per figure is printed with the key metadata.
"""

import argparse
import sys

from .render import FIGURE_IDS, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="render",
        description="Render a publication-style figure from simulation CSV output.",
    )
    p.add_argument("figure", choices=FIGURE_IDS, help="figure id")
    p.add_argument("--in", dest="csv_in", required=True, metavar="CSV",
                   help="input CSV produced by the simulation CLI")
    p.add_argument("--in2", dest="csv_in2", metavar="CSV",
                   help="optional second CSV (fig2a reference overlay)")
    p.add_argument("--out", required=True, metavar="PNG", help="output image path")
    p.add_argument("--cmap", help="matplotlib colormap override for heatmaps")
    p.add_argument("--no-references", action="store_true",
                   help="suppress the gray reference curves (fig2a)")
    p.add_argument("--t-l", type=float, default=None,
                   help="left-going onset time marker (units of 1/gamma)")
    p.add_argument("--t-r", type=float, default=None,
                   help="right-going onset time marker (units of 1/gamma)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        meta = render(
            args.figure,
            args.csv_in,
            args.out,
            csv2_path=args.csv_in2,
            cmap=args.cmap,
            references=not args.no_references,
            t_l=args.t_l,
            t_r=args.t_r,
        )
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"write failure: {exc}", file=sys.stderr)
        return 1
    detail = ", ".join(
        f"{k} = {meta[k]}" for k in sorted(meta) if k not in ("figure", "out")
    )
    print(f"{meta['figure']}: {detail} -> {meta['out']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
