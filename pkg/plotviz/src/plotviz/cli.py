import argparse
import sys
from pathlib import Path

from .render import STYLES, PlotInputError, PlotJob, render

EXIT_OK = 0
EXIT_INPUT = 2


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotviz",
        description="Render a trajectory CSV as a space-time heatmap or surface.",
    )
    parser.add_argument("csv", help="trajectory CSV (t,theta,K)")
    parser.add_argument("meta", help="diagnostics JSON with the resolved parameters")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--style", choices=STYLES, default="heatmap")
    args = parser.parse_args(argv)
    try:
        job = PlotJob(
            csv_path=Path(args.csv),
            meta_path=Path(args.meta),
            out_path=Path(args.out),
            style=args.style,
        )
        result = render(job)
    except PlotInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    red = int((result.classes < 0).sum())
    print(f"wrote {result.out_path} ({result.values.shape[0]}x{result.values.shape[1]} cells, {red} negative)")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
