"""Write the CSV data behind all nine figures into one directory.

    python3 scripts/regenerate_figures.py --out figures --workers 4
"""

import argparse
import pathlib
import time

from hypercs.cli import RunConfig, run_figure


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="figures")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for fid in range(1, 10):
        t0 = time.perf_counter()
        text = run_figure(RunConfig(command="figure", figure_id=fid, workers=args.workers))
        path = out / f"fig{fid}.csv"
        path.write_text(text)
        rows = text.count("\n") - 1
        print(f"fig{fid}: {rows} rows -> {path} ({time.perf_counter() - t0:.1f} s)")


if __name__ == "__main__":
    main()
