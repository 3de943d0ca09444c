"""Random-tableau benchmark over a range of qubit counts, all three methods.

Thin wrapper around ``cliffsynth bench`` that also writes the CSV to disk.

    python scripts/bench_table.py --n 1..4 --samples 10 --timeout 600 --out results/bench.csv
"""

import argparse
import contextlib
import io
import sys
from pathlib import Path

from cliffsynth.cli import BENCH_METHODS, main


def run():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="1..4")
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--timeout", type=float, default=600.0, help="seconds per SAT query")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results/bench.csv"))
    args = ap.parse_args()

    argv = [
        "bench", "--n", args.n, "--samples", str(args.samples), "--seed", str(args.seed),
        "--timeout", str(args.timeout), "--jobs", str(args.jobs), "--method", ",".join(BENCH_METHODS),
    ]
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    sys.stdout.write(buf.getvalue())
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(run())
