"""Depth before/after the divide-and-conquer optimizer on the Grover fixtures.

    python scripts/grover_trend.py [--dir tests/fixtures/grover] [--jobs 4]
"""

import argparse
import statistics
import time
from pathlib import Path

from cliffsynth.circuit import parse_circuit
from cliffsynth.partition import HeuristicConfig, run_heuristic


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dir", type=Path, default=Path(__file__).resolve().parents[1] / "tests/fixtures/grover")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    cfg = HeuristicConfig(jobs=args.jobs)
    rows = []
    print(f"{'circuit':<20} {'depth':>5} {'opt':>5} {'gain%':>6} {'time':>6}")
    for path in sorted(args.dir.glob("*.qasm")):
        c = parse_circuit(path.read_text())
        start = time.perf_counter()
        res = run_heuristic(c, cfg)
        elapsed = time.perf_counter() - start
        gain = 100 * (c.depth - res.depth) / c.depth
        rows.append((c.depth, res.depth))
        print(f"{path.stem:<20} {c.depth:>5} {res.depth:>5} {gain:>6.2f} {elapsed:>6.2f}")
    before = statistics.fmean(r[0] for r in rows)
    after = statistics.fmean(r[1] for r in rows)
    per_circuit = statistics.fmean(100 * (b - a) / b for b, a in rows)
    print(f"mean depth {before:.2f} -> {after:.2f}; mean per-circuit reduction {per_circuit:.2f}%")


if __name__ == "__main__":
    main()
