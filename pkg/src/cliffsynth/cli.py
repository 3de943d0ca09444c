"""Command-line interface: ``cliffsynth {synth,optimize,verify,encode,random,bench}``.

Exit codes: 0 success, 1 user/input error, 2 budget exhausted without a
certificate, 3 internal verification failure.  Flags override environment
variables (``CLIFFSYNTH_TIMEOUT``, ``CLIFFSYNTH_SOLVER``, ...), which override
built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import random
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .circuit import Circuit, emit_circuit, layerize, metrics, parse_circuit
from .encoder import GateSet, build_encoding, encoding_stats
from .errors import (
    CircuitSyntaxError,
    CliffSynthError,
    DecodeVerificationError,
    InternalConsistencyError,
    InvalidArgument,
    NonCliffordGateError,
    SearchTimeout,
)
from .partition import HeuristicConfig, run_heuristic
from .satio import Limits, export_dimacs, make_backend
from .search import LINEAR_UP, STRATEGIES, SearchStrategy, synth_optimal
from .tableau import (
    NON_CLIFFORD,
    Tableau,
    first_difference,
    format_tableau,
    is_symplectic,
    parse_tableau,
    random_gate_word,
    simulate,
    tableau_equal,
)

EXIT_OK, EXIT_USER, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3
ENV_PREFIX = "CLIFFSYNTH_"
BENCH_METHODS = ("optimal", "heuristic-vertical", "heuristic-horizontal")

log = logging.getLogger("cliffsynth")


class UserError(Exception):
    pass


def _env(name: str, default, cast=str):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise UserError(f"environment variable {ENV_PREFIX}{name}={raw!r} is not a valid {cast.__name__}")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UserError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _looks_like_tableau(text: str) -> bool:
    for line in text.splitlines():
        if line.strip():
            return line.strip().isdigit()
    return False


def load_target(args) -> tuple[Tableau, Circuit | None]:
    if args.tableau:
        t = parse_tableau(_read(args.tableau))
        if not is_symplectic(t):
            raise UserError(f"{args.tableau}: tableau fails the symplectic validity check")
        return t, None
    c = parse_circuit(_read(args.circuit))
    return simulate(c), c


def random_clifford_circuit(n: int, seed: int) -> Circuit:
    """Circuit of the gate word behind ``random_tableau(n, seed)``."""
    word = random_gate_word(n, 12 * n * n, random.Random(seed))
    return layerize(n, word)


# ---------------------------------------------------------------------------
# commands


def cmd_synth(args) -> int:
    target, circuit = load_target(args)
    gates = GateSet.parse(args.gates)
    ub = circuit.depth if circuit is not None else None
    strategy = SearchStrategy(args.strategy, upper_bound=ub)
    try:
        report = synth_optimal(
            target,
            gates,
            strategy,
            Limits(wall_time=args.timeout),
            symmetry=not args.no_symmetry,
            backend=make_backend(args.solver),
        )
    except SearchTimeout as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if not tableau_equal(simulate(report.circuit), target):
        print("error: synthesized circuit failed re-verification", file=sys.stderr)
        return EXIT_INTERNAL
    _write(args.out, emit_circuit(report.circuit))
    out = sys.stderr if args.out in (None, "-") else sys.stdout
    print(f"depth: {report.optimal_depth}", file=out)
    print(f"certified: {str(report.certified).lower()}", file=out)
    print(f"time: {report.wall_time:.3f}s", file=out)
    if not report.certified and not args.best_effort:
        return EXIT_BUDGET
    return EXIT_OK


def _t_sequences(c: Circuit) -> list[list[str]]:
    """Per qubit, the ordered T/Tdg gates it sees."""
    seqs: list[list[str]] = [[] for _ in range(c.n)]
    for g in c.gates:
        if g.kind in NON_CLIFFORD:
            seqs[g.qubits[0]].append(g.kind)
    return seqs


def _heuristic_config(args) -> HeuristicConfig:
    try:
        return HeuristicConfig(
            split_size=args.split_depth,
            depth_threshold=args.depth_threshold,
            max_qubits=args.max_qubits,
            limits=Limits(wall_time=args.timeout),
            jobs=args.jobs,
            gates=GateSet.parse(args.gates),
            symmetry=not args.no_symmetry,
        )
    except InvalidArgument as exc:
        raise UserError(str(exc)) from None


def cmd_optimize(args) -> int:
    c = parse_circuit(_read(args.circuit))
    cfg = _heuristic_config(args)
    result = run_heuristic(c, cfg)
    out = result.circuit
    if _t_sequences(out) != _t_sequences(c):
        print("error: T-gate placement changed during optimization", file=sys.stderr)
        return EXIT_INTERNAL
    if c.is_clifford and not tableau_equal(simulate(out), simulate(c)):
        print("error: optimized circuit failed re-verification", file=sys.stderr)
        return EXIT_INTERNAL
    _write(args.out, emit_circuit(out))
    report = sys.stderr if args.out in (None, "-") else sys.stdout
    print(f"input depth: {c.depth}", file=report)
    print(f"output depth: {out.depth}", file=report)
    print(f"leaves: {len(result.leaves)} (timeouts: {result.timeouts})", file=report)
    return EXIT_OK


def _load_any(path: str) -> tuple[str, Tableau]:
    text = _read(path)
    if _looks_like_tableau(text):
        return "tableau", parse_tableau(text)
    c = parse_circuit(text)
    if not c.is_clifford:
        raise UserError(f"{path}: verification needs Clifford-only circuits (found T/Tdg gates)")
    return "circuit", simulate(c)


def cmd_verify(args) -> int:
    _, a = _load_any(args.first)
    _, b = _load_any(args.second)
    if a.n != b.n:
        print(f"qubit count mismatch: {a.n} vs {b.n}")
        return EXIT_USER
    k = first_difference(a, b)
    if k is None:
        print("equivalent")
        return EXIT_OK
    kind = "destabilizer" if k < a.n else "stabilizer"
    print(f"not equivalent: row {k} ({kind}) differs: {a.row(k).to_label()} vs {b.row(k).to_label()}")
    return EXIT_USER


def cmd_encode(args) -> int:
    target, _ = load_target(args)
    instance = build_encoding(target, args.depth, GateSet.parse(args.gates), not args.no_symmetry)
    _write(args.dimacs, export_dimacs(instance))
    stats = encoding_stats(instance)
    if args.dimacs and args.dimacs != "-":
        sidecar = {
            "n": target.n,
            "d_max": args.depth,
            "stats": stats,
            "variables": {str(v): name for v, name in instance.layout.describe().items()},
        }
        Path(args.dimacs + ".map.json").write_text(json.dumps(sidecar, indent=1))
        print(json.dumps(stats))
    return EXIT_OK


def cmd_random(args) -> int:
    from .tableau import random_tableau

    _write(args.out, format_tableau(random_tableau(args.n, args.seed)))
    return EXIT_OK


def _parse_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UserError(f"bad qubit range {text!r}; use e.g. 2..4 or 2,3") from None


def sample_seed(seed: int, n: int, i: int) -> int:
    return (seed * 1_000_003 + n * 1_009 + i) % 2**64


def _bench_sample(job):
    n, method, seed, i, timeout, cfg = job
    s = sample_seed(seed, n, i)
    start = time.perf_counter()
    timed_out = False
    if method == "optimal":
        target = simulate(random_clifford_circuit(n, s))
        try:
            report = synth_optimal(target, limits=Limits(wall_time=timeout))
            circuit = report.circuit
            timed_out = not report.certified
        except SearchTimeout:
            circuit, timed_out = None, True
    else:
        source = random_clifford_circuit(n, s)
        if method == "heuristic-vertical":
            cfg = HeuristicConfig(cfg.split_size, cfg.depth_threshold, max(n, 2), cfg.limits, 1, cfg.gates)
        result = run_heuristic(source, cfg)
        circuit = result.circuit
        timed_out = result.timeouts > 0
    elapsed = time.perf_counter() - start
    if circuit is None:
        return None, elapsed, True
    depth, count, _ = metrics(circuit)
    return (depth, count), elapsed, timed_out


def cmd_bench(args) -> int:
    ns = _parse_range(args.n)
    methods = [m.strip() for m in args.method.split(",")]
    for m in methods:
        if m not in BENCH_METHODS:
            raise UserError(f"unknown method {m!r}; choose from {BENCH_METHODS}")
    if args.samples < 1:
        raise UserError("--samples must be at least 1")
    cfg = _heuristic_config(args)
    jobs = [(n, m, args.seed, i, args.timeout, cfg) for n in ns for m in methods for i in range(args.samples)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_bench_sample, jobs))
    else:
        results = [_bench_sample(j) for j in jobs]

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["n", "d", "gates", "t", "method", "samples", "seed", "timeouts"])
    by_key: dict[tuple[int, str], list] = {}
    for job, res in zip(jobs, results):
        by_key.setdefault((job[0], job[1]), []).append(res)
    for n in ns:
        for m in methods:
            rows = by_key[(n, m)]
            done = [r[0] for r in rows if r[0] is not None]
            d = statistics.fmean(x[0] for x in done) if done else float("nan")
            g = statistics.fmean(x[1] for x in done) if done else float("nan")
            t = statistics.fmean(r[1] for r in rows)
            writer.writerow([n, f"{d:.2f}", f"{g:.2f}", f"{t:.3f}", m, len(rows), args.seed, sum(r[2] for r in rows)])
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _add_target(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--tableau", metavar="FILE", help="target tableau file")
    src.add_argument("--circuit", metavar="FILE", help="circuit whose tableau is the target")


def _add_common(p):
    p.add_argument("--gates", default=_env("GATES", "I,H,S,Sdg,X,Y,Z,CNOT"), help="gate set, comma separated")
    p.add_argument("--timeout", type=float, default=_env("TIMEOUT", None, float), metavar="SECS",
                   help="wall-time limit per SAT query")
    p.add_argument("--no-symmetry", action="store_true", help="disable symmetry-breaking clauses")
    p.add_argument("--solver", default=_env("SOLVER", "internal"), help="internal[:name] or exec:PATH")


def _add_heuristic(p):
    p.add_argument("--split-depth", type=int, default=_env("SPLIT_DEPTH", 6, int), metavar="S")
    p.add_argument("--depth-threshold", type=int, default=_env("DEPTH_THRESHOLD", 12, int), metavar="D")
    p.add_argument("--max-qubits", type=int, default=_env("MAX_QUBITS", 5, int), metavar="N")
    p.add_argument("--jobs", type=int, default=_env("JOBS", 1, int), metavar="K")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cliffsynth", description="Depth-optimal Clifford synthesis via SAT")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a depth-optimal circuit")
    _add_target(p)
    _add_common(p)
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--strategy", choices=STRATEGIES, default=_env("STRATEGY", LINEAR_UP))
    p.add_argument("--best-effort", action="store_true", help="exit 0 even without an optimality certificate")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("optimize", help="divide-and-conquer depth reduction of a Clifford+T circuit")
    p.add_argument("--circuit", metavar="FILE", required=True)
    p.add_argument("--out", metavar="FILE")
    _add_common(p)
    _add_heuristic(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify", help="check two circuits (or circuit and tableau) for equivalence")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("encode", help="write the depth-bounded CNF as DIMACS plus a variable map")
    _add_target(p)
    _add_common(p)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--dimacs", metavar="FILE")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("random", help="write a random tableau")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=_env("SEED", 0, int))
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("bench", help="random-tableau benchmark, CSV on stdout")
    p.add_argument("--n", default="2..4", help="qubit counts, e.g. 2..4")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--method", default="optimal", help=f"comma list of {', '.join(BENCH_METHODS)}")
    p.add_argument("--seed", type=int, default=_env("SEED", 0, int))
    _add_common(p)
    _add_heuristic(p)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
    except UserError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (DecodeVerificationError, InternalConsistencyError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UserError, CircuitSyntaxError, NonCliffordGateError, InvalidArgument) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    except CliffSynthError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
