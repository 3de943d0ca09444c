"""Depth minimisation on top of the per-depth SAT encoding.

``synth_optimal`` runs one fresh SAT query per probed depth.  A report is
*certified* when the log holds an UNSAT answer at ``optimal_depth - 1`` (or
the target is the identity).  ``brute_force_min_depth`` is an independent
meet-in-the-middle search over tableaus used as a test oracle.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache

from .circuit import Circuit
from .encoder import DEFAULT_GATES, GateSet, build_encoding, decode_model
from .errors import DecodeVerificationError, InvalidArgument, SearchTimeout
from .satio import NO_LIMITS, SAT, UNKNOWN, UNSAT, Limits, SatBackend, make_backend
from .tableau import Gate, Tableau, apply_gates, identity_tableau, simulate, tableau_equal

LINEAR_UP = "linear-up"
LINEAR_DOWN = "linear-down"
BINARY = "binary"
GEOMETRIC = "geometric"
STRATEGIES = (LINEAR_UP, LINEAR_DOWN, BINARY, GEOMETRIC)


def default_depth_cap(n: int) -> int:
    """Depth every n-qubit Clifford is known to fit in (9n on a line, so also all-to-all)."""
    return 9 * n + 1


@dataclass(frozen=True)
class SearchStrategy:
    kind: str = LINEAR_UP
    initial_guess: int | None = None
    upper_bound: int | None = None

    def __post_init__(self):
        if self.kind not in STRATEGIES:
            raise InvalidArgument(f"unknown strategy {self.kind!r}; choose from {STRATEGIES}")


@dataclass
class DepthQuery:
    depth: int
    status: str
    conflicts: int = 0
    decisions: int = 0
    wall_time: float = 0.0
    num_vars: int = 0
    num_clauses: int = 0


@dataclass
class DepthResult:
    status: str
    circuit: Circuit | None
    query: DepthQuery


@dataclass
class SynthesisReport:
    circuit: Circuit | None
    optimal_depth: int | None
    certified: bool
    log: list[DepthQuery] = field(default_factory=list)
    wall_time: float = 0.0

    def status_at(self, depth: int) -> str | None:
        for q in self.log:
            if q.depth == depth:
                return q.status
        return None


def synth_at_depth(
    target: Tableau,
    d: int,
    gates: GateSet = DEFAULT_GATES,
    limits: Limits = NO_LIMITS,
    symmetry: bool = True,
    backend: SatBackend | None = None,
) -> DepthResult:
    """One SAT query: is there a circuit of depth <= ``d`` realizing ``target``?"""
    if d < 0:
        raise InvalidArgument(f"depth must be non-negative, got {d}")
    backend = backend or make_backend()
    instance = build_encoding(target, d, gates, symmetry)
    outcome = backend.solve(instance, limits)
    query = DepthQuery(
        d,
        outcome.status,
        outcome.conflicts,
        outcome.decisions,
        outcome.wall_time,
        instance.num_vars,
        instance.num_clauses,
    )
    circuit = None
    if outcome.status == SAT:
        circuit = decode_model(instance.layout, outcome.model, target)
    return DepthResult(outcome.status, circuit, query)


class _Search:
    def __init__(self, target, gates, limits, symmetry, backend):
        self.target = target
        self.gates = gates
        self.limits = limits
        self.symmetry = symmetry
        self.backend = backend or make_backend()
        self.log: list[DepthQuery] = []
        self.best: Circuit | None = None
        self.unknown_seen = False
        self.max_unsat = -1

    def query(self, d: int) -> str:
        res = synth_at_depth(self.target, d, self.gates, self.limits, self.symmetry, self.backend)
        self.log.append(res.query)
        if res.status == SAT:
            if self.best is None or res.circuit.depth < self.best.depth:
                self.best = res.circuit
        elif res.status == UNSAT:
            self.max_unsat = max(self.max_unsat, d)
        else:
            self.unknown_seen = True
        return res.status

    def known(self, d: int) -> str | None:
        for q in self.log:
            if q.depth == d and q.status != UNKNOWN:
                return q.status
        return None

    def linear_up(self, start: int, max_depth: int | None) -> None:
        d = start
        while True:
            if max_depth is not None and d > max_depth:
                return
            if self.query(d) == SAT:
                return
            d += 1

    def linear_down(self, upper: int) -> None:
        d = upper
        status = self.query(d)
        if status == UNSAT:
            return
        if status == UNKNOWN:
            return
        d = self.best.depth - 1
        while d >= 0:
            status = self.query(d)
            if status != SAT:
                return
            d = self.best.depth - 1

    def binary(self, lo: int, hi: int) -> None:
        """``lo`` is treated as infeasible, ``hi`` as feasible."""
        while hi - lo > 1:
            mid = (lo + hi) // 2
            status = self.query(mid)
            if status == SAT:
                hi = self.best.depth
            else:
                lo = mid

    def geometric(self, guess: int, max_depth: int | None) -> None:
        d = max(guess, 1)
        lo = 0
        while True:
            if max_depth is not None and d > max_depth:
                return
            status = self.query(d)
            if status == SAT:
                break
            lo = d
            if max_depth is not None and d >= max_depth:
                return
            d = 2 * d if max_depth is None else min(2 * d, max_depth)
        self.binary(lo, self.best.depth)


def synth_optimal(
    target: Tableau,
    gates: GateSet = DEFAULT_GATES,
    strategy: SearchStrategy = SearchStrategy(),
    limits: Limits = NO_LIMITS,
    symmetry: bool = True,
    backend: SatBackend | None = None,
    max_depth: int | None = None,
) -> SynthesisReport:
    """Find a minimum-depth circuit for ``target`` and try to certify it.

    ``limits`` apply to each SAT query.  A query that hits its limit is
    never taken as an UNSAT proof, so such runs end uncertified.  Upward
    probing stops at ``max_depth`` (default ``default_depth_cap(n)``).
    """
    start = time.perf_counter()
    if tableau_equal(target, identity_tableau(target.n)):
        return SynthesisReport(Circuit(target.n), 0, True, [], time.perf_counter() - start)

    if max_depth is None:
        max_depth = default_depth_cap(target.n)
    s = _Search(target, gates, limits, symmetry, backend)
    kind = strategy.kind
    ub = strategy.upper_bound
    if kind in (LINEAR_DOWN, BINARY) and ub is None:
        kind = LINEAR_UP if kind == LINEAR_DOWN else GEOMETRIC
    if kind == LINEAR_UP:
        s.linear_up(1, max_depth)
    elif kind == LINEAR_DOWN:
        s.linear_down(ub)
        if s.best is None and s.known(ub) == UNSAT:
            s.linear_up(ub + 1, max_depth)
    elif kind == BINARY:
        if s.query(ub) == SAT:
            s.binary(0, s.best.depth)
        elif s.known(ub) == UNSAT:
            s.geometric(2 * ub, max_depth)
    else:
        s.geometric(strategy.initial_guess or 1, max_depth)

    if s.best is None:
        raise SearchTimeout(f"no satisfiable depth found (log: {[(q.depth, q.status) for q in s.log]})")
    depth = s.best.depth
    # make the certificate explicit in the log
    if s.known(depth - 1) is None and not _unknown_at(s.log, depth - 1):
        s.query(depth - 1)
    certified = s.known(depth - 1) == UNSAT
    if not tableau_equal(simulate(s.best), target):
        raise DecodeVerificationError("reported circuit does not reproduce the target")
    return SynthesisReport(s.best, depth, certified, s.log, time.perf_counter() - start)


def _unknown_at(log: list[DepthQuery], d: int) -> bool:
    return any(q.depth == d and q.status == UNKNOWN for q in log)


# ---------------------------------------------------------------------------
# brute-force oracle


def enumerate_layers(n: int, gates: GateSet = DEFAULT_GATES) -> list[tuple[Gate, ...]]:
    """Every non-empty layer: each qubit gets a single-qubit gate or joins one CNOT."""
    singles = [g for g in gates.single_qubit if g != "I"]
    out: list[tuple[Gate, ...]] = []

    def rec(q: int, used: frozenset, acc: list[Gate]):
        if q == n:
            if acc:
                out.append(tuple(acc))
            return
        if q in used:
            rec(q + 1, used, acc)
            return
        rec(q + 1, used, acc)  # identity on q
        for kind in singles:
            rec(q + 1, used, acc + [Gate(kind, (q,))])
        for other in range(q + 1, n):
            if other in used:
                continue
            for kind in gates.two_qubit:
                for pair in ((q, other), (other, q)):
                    rec(q + 1, used | {other}, acc + [Gate(kind, pair)])

    rec(0, frozenset(), [])
    return out


def _bfs_levels(start: Tableau, layers, depth: int) -> list[set[Tableau]]:
    seen = {start}
    levels = [{start}]
    for _ in range(depth):
        nxt = set()
        for t in levels[-1]:
            for layer in layers:
                u = apply_gates(t, layer)
                if u not in seen:
                    seen.add(u)
                    nxt.add(u)
        levels.append(nxt)
    return levels


@lru_cache(maxsize=8)
def _forward_levels(n: int, gates: GateSet, depth: int) -> list[set[Tableau]]:
    return _bfs_levels(identity_tableau(n), enumerate_layers(n, gates), depth)


def enumerate_reachable(n: int, d_cap: int, gates: GateSet = DEFAULT_GATES) -> dict[Tableau, int]:
    """Exact minimum depth of every tableau reachable within ``d_cap`` layers."""
    if n > 3 or d_cap > 4:
        raise InvalidArgument("enumeration limited to n <= 3 and depth <= 4")
    out = {}
    for d, level in enumerate(_forward_levels(n, gates, d_cap)):
        for t in level:
            out[t] = d
    return out


def brute_force_min_depth(target: Tableau, gates: GateSet = DEFAULT_GATES, d_cap: int = 4) -> int | None:
    """Smallest depth realizing ``target`` by exhaustive layer search, or None above ``d_cap``.

    Meets in the middle: forward levels from the identity, backward levels
    from the target using inverted layers.
    """
    n = target.n
    if n > 3 or d_cap > 4 or d_cap < 0:
        raise InvalidArgument("brute force limited to n <= 3 and 0 <= depth cap <= 4")
    fwd_depth = (d_cap + 1) // 2
    forward = _forward_levels(n, gates, fwd_depth)
    inverse_layers = [tuple(g.inverse() for g in layer) for layer in enumerate_layers(n, gates)]
    backward = _bfs_levels(target, inverse_layers, d_cap - fwd_depth)
    best = None
    for j, bset in enumerate(backward):
        for i, fset in enumerate(forward):
            if i + j > d_cap or (best is not None and i + j >= best):
                continue
            if not bset.isdisjoint(fset):
                best = i + j
    return best

