"""SAT solver boundary: in-process and subprocess backends, DIMACS I/O."""

from __future__ import annotations

import multiprocessing
import os
import subprocess
import tempfile
import threading
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from pysat.solvers import Solver

from .errors import DimacsError, InvalidArgument

SAT, UNSAT, UNKNOWN = "SAT", "UNSAT", "UNKNOWN"


@dataclass(frozen=True)
class Limits:
    wall_time: float | None = None
    conflicts: int | None = None


NO_LIMITS = Limits()


@dataclass
class SatOutcome:
    status: str
    model: dict[int, bool] | None = None
    conflicts: int = 0
    decisions: int = 0
    wall_time: float = 0.0
    limit: str | None = None
    stats: dict = field(default_factory=dict)

    @property
    def is_sat(self) -> bool:
        return self.status == SAT


def _check_instance(clauses: Sequence[Sequence[int]], num_vars: int) -> None:
    for i, clause in enumerate(clauses):
        for lit in clause:
            if lit == 0 or abs(lit) > num_vars:
                raise InvalidArgument(f"clause {i} has literal {lit} outside 1..{num_vars}")


def model_satisfies(clauses: Iterable[Sequence[int]], model: dict[int, bool]) -> bool:
    for clause in clauses:
        if not any(model.get(abs(lit), False) == (lit > 0) for lit in clause):
            return False
    return True


def _model_dict(lits: Iterable[int], num_vars: int) -> dict[int, bool]:
    model = {v: False for v in range(1, num_vars + 1)}
    for lit in lits:
        if 0 < abs(lit) <= num_vars:
            model[abs(lit)] = lit > 0
    return model


class SatBackend(ABC):
    name: str

    @abstractmethod
    def _run(self, clauses, num_vars: int, limits: Limits) -> SatOutcome: ...

    def solve(self, instance, limits: Limits = NO_LIMITS) -> SatOutcome:
        """Solve a CnfInstance (or any object with ``clauses`` and ``num_vars``)."""
        clauses, num_vars = instance.clauses, instance.num_vars
        _check_instance(clauses, num_vars)
        start = time.perf_counter()
        out = self._run(clauses, num_vars, limits)
        out.wall_time = time.perf_counter() - start
        if out.status == SAT:
            if out.model is None or not model_satisfies(clauses, out.model):
                raise RuntimeError(f"{self.name}: returned model violates the instance")
        return out


# these pysat bindings raise on interrupt()/budgets, so limited runs are
# moved into a forked child process that can be killed at the deadline
_NOT_INTERRUPTIBLE = ("cadical", "lingeling", "kissat")


def _pysat_solve(name, clauses, num_vars, limits, interruptible):
    with Solver(name=name, bootstrap_with=clauses) as s:
        timer = None
        fired = threading.Event()
        limited = interruptible and (limits.wall_time is not None or limits.conflicts is not None)
        if limited and limits.wall_time is not None:

            def stop():
                fired.set()
                s.interrupt()

            timer = threading.Timer(limits.wall_time, stop)
            timer.start()
        try:
            if limited:
                if limits.conflicts is not None:
                    s.conf_budget(limits.conflicts)
                result = s.solve_limited(expect_interrupt=limits.wall_time is not None)
            else:
                result = s.solve()
        finally:
            if timer is not None:
                timer.cancel()
        stats = s.accum_stats() or {}
        out = SatOutcome(UNKNOWN, conflicts=stats.get("conflicts", 0), decisions=stats.get("decisions", 0), stats=stats)
        if result is True:
            out.status = SAT
            out.model = _model_dict(s.get_model(), num_vars)
        elif result is False:
            out.status = UNSAT
        else:
            out.limit = "wall_time" if fired.is_set() else "conflicts"
        return out


def _child(conn, name, clauses, num_vars):
    try:
        conn.send(_pysat_solve(name, clauses, num_vars, NO_LIMITS, False))
    finally:
        conn.close()


class PysatBackend(SatBackend):
    """In-process CDCL solver via python-sat (CaDiCaL by default)."""

    def __init__(self, solver: str = "cadical153"):
        self.name = solver
        self.interruptible = not solver.startswith(_NOT_INTERRUPTIBLE)

    def _run(self, clauses, num_vars, limits):
        if self.interruptible or limits.wall_time is None:
            if limits.conflicts is not None and not self.interruptible:
                raise InvalidArgument(f"solver {self.name} does not support conflict budgets")
            return _pysat_solve(self.name, clauses, num_vars, limits, self.interruptible)
        if limits.conflicts is not None:
            raise InvalidArgument(f"solver {self.name} does not support conflict budgets")
        ctx = multiprocessing.get_context("fork")
        parent, child = ctx.Pipe(duplex=False)
        proc = ctx.Process(target=_child, args=(child, self.name, clauses, num_vars), daemon=True)
        proc.start()
        child.close()
        try:
            if parent.poll(limits.wall_time):
                try:
                    return parent.recv()
                except EOFError:
                    raise RuntimeError(f"{self.name}: solver process died") from None
            return SatOutcome(UNKNOWN, limit="wall_time")
        finally:
            parent.close()
            if proc.is_alive():
                proc.kill()
            proc.join()


class ExecBackend(SatBackend):
    """Any executable that reads a DIMACS file path and prints ``s``/``v`` lines."""

    def __init__(self, path: str, args: Sequence[str] = ()):
        self.path = path
        self.args = list(args)
        self.name = f"exec:{path}"

    def _run(self, clauses, num_vars, limits):
        if limits.conflicts is not None:
            raise InvalidArgument("conflict budgets are not supported by the subprocess backend")
        fd, cnf_path = tempfile.mkstemp(suffix=".cnf")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(export_dimacs_clauses(clauses, num_vars))
            try:
                proc = subprocess.run(
                    [self.path, *self.args, cnf_path],
                    capture_output=True,
                    text=True,
                    timeout=limits.wall_time,
                )
            except subprocess.TimeoutExpired:
                return SatOutcome(UNKNOWN, limit="wall_time")
        finally:
            os.unlink(cnf_path)
        return parse_solver_output(proc.stdout, num_vars)


def parse_solver_output(text: str, num_vars: int) -> SatOutcome:
    status = None
    lits: list[int] = []
    for line in text.splitlines():
        if line.startswith("s "):
            word = line[2:].strip()
            status = {"SATISFIABLE": SAT, "UNSATISFIABLE": UNSAT}.get(word, UNKNOWN)
        elif line.startswith("v "):
            lits.extend(int(tok) for tok in line[2:].split())
    if status is None:
        return SatOutcome(UNKNOWN, limit="no status line")
    out = SatOutcome(status)
    if status == SAT:
        out.model = _model_dict(lits, num_vars)
    return out


def make_backend(spec: str = "internal") -> SatBackend:
    """``internal``, ``internal:<pysat name>`` or ``exec:<path>``."""
    if spec == "internal":
        return PysatBackend()
    if spec.startswith("internal:"):
        return PysatBackend(spec.split(":", 1)[1])
    if spec.startswith("exec:"):
        return ExecBackend(spec.split(":", 1)[1])
    raise InvalidArgument(f"unknown solver spec {spec!r}")


def solve(instance, limits: Limits = NO_LIMITS, backend: SatBackend | None = None) -> SatOutcome:
    return (backend or PysatBackend()).solve(instance, limits)


def export_dimacs_clauses(clauses: Iterable[Sequence[int]], num_vars: int) -> str:
    clauses = list(clauses)
    lines = [f"p cnf {num_vars} {len(clauses)}"]
    lines.extend(" ".join(map(str, c)) + " 0" for c in clauses)
    return "\n".join(lines) + "\n"


def export_dimacs(instance) -> str:
    return export_dimacs_clauses(instance.clauses, instance.num_vars)


def import_dimacs(text: str) -> tuple[int, list[list[int]]]:
    """Parse DIMACS CNF into ``(num_vars, clauses)``."""
    header = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(current)
                current = []
            elif abs(lit) > header[0]:
                raise DimacsError(f"line {lineno}: literal {lit} exceeds declared {header[0]} variables")
            else:
                current.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("last clause is not 0-terminated")
    if len(clauses) != header[1]:
        raise DimacsError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return header[0], clauses
