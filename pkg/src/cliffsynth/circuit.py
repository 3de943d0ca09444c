"""Layered circuit IR, an OpenQASM-2 subset reader/writer and ASAP layering."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CircuitSyntaxError, InvalidArgument
from .tableau import CNOT, I, NON_CLIFFORD, Gate

Layer = tuple[Gate, ...]

QASM_NAMES = {
    "id": "I",
    "h": "H",
    "s": "S",
    "sdg": "Sdg",
    "x": "X",
    "y": "Y",
    "z": "Z",
    "cx": "CNOT",
    "t": "T",
    "tdg": "Tdg",
}
KIND_TO_QASM = {v: k for k, v in QASM_NAMES.items()}


@dataclass(frozen=True)
class Circuit:
    n: int
    layers: tuple[Layer, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgument(f"qubit count must be positive, got {self.n}")
        for d, layer in enumerate(self.layers):
            if not layer:
                raise InvalidArgument(f"layer {d} is empty")
            seen: set[int] = set()
            for g in layer:
                if g.kind == I:
                    raise InvalidArgument("identity gates are not stored in circuits")
                for q in g.qubits:
                    if q >= self.n:
                        raise InvalidArgument(f"qubit {q} out of range for n={self.n}")
                    if q in seen:
                        raise InvalidArgument(f"qubit {q} used twice in layer {d}")
                    seen.add(q)

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def gates(self) -> Iterator[Gate]:
        for layer in self.layers:
            yield from layer

    @property
    def is_clifford(self) -> bool:
        return all(g.is_clifford for g in self.gates)

    def __len__(self):
        return sum(len(layer) for layer in self.layers)

    def __add__(self, other: Circuit) -> Circuit:
        if other.n != self.n:
            raise InvalidArgument(f"qubit count mismatch: {self.n} vs {other.n}")
        return Circuit(self.n, self.layers + other.layers)


def layerize(n: int, gates: Iterable[Gate]) -> Circuit:
    """ASAP-schedule a gate stream; identity gates are dropped."""
    frontier = [0] * n
    layers: list[list[Gate]] = []
    for g in gates:
        if g.kind == I:
            continue
        for q in g.qubits:
            if q >= n:
                raise InvalidArgument(f"qubit {q} out of range for n={n}")
        d = max(frontier[q] for q in g.qubits)
        if d == len(layers):
            layers.append([])
        layers[d].append(g)
        for q in g.qubits:
            frontier[q] = d + 1
    return Circuit(n, tuple(tuple(layer) for layer in layers))


def metrics(c: Circuit) -> tuple[int, int, int]:
    """(depth, gate count, two-qubit gate count)."""
    two = sum(1 for g in c.gates if len(g.qubits) == 2)
    return c.depth, len(c), two


def count_non_clifford(c: Circuit) -> int:
    return sum(1 for g in c.gates if g.kind in NON_CLIFFORD)


_STATEMENT = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*(.*)\Z", re.S)
_QREG = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]\Z")
_QUBIT = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]\s*\Z")


def _statements(text: str) -> Iterator[tuple[str, int, int]]:
    """Yield (statement, line, column) with comments stripped."""
    buf: list[str] = []
    start: tuple[int, int] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0]
        for col, ch in enumerate(line, start=1):
            if ch == ";":
                stmt = "".join(buf).strip()
                if not stmt:
                    raise CircuitSyntaxError("empty statement", lineno, col)
                yield stmt, *start
                buf, start = [], None
                continue
            if start is None and not ch.isspace():
                start = (lineno, col)
            buf.append(ch)
        buf.append("\n")
    if "".join(buf).strip():
        raise CircuitSyntaxError("missing ';' at end of statement", *start)


def parse_circuit(text: str) -> Circuit:
    reg_name: str | None = None
    n = 0
    gates: list[Gate] = []
    for stmt, line, col in _statements(text):
        m = _STATEMENT.match(stmt)
        if not m:
            raise CircuitSyntaxError(f"cannot parse {stmt!r}", line, col)
        word, rest = m.group(1), m.group(2).strip()
        if word == "OPENQASM" or word == "include":
            continue
        if word == "qreg":
            if reg_name is not None:
                raise CircuitSyntaxError("only one qreg is supported", line, col)
            rm = _QREG.match(rest)
            if not rm:
                raise CircuitSyntaxError(f"malformed register declaration {stmt!r}", line, col)
            reg_name, n = rm.group(1), int(rm.group(2))
            if n < 1:
                raise CircuitSyntaxError("register must have at least one qubit", line, col)
            continue
        if word not in QASM_NAMES:
            raise CircuitSyntaxError(f"unknown gate {word!r}", line, col)
        if reg_name is None:
            raise CircuitSyntaxError("gate before qreg declaration", line, col)
        qubits = []
        for operand in rest.split(","):
            qm = _QUBIT.match(operand)
            if not qm:
                raise CircuitSyntaxError(f"malformed operand {operand.strip()!r}", line, col)
            if qm.group(1) != reg_name:
                raise CircuitSyntaxError(f"unknown register {qm.group(1)!r}", line, col)
            q = int(qm.group(2))
            if q >= n:
                raise CircuitSyntaxError(f"qubit index {q} >= register size {n}", line, col)
            qubits.append(q)
        kind = QASM_NAMES[word]
        arity = 2 if kind == CNOT else 1
        if len(qubits) != arity:
            raise CircuitSyntaxError(f"{word} takes {arity} operand(s)", line, col)
        if arity == 2 and qubits[0] == qubits[1]:
            raise CircuitSyntaxError(f"{word} on repeated qubit", line, col)
        gates.append(Gate(kind, tuple(qubits)))
    if reg_name is None:
        raise CircuitSyntaxError("no qreg declaration", 1, 1)
    return layerize(n, gates)


def emit_circuit(c: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.n}];"]
    for g in c.gates:
        args = ",".join(f"q[{q}]" for q in g.qubits)
        lines.append(f"{KIND_TO_QASM[g.kind]} {args};")
    return "\n".join(lines) + "\n"


def circuit_from_gates(n: int, gates: Sequence[tuple]) -> Circuit:
    """Shorthand: ``circuit_from_gates(2, [("H", 0), ("CNOT", 0, 1)])``."""
    return layerize(n, (Gate(kind, tuple(qs)) for kind, *qs in gates))
