"""Stabilizer/destabilizer tableaus and Clifford gate semantics.

A tableau for an ``n``-qubit Clifford unitary ``U`` holds the ``2n`` Pauli
generators ``U X_i U^dagger`` (destabilizers, rows ``0..n-1``) followed by
``U Z_i U^dagger`` (stabilizers, rows ``n..2n-1``).  This fixes ``U`` up to a
global phase.

Storage is column-packed: ``xs[q]`` is an integer whose bit ``k`` is the
X-component of row ``k`` on qubit ``q``; ``zs`` likewise, and ``r`` packs the
sign bits of all rows.  Every gate update is then a handful of big-int
operations acting on all rows at once.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidArgument, NonCliffordGateError

I, H, S, SDG, X, Y, Z, CNOT, T, TDG = "I", "H", "S", "Sdg", "X", "Y", "Z", "CNOT", "T", "Tdg"

SINGLE_QUBIT_CLIFFORDS = (I, H, S, SDG, X, Y, Z)
TWO_QUBIT_CLIFFORDS = (CNOT,)
NON_CLIFFORD = (T, TDG)
GATE_KINDS = SINGLE_QUBIT_CLIFFORDS + TWO_QUBIT_CLIFFORDS + NON_CLIFFORD

INVERSE = {I: I, H: H, S: SDG, SDG: S, X: X, Y: Y, Z: Z, CNOT: CNOT, T: TDG, TDG: T}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise InvalidArgument(f"unknown gate kind {self.kind!r}")
        arity = 2 if self.kind == CNOT else 1
        if len(self.qubits) != arity:
            raise InvalidArgument(f"{self.kind} takes {arity} qubit(s), got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise InvalidArgument(f"negative qubit index in {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise InvalidArgument(f"{self.kind} on repeated qubit {self.qubits[0]}")

    @property
    def is_clifford(self) -> bool:
        return self.kind not in NON_CLIFFORD

    def inverse(self) -> Gate:
        return Gate(INVERSE[self.kind], self.qubits)

    def __str__(self):
        return f"{self.kind} {','.join(map(str, self.qubits))}"


def gate(kind: str, *qubits: int) -> Gate:
    return Gate(kind, tuple(qubits))


@dataclass(frozen=True)
class PauliRow:
    """One generator: X bits, Z bits (index = qubit) and a sign bit."""

    x: tuple[int, ...]
    z: tuple[int, ...]
    r: int

    def __str__(self):
        return f"{''.join(map(str, self.x))} {''.join(map(str, self.z))} {self.r}"

    def to_label(self) -> str:
        chars = "IXZY"
        body = "".join(chars[xb | (zb << 1)] for xb, zb in zip(self.x, self.z))
        return ("-" if self.r else "+") + body


@dataclass(frozen=True)
class Tableau:
    n: int
    xs: tuple[int, ...]
    zs: tuple[int, ...]
    r: int

    @property
    def num_rows(self) -> int:
        return 2 * self.n

    def row(self, k: int) -> PauliRow:
        return PauliRow(
            tuple((c >> k) & 1 for c in self.xs),
            tuple((c >> k) & 1 for c in self.zs),
            (self.r >> k) & 1,
        )

    @property
    def rows(self) -> list[PauliRow]:
        return [self.row(k) for k in range(2 * self.n)]

    def x_bit(self, q: int, k: int) -> int:
        return (self.xs[q] >> k) & 1

    def z_bit(self, q: int, k: int) -> int:
        return (self.zs[q] >> k) & 1

    def r_bit(self, k: int) -> int:
        return (self.r >> k) & 1

    @classmethod
    def from_rows(cls, rows: Sequence[PauliRow]) -> Tableau:
        if len(rows) == 0 or len(rows) % 2:
            raise InvalidArgument(f"a tableau needs 2n > 0 rows, got {len(rows)}")
        n = len(rows) // 2
        xs = [0] * n
        zs = [0] * n
        r = 0
        for k, row in enumerate(rows):
            if len(row.x) != n or len(row.z) != n:
                raise InvalidArgument(f"row {k} has wrong width for n={n}")
            for q in range(n):
                xs[q] |= (row.x[q] & 1) << k
                zs[q] |= (row.z[q] & 1) << k
            r |= (row.r & 1) << k
        return cls(n, tuple(xs), tuple(zs), r)

    def __str__(self):
        return format_tableau(self)


def identity_tableau(n: int) -> Tableau:
    if n < 1:
        raise InvalidArgument(f"qubit count must be positive, got {n}")
    xs = tuple(1 << q for q in range(n))
    zs = tuple(1 << (n + q) for q in range(n))
    return Tableau(n, xs, zs, 0)


def _check_qubits(t: Tableau, g: Gate) -> None:
    for q in g.qubits:
        if q >= t.n:
            raise InvalidArgument(f"qubit {q} out of range for n={t.n}")


def apply_gate(t: Tableau, g: Gate) -> Tableau:
    """Conjugate every row of ``t`` by ``g``."""
    if not g.is_clifford:
        raise NonCliffordGateError(f"{g.kind} is not a Clifford gate")
    _check_qubits(t, g)
    kind = g.kind
    if kind == I:
        return t
    xs = list(t.xs)
    zs = list(t.zs)
    r = t.r
    if kind == CNOT:
        c, tg = g.qubits
        full = (1 << (2 * t.n)) - 1
        # sign term reads pre-update columns
        r ^= xs[c] & zs[tg] & ((xs[tg] ^ zs[c]) ^ full)
        xs[tg] ^= xs[c]
        zs[c] ^= zs[tg]
        return Tableau(t.n, tuple(xs), tuple(zs), r)
    (q,) = g.qubits
    x, z = xs[q], zs[q]
    if kind == H:
        r ^= x & z
        xs[q], zs[q] = z, x
    elif kind == S:
        r ^= x & z
        zs[q] = z ^ x
    elif kind == SDG:
        r ^= x & ~z
        zs[q] = z ^ x
    elif kind == X:
        r ^= z
    elif kind == Y:
        r ^= x ^ z
    elif kind == Z:
        r ^= x
    return Tableau(t.n, tuple(xs), tuple(zs), r)


def apply_gates(t: Tableau, gates: Iterable[Gate]) -> Tableau:
    for g in gates:
        t = apply_gate(t, g)
    return t


def tableau_equal(a: Tableau, b: Tableau) -> bool:
    return a.n == b.n and a.xs == b.xs and a.zs == b.zs and a.r == b.r


def first_difference(a: Tableau, b: Tableau) -> int | None:
    """Index of the first row where ``a`` and ``b`` differ, or None."""
    if a.n != b.n:
        raise InvalidArgument(f"qubit count mismatch: {a.n} vs {b.n}")
    for k in range(2 * a.n):
        if a.row(k) != b.row(k):
            return k
    return None


def _symplectic(x1: int, z1: int, x2: int, z2: int) -> int:
    return ((x1 & z2) ^ (z1 & x2)).bit_count() & 1


def _row_masks(t: Tableau) -> list[tuple[int, int]]:
    out = []
    for k in range(2 * t.n):
        xm = sum(((t.xs[q] >> k) & 1) << q for q in range(t.n))
        zm = sum(((t.zs[q] >> k) & 1) << q for q in range(t.n))
        out.append((xm, zm))
    return out


def is_symplectic(t: Tableau) -> bool:
    """Check the destabilizer/stabilizer commutation structure."""
    if len(t.xs) != t.n or len(t.zs) != t.n:
        return False
    rows = _row_masks(t)
    n = t.n
    for i in range(2 * n):
        for j in range(i + 1, 2 * n):
            expected = 1 if (j - i == n and i < n) else 0
            if _symplectic(*rows[i], *rows[j]) != expected:
                return False
    return True


def random_gate_word(n: int, length: int, rng: random.Random) -> list[Gate]:
    singles = [k for k in SINGLE_QUBIT_CLIFFORDS if k != I]
    kinds = singles + ([CNOT] if n > 1 else [])
    word = []
    for _ in range(length):
        kind = rng.choice(kinds)
        if kind == CNOT:
            c, t = rng.sample(range(n), 2)
            word.append(Gate(CNOT, (c, t)))
        else:
            word.append(Gate(kind, (rng.randrange(n),)))
    return word


def random_tableau(n: int, seed: int) -> Tableau:
    """Tableau of a random word of ``12 n^2`` Clifford gates.

    Not uniform over the Clifford group; deterministic in ``(n, seed)``.
    """
    if n < 1:
        raise InvalidArgument(f"qubit count must be positive, got {n}")
    rng = random.Random(seed)
    return apply_gates(identity_tableau(n), random_gate_word(n, 12 * n * n, rng))


def format_tableau(t: Tableau) -> str:
    lines = [str(t.n)]
    lines.extend(str(row) for row in t.rows)
    return "\n".join(lines) + "\n"


def parse_tableau(text: str) -> Tableau:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidArgument("empty tableau text")
    try:
        n = int(lines[0])
    except ValueError:
        raise InvalidArgument(f"first line must be the qubit count, got {lines[0]!r}") from None
    if n < 1:
        raise InvalidArgument(f"qubit count must be positive, got {n}")
    if len(lines) != 2 * n + 1:
        raise InvalidArgument(f"expected {2 * n} rows for n={n}, got {len(lines) - 1}")
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if (
            len(parts) != 3
            or len(parts[0]) != n
            or len(parts[1]) != n
            or parts[2] not in ("0", "1")
            or set(parts[0] + parts[1]) - {"0", "1"}
        ):
            raise InvalidArgument(f"line {lineno}: malformed row {ln!r}")
        rows.append(
            PauliRow(tuple(int(b) for b in parts[0]), tuple(int(b) for b in parts[1]), int(parts[2]))
        )
    return Tableau.from_rows(rows)


def simulate(circuit) -> Tableau:
    """Tableau of a circuit (anything with ``n`` and an iterable ``gates``)."""
    return apply_gates(identity_tableau(circuit.n), circuit.gates)
