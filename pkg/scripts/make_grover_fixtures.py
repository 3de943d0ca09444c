"""Generate 3-qubit Grover-style Clifford+T circuits with random 3-SAT phase oracles.

Each circuit is: H on all qubits, a phase oracle for a random 3-SAT formula
(3 variables, 5 clauses) built from the formula's algebraic normal form, and
one diffusion step.  Doubly-controlled Z terms use the 7-T decomposition.
Every circuit is checked against its dense unitary before it is written.

    python scripts/make_grover_fixtures.py --out tests/fixtures/grover --count 10 --seed 2023
"""

import argparse
import itertools
import random
from pathlib import Path

import numpy as np

from cliffsynth.circuit import emit_circuit, layerize
from cliffsynth.tableau import Gate

N = 3


def random_3sat(rng, n_vars=N, n_clauses=5):
    clauses = []
    for _ in range(n_clauses):
        lits = [(v, rng.random() < 0.5) for v in rng.sample(range(n_vars), 3)]
        clauses.append(lits)
    return clauses


def truth_table(clauses, n_vars=N):
    table = {}
    for bits in itertools.product((0, 1), repeat=n_vars):
        table[bits] = int(all(any(bits[v] ^ neg for v, neg in cl) for cl in clauses))
    return table


def anf(table, n_vars=N):
    """Monomials (as variable tuples) of the algebraic normal form."""
    monos = []
    for size in range(n_vars + 1):
        for mono in itertools.combinations(range(n_vars), size):
            coeff = 0
            for sub in itertools.product((0, 1), repeat=len(mono)):
                bits = [0] * n_vars
                for v, b in zip(mono, sub):
                    bits[v] = b
                coeff ^= table[tuple(bits)]
            if coeff:
                monos.append(mono)
    return monos


def ccz(a, b, c):
    g = Gate
    return [
        g("CNOT", (b, c)), g("Tdg", (c,)), g("CNOT", (a, c)), g("T", (c,)),
        g("CNOT", (b, c)), g("Tdg", (c,)), g("CNOT", (a, c)), g("T", (b,)),
        g("T", (c,)), g("CNOT", (a, b)), g("T", (a,)), g("Tdg", (b,)), g("CNOT", (a, b)),
    ]


def phase_term(mono, rng):
    if len(mono) == 1:
        return [Gate("Z", mono)]
    if len(mono) == 2:
        a, b = rng.sample(mono, 2)
        return [Gate("H", (b,)), Gate("CNOT", (a, b)), Gate("H", (b,))]
    a, b, c = rng.sample(mono, 3)
    return ccz(a, b, c)


def grover_gates(clauses, rng):
    table = truth_table(clauses)
    gates = [Gate("H", (q,)) for q in range(N)]
    for mono in anf(table):
        if mono:  # the constant term is a global phase
            gates += phase_term(mono, rng)
    gates += [Gate("H", (q,)) for q in range(N)]
    gates += [Gate("X", (q,)) for q in range(N)]
    gates += ccz(*rng.sample(range(N), 3))
    gates += [Gate("X", (q,)) for q in range(N)]
    gates += [Gate("H", (q,)) for q in range(N)]
    return gates, table


_MATS = {
    "H": np.array([[1, 1], [1, -1]]) / np.sqrt(2),
    "X": np.array([[0, 1], [1, 0]]),
    "Z": np.diag([1, -1]),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
    "Tdg": np.diag([1, np.exp(-1j * np.pi / 4)]),
}


def dense(gates, n=N):
    """Unitary with qubit 0 as the most significant bit."""
    dim = 2**n
    u = np.eye(dim, dtype=complex)
    for g in gates:
        m = np.zeros((dim, dim), dtype=complex)
        for col in range(dim):
            bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
            if g.kind == "CNOT":
                c, t = g.qubits
                out = list(bits)
                out[t] ^= bits[c]
                row = sum(b << (n - 1 - q) for q, b in enumerate(out))
                m[row, col] = 1
            else:
                (q,) = g.qubits
                for b in (0, 1):
                    out = list(bits)
                    out[q] = b
                    row = sum(v << (n - 1 - k) for k, v in enumerate(out))
                    m[row, col] += _MATS[g.kind][b, bits[q]]
        u = m @ u
    return u


def equal_up_to_phase(a, b):
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    phase = a[idx] / b[idx]
    return np.allclose(a, phase * b, atol=1e-9)


def check(gates, table):
    h3 = [Gate("H", (q,)) for q in range(N)]
    oracle = np.diag([(-1) ** table[tuple((i >> (N - 1 - q)) & 1 for q in range(N))] for i in range(2**N)])
    x3 = [Gate("X", (q,)) for q in range(N)]
    ccz_dense = np.diag([1] * 7 + [-1])
    diffusion = dense(h3 + x3).conj().T @ ccz_dense @ dense(h3 + x3)
    expected = diffusion @ oracle @ dense(h3)
    assert equal_up_to_phase(dense(gates), expected), "generated circuit does not match its unitary"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("tests/fixtures/grover"))
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--seed", type=int, default=2023)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    made = 0
    while made < args.count:
        clauses = random_3sat(rng)
        gates, table = grover_gates(clauses, rng)
        if len(set(table.values())) == 1:
            continue  # constant oracle
        check(gates, table)
        circuit = layerize(N, gates)
        formula = " & ".join("(" + " | ".join(("~" if neg else "") + f"v{v}" for v, neg in cl) + ")" for cl in clauses)
        text = f"// Grover-style Clifford+T circuit, oracle: {formula}\n" + emit_circuit(circuit)
        path = args.out / f"grover3_{made:02d}.qasm"
        path.write_text(text)
        print(f"{path}: depth {circuit.depth}, {len(circuit)} gates")
        made += 1


if __name__ == "__main__":
    main()
