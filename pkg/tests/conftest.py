import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cliffsynth.circuit import parse_circuit
from cliffsynth.tableau import PauliRow

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def load_fixture(name):
    return parse_circuit((FIXTURES / name).read_text())


@pytest.fixture
def fixture_circuit():
    return load_fixture


# dense matrix oracle, qubit 0 is the leftmost tensor factor

PAULI = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
    (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
}

GATE_MATRICES = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.diag([1, 1j]),
    "Sdg": np.diag([1, -1j]),
    "X": PAULI[(1, 0)],
    "Y": PAULI[(1, 1)],
    "Z": PAULI[(0, 1)],
}

CNOT01 = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def row_matrix(row: PauliRow) -> np.ndarray:
    m = np.eye(1, dtype=complex)
    for xb, zb in zip(row.x, row.z):
        m = np.kron(m, PAULI[(xb, zb)])
    return -m if row.r else m


def matrix_row(m: np.ndarray, n: int) -> PauliRow:
    """Decompose a signed Pauli matrix back into a row; fails for anything else."""
    import itertools

    for bits in itertools.product(((0, 0), (1, 0), (0, 1), (1, 1)), repeat=n):
        p = PauliRow(tuple(b[0] for b in bits), tuple(b[1] for b in bits), 0)
        base = row_matrix(p)
        for r in (0, 1):
            if np.allclose(m, -base if r else base):
                return PauliRow(p.x, p.z, r)
    raise AssertionError("matrix is not a signed Pauli")


GATE_MATRICES_T = {
    **GATE_MATRICES,
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
    "Tdg": np.diag([1, np.exp(-1j * np.pi / 4)]),
}


def dense_unitary(c) -> np.ndarray:
    """Full 2^n unitary of a Clifford+T circuit (qubit 0 most significant)."""
    n = c.n
    dim = 2**n
    u = np.eye(dim, dtype=complex)
    idx = np.arange(dim)
    for g in c.gates:
        if g.kind == "CNOT":
            ctl, tgt = g.qubits
            cbit = (idx >> (n - 1 - ctl)) & 1
            perm = idx ^ (cbit << (n - 1 - tgt))
            u = u[perm]
        else:
            (q,) = g.qubits
            m = np.kron(np.kron(np.eye(2**q), GATE_MATRICES_T[g.kind]), np.eye(2 ** (n - 1 - q)))
            u = m @ u
    return u


def equal_up_to_phase(a: np.ndarray, b: np.ndarray) -> bool:
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    return bool(np.allclose(a, (a[k] / b[k]) * b, atol=1e-9))


# --- acceptance reporting -------------------------------------------------------

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record_criterion():
    def record(number: int, passed: bool, detail: str) -> None:
        ACCEPTANCE[number] = (passed, detail)
        print(f"CRITERION {number}: {'PASS' if passed else 'FAIL'} - {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"CRITERION {number}: {'PASS' if passed else 'FAIL'} - {detail}")
