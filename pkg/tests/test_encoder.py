import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pysat.solvers import Solver

from cliffsynth.circuit import layerize, parse_circuit
from cliffsynth.encoder import (
    DEFAULT_GATES,
    GateSet,
    VariableLayout,
    build_encoding,
    decode_model,
    encode_exactly_one,
    encode_symmetry_breaking,
    encode_transitions,
    layout_variable_count,
    update_groups,
    xor2_clauses,
)
from cliffsynth.errors import DecodeVerificationError, InternalConsistencyError, InvalidArgument
from cliffsynth.satio import SAT, UNSAT, solve
from cliffsynth.search import synth_optimal
from cliffsynth.tableau import (
    Tableau,
    identity_tableau,
    random_gate_word,
    random_tableau,
    simulate,
    tableau_equal,
)


def sat_count(clauses, variables):
    """Assignments of ``variables`` extendable to a model (auxiliaries projected away)."""
    count = 0
    with Solver(name="cadical153", bootstrap_with=clauses) as s:
        for bits in itertools.product((0, 1), repeat=len(variables)):
            assumptions = [v if b else -v for v, b in zip(variables, bits)]
            count += s.solve(assumptions=assumptions)
    return count


def short_random_circuit(rng, max_n=4, max_depth=4):
    n = rng.randint(1, max_n)
    c = layerize(n, random_gate_word(n, rng.randint(1, 3 * n), rng))
    while c.depth > max_depth:
        c = layerize(n, list(c.gates)[: len(c) - 1])
    return c


# --- gate sets ---------------------------------------------------------------


def test_gate_set_always_has_identity():
    assert GateSet(("H", "S"), ("CNOT",)).single_qubit[0] == "I"


def test_gate_set_requires_generators():
    with pytest.raises(InvalidArgument):
        GateSet(("H", "X"), ("CNOT",))
    with pytest.raises(InvalidArgument):
        GateSet(("H", "S"), ())
    assert GateSet(("H",), (), strict=False).single_qubit == ("I", "H")


def test_gate_set_parse():
    gs = GateSet.parse("h, s, cx")
    assert gs.single_qubit == ("I", "H", "S") and gs.two_qubit == ("CNOT",)
    with pytest.raises(InvalidArgument):
        GateSet.parse("H,S,CNOT,foo")


# --- layout ------------------------------------------------------------------


def test_layout_example_counts():
    layout = VariableLayout(3, 2, DEFAULT_GATES)
    assert layout.num_gate_vars == 54
    assert layout.num_tableau_vars == 126


def test_layout_ids_dense_and_injective():
    layout = VariableLayout(3, 2, DEFAULT_GATES)
    ids = [layout.sq(g, q, d) for g in DEFAULT_GATES.single_qubit for q in range(3) for d in range(2)]
    ids += [
        layout.tq("CNOT", c, t, d) for c in range(3) for t in range(3) if c != t for d in range(2)
    ]
    ids += [
        getattr(layout, part)(q, k, s) for part in "xz" for q in range(3) for k in range(6) for s in range(3)
    ]
    ids += [layout.r(k, s) for k in range(6) for s in range(3)]
    assert sorted(ids) == list(range(1, layout.num_layout_vars + 1))


@pytest.mark.parametrize("n,d", [(n, d) for n in range(2, 6) for d in range(1, 7)])
def test_layout_formula(n, d):
    inst = build_encoding(random_tableau(n, n * 10 + d), d)
    nsq, ntq = len(DEFAULT_GATES.single_qubit), len(DEFAULT_GATES.two_qubit)
    closed = nsq * n * d + ntq * n * (n - 1) * d + (d + 1) * (2 * n * 2 * n + 2 * n)
    assert inst.layout.num_layout_vars == closed == layout_variable_count(n, d)
    assert inst.num_vars == closed + inst.layout.num_aux_vars


# --- clause helpers ----------------------------------------------------------


def test_xor_biconditional_clauses():
    assert sorted(map(sorted, xor2_clauses(1, 2, 3))) == sorted(
        map(sorted, [[-1, 2, 3], [-1, -2, -3], [1, -2, 3], [1, 2, -3]])
    )


def test_xor_truth_table():
    clauses = xor2_clauses(1, 2, 3)
    for a, b, c in itertools.product((0, 1), repeat=3):
        model = {1: a, 2: b, 3: c}
        ok = all(any(model[abs(lit)] == (lit > 0) for lit in cl) for cl in clauses)
        assert ok == (a == b ^ c)


def test_exactly_one_two_vars():
    assert encode_exactly_one([1, 2]) == [[1, 2], [-1, -2]]


def test_exactly_one_pairwise_three():
    clauses = encode_exactly_one([1, 2, 3], "pairwise")
    assert len(clauses) == 1 + 3


def test_exactly_one_sequential_four():
    counter = iter(range(5, 100))
    clauses = encode_exactly_one([1, 2, 3, 4], "sequential", fresh=lambda: next(counter))
    aux = {abs(lit) for cl in clauses for lit in cl} - {1, 2, 3, 4}
    assert len(aux) == 3
    # at-least-one plus the 3m-4 ladder clauses
    assert len(clauses) == 1 + 8
    assert sat_count(clauses, [1, 2, 3, 4]) == 4


@given(st.integers(1, 12), st.sampled_from(["pairwise", "sequential"]))
def test_exactly_one_semantics(m, method):
    counter = iter(range(m + 1, 10 * m + 10))
    clauses = encode_exactly_one(list(range(1, m + 1)), method, fresh=lambda: next(counter))
    if m <= 8:
        assert sat_count(clauses, list(range(1, m + 1))) == m


def test_exactly_one_empty():
    with pytest.raises(InvalidArgument):
        encode_exactly_one([])


# --- transitions -------------------------------------------------------------


def test_pauli_gates_share_unchanged_group():
    groups = update_groups(1, 0, ["I", "X", "Z"])
    assert list(groups["z"]) == [("keep",)]
    assert len(groups["z"][("keep",)]) == 3
    assert list(groups["x"]) == [("keep",)]


def test_default_groups_are_grouped():
    groups = update_groups(3, 0, DEFAULT_GATES.single_qubit, DEFAULT_GATES.two_qubit)
    # X-part: keep (I,S,Sdg,X,Y,Z, CNOT as control), from_z (H), xor_x per other control
    assert len(groups["x"][("keep",)]) == 6 + 2
    assert set(groups["x"]) == {("keep",), ("from_z",), ("xor_x", 1), ("xor_x", 2)}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_transition_and_symmetry_clause_width(n):
    layout = VariableLayout(n, 3, DEFAULT_GATES)
    clauses = encode_transitions(layout, DEFAULT_GATES, 0) + encode_symmetry_breaking(layout, DEFAULT_GATES)
    assert max(len(c) for c in clauses) <= 5


def test_transition_layer_range():
    layout = VariableLayout(2, 2, DEFAULT_GATES)
    with pytest.raises(InvalidArgument):
        encode_transitions(layout, DEFAULT_GATES, 2)


def test_clause_growth_linear_in_depth():
    for n in (2, 3):
        target = random_tableau(n, 1)
        ds = np.arange(1, 9)
        counts = np.array([build_encoding(target, int(d)).num_clauses for d in ds])
        slope, intercept = np.polyfit(ds, counts, 1)
        residual = counts - (slope * ds + intercept)
        r2 = 1 - residual.var() / counts.var()
        assert r2 > 0.999


# --- symmetry breaking -------------------------------------------------------


def test_no_symmetry_clauses_for_single_layer():
    layout = VariableLayout(3, 1, DEFAULT_GATES)
    assert encode_symmetry_breaking(layout, DEFAULT_GATES) == []


def test_symmetry_instantiation_small():
    gates = GateSet(("I", "H"), (), strict=False)
    layout = VariableLayout(1, 2, gates)
    clauses = {frozenset(c) for c in encode_symmetry_breaking(layout, gates)}
    h0, h1 = layout.sq("H", 0, 0), layout.sq("H", 0, 1)
    i0 = layout.sq("I", 0, 0)
    assert frozenset({-h0, -h1}) in clauses
    assert frozenset({-i0, -h1}) in clauses


def test_symmetry_two_qubit_rule():
    layout = VariableLayout(2, 2, DEFAULT_GATES)
    clauses = {frozenset(c) for c in encode_symmetry_breaking(layout, DEFAULT_GATES)}
    i0, i1 = layout.sq("I", 0, 0), layout.sq("I", 1, 0)
    for c, t in ((0, 1), (1, 0)):
        assert frozenset({-i0, -i1, -layout.tq("CNOT", c, t, 1)}) in clauses


# --- build / decode ----------------------------------------------------------


def test_depth_zero_identity_sat():
    assert solve(build_encoding(identity_tableau(2), 0)).status == SAT


def test_depth_zero_hadamard_unsat():
    h = simulate(parse_circuit("qreg q[1]; h q[0];"))
    assert solve(build_encoding(h, 0)).status == UNSAT


def test_rejects_invalid_target():
    rows = identity_tableau(2).rows
    rows[2] = rows[0]
    with pytest.raises(InvalidArgument):
        build_encoding(Tableau.from_rows(rows), 2)
    with pytest.raises(InvalidArgument):
        build_encoding(identity_tableau(2), -1)


def test_decode_all_identity():
    layout = VariableLayout(2, 2, DEFAULT_GATES)
    assignment = {layout.sq("I", q, d): True for q in range(2) for d in range(2)}
    c = decode_model(layout, assignment, identity_tableau(2))
    assert c.depth == 0


def test_decode_single_hadamard():
    target = simulate(parse_circuit("qreg q[1]; h q[0];"))
    inst = build_encoding(target, 1)
    out = solve(inst)
    c = decode_model(inst.layout, out.model, target)
    assert tableau_equal(simulate(c), target)


def test_decode_exactly_one_violation():
    layout = VariableLayout(1, 1, DEFAULT_GATES)
    with pytest.raises(InternalConsistencyError):
        decode_model(layout, {layout.sq("H", 0, 0): True, layout.sq("S", 0, 0): True})


def test_decode_wrong_target():
    layout = VariableLayout(1, 1, DEFAULT_GATES)
    with pytest.raises(DecodeVerificationError):
        decode_model(layout, {layout.sq("H", 0, 0): True}, identity_tableau(1))


def test_middle_block_decodes_within_five(fixture_circuit):
    middle = fixture_circuit("grover_example_middle_block.qasm")
    target = simulate(middle)
    inst = build_encoding(target, 5)
    c = decode_model(inst.layout, solve(inst).model, target)
    assert c.depth <= 5 and tableau_equal(simulate(c), target)


# --- fuzzing -----------------------------------------------------------------


def test_soundness_random_targets():
    rng = random.Random(11)
    for i in range(100):
        n = rng.randint(1, 3)
        target = random_tableau(n, rng.getrandbits(64))
        report = synth_optimal(target)
        assert tableau_equal(simulate(report.circuit), target)


def test_completeness_at_known_depth():
    rng = random.Random(12)
    for _ in range(100):
        c = short_random_circuit(rng)
        inst = build_encoding(simulate(c), c.depth)
        assert solve(inst).status == SAT


def test_monotonicity():
    rng = random.Random(13)
    for _ in range(50):
        c = short_random_circuit(rng)
        target = simulate(c)
        for d in (c.depth, c.depth + 1):
            assert solve(build_encoding(target, d)).status == SAT


@given(st.integers(1, 3), st.integers(0, 2**32), st.booleans())
def test_unsat_below_known_optimum_stays_unsat(n, seed, symmetry):
    target = random_tableau(n, seed)
    report = synth_optimal(target)
    d = report.optimal_depth
    if d >= 1:
        assert solve(build_encoding(target, d - 1, symmetry=symmetry)).status == UNSAT
    assert solve(build_encoding(target, d, symmetry=symmetry)).status == SAT
