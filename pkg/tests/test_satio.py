import random
import sys
import textwrap

import pytest

from cliffsynth.encoder import CnfInstance, build_encoding, decode_model
from cliffsynth.errors import DimacsError, InvalidArgument
from cliffsynth.satio import (
    SAT,
    UNKNOWN,
    UNSAT,
    ExecBackend,
    Limits,
    PysatBackend,
    export_dimacs,
    export_dimacs_clauses,
    import_dimacs,
    make_backend,
    model_satisfies,
    parse_solver_output,
    solve,
)
from cliffsynth.tableau import identity_tableau, random_tableau


def raw(clauses, num_vars):
    return CnfInstance([list(c) for c in clauses], num_vars)


@pytest.fixture
def exec_solver(tmp_path):
    """A DIMACS-speaking executable backed by pysat's MiniSat."""
    script = tmp_path / "fake_solver.py"
    script.write_text(
        textwrap.dedent(
            f"""\
            #!{sys.executable}
            import sys
            from pysat.formula import CNF
            from pysat.solvers import Solver
            cnf = CNF(from_file=sys.argv[-1])
            with Solver(name="minisat22", bootstrap_with=cnf.clauses) as s:
                if s.solve():
                    print("s SATISFIABLE")
                    print("v " + " ".join(map(str, s.get_model())) + " 0")
                else:
                    print("s UNSATISFIABLE")
            """
        )
    )
    script.chmod(0o755)
    return str(script)


def test_unit_sat():
    out = solve(raw([[1]], 1))
    assert out.status == SAT and out.model == {1: True}


def test_contradiction_unsat():
    out = solve(raw([[1], [-1]], 1))
    assert out.status == UNSAT and out.model is None


def test_identity_encoding_decodes_empty():
    inst = build_encoding(identity_tableau(2), 1)
    out = solve(inst)
    assert out.status == SAT
    assert decode_model(inst.layout, out.model, identity_tableau(2)).depth == 0


def test_malformed_instance():
    with pytest.raises(InvalidArgument):
        solve(raw([[1, 3]], 2))
    with pytest.raises(InvalidArgument):
        solve(raw([[0]], 2))


def test_model_covers_every_variable():
    inst = build_encoding(random_tableau(2, 4), 4)
    out = solve(inst)
    assert set(out.model) == set(range(1, inst.num_vars + 1))
    assert model_satisfies(inst.clauses, out.model)


def test_statistics_reported():
    out = solve(build_encoding(random_tableau(3, 4), 3))
    assert out.wall_time > 0
    assert out.conflicts >= 0 and out.decisions >= 0


# --- DIMACS --------------------------------------------------------------------


def test_export_small():
    assert export_dimacs_clauses([[1, -2]], 2) == "p cnf 2 1\n1 -2 0\n"


def test_round_trip_encoding():
    inst = build_encoding(random_tableau(3, 2), 3)
    num_vars, clauses = import_dimacs(export_dimacs(inst))
    assert num_vars == inst.num_vars
    assert clauses == inst.clauses


def test_export_declares_gate_variables():
    inst = build_encoding(random_tableau(3, 9), 2)
    header = export_dimacs(inst).splitlines()[0].split()
    assert inst.layout.num_gate_vars == 54
    assert int(header[2]) >= 54


def test_import_comments_and_wrapped_clauses():
    assert import_dimacs("c hi\np cnf 3 2\n1 -2\n 3 0 -1 0\n") == (3, [[1, -2, 3], [-1]])


@pytest.mark.parametrize(
    "text",
    [
        "1 0\n",
        "p cnf x 1\n1 0\n",
        "p dnf 1 1\n1 0\n",
        "p cnf 1 1\n2 0\n",
        "p cnf 1 1\n1\n",
        "p cnf 1 2\n1 0\n",
        "p cnf 1 1\np cnf 1 1\n1 0\n",
        "p cnf 2 1\n1 a 0\n",
        "",
    ],
)
def test_import_errors(text):
    with pytest.raises(DimacsError):
        import_dimacs(text)


# --- backends ------------------------------------------------------------------


def test_parse_solver_output():
    out = parse_solver_output("c x\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3)
    assert out.status == SAT and out.model == {1: True, 2: False, 3: True}
    assert parse_solver_output("s UNSATISFIABLE\n", 3).status == UNSAT
    assert parse_solver_output("garbage\n", 3).status == UNKNOWN


def test_make_backend():
    assert isinstance(make_backend(), PysatBackend)
    assert make_backend("internal:glucose4").name == "glucose4"
    assert isinstance(make_backend("exec:/bin/false"), ExecBackend)
    with pytest.raises(InvalidArgument):
        make_backend("bogus")


def test_exec_backend(exec_solver):
    backend = ExecBackend(exec_solver)
    assert backend.solve(raw([[1], [-1]], 1)).status == UNSAT
    inst = build_encoding(random_tableau(2, 5), 5)
    out = backend.solve(inst)
    assert out.status == SAT and model_satisfies(inst.clauses, out.model)


def test_exec_backend_bad_model_rejected(tmp_path):
    script = tmp_path / "liar.sh"
    script.write_text("#!/bin/sh\necho 's SATISFIABLE'\necho 'v -1 0'\n")
    script.chmod(0o755)
    with pytest.raises(RuntimeError):
        ExecBackend(str(script)).solve(raw([[1]], 1))


def test_backends_agree(exec_solver):
    rng = random.Random(5)
    backends = [PysatBackend(), PysatBackend("glucose4"), ExecBackend(exec_solver)]
    for i in range(50):
        n = rng.randint(1, 3)
        target = random_tableau(n, rng.getrandbits(64))
        inst = build_encoding(target, rng.randint(0, 4))
        statuses = {b.solve(inst).status for b in backends[: 2 if i % 5 else 3]}
        assert len(statuses) == 1 and statuses <= {SAT, UNSAT}


# --- limits --------------------------------------------------------------------


@pytest.fixture(scope="module")
def hard_instance():
    return build_encoding(random_tableau(5, 1), 7)


@pytest.mark.parametrize("solver", ["cadical153", "glucose4"])
def test_wall_time_limit(hard_instance, solver):
    out = PysatBackend(solver).solve(hard_instance, Limits(wall_time=0.5))
    assert out.status == UNKNOWN and out.limit == "wall_time"
    assert out.wall_time < 5


def test_conflict_budget(hard_instance):
    out = PysatBackend("glucose4").solve(hard_instance, Limits(conflicts=10))
    assert out.status == UNKNOWN and out.limit == "conflicts"


def test_conflict_budget_unsupported_solver(hard_instance):
    with pytest.raises(InvalidArgument):
        PysatBackend().solve(hard_instance, Limits(conflicts=10))


def test_exec_timeout(tmp_path):
    script = tmp_path / "slow.sh"
    script.write_text("#!/bin/sh\nsleep 5\n")
    script.chmod(0o755)
    out = ExecBackend(str(script)).solve(raw([[1]], 1), Limits(wall_time=0.3))
    assert out.status == UNKNOWN
