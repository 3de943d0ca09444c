"""CNF encoding of bounded-depth Clifford synthesis over stabilizer tableaus.

Variables fall in three families:

* gate variables ``g[q]@d`` (single-qubit) and ``g[c,t]@d`` (ordered CNOT pair),
  one per layer ``0 <= d < d_max``;
* tableau cells ``x[q,k]``, ``z[q,k]``, ``r[k]`` for every row ``k < 2n`` at each
  of the ``d_max + 1`` time steps;
* auxiliaries (group selectors, per-qubit sign contributions, XOR chains,
  exactly-one ladders).

Step 0 is pinned to the identity tableau and step ``d_max`` to the target.
Between consecutive steps, gates that update a tableau column with the same
formula share one implication group.  Signs are handled per layer as
``r' = r xor c_0 xor ... xor c_{n-1}`` where ``c_q`` is the sign contribution
of whatever gate sits on qubit ``q`` (CNOTs charge their control).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .circuit import Circuit, layerize
from .errors import DecodeVerificationError, InternalConsistencyError, InvalidArgument
from .tableau import (
    CNOT,
    H,
    I,
    S,
    SDG,
    SINGLE_QUBIT_CLIFFORDS,
    TWO_QUBIT_CLIFFORDS,
    X,
    Y,
    Z,
    Gate,
    Tableau,
    identity_tableau,
    is_symplectic,
    simulate,
    tableau_equal,
)

PAIRWISE_LIMIT = 6


@dataclass(frozen=True)
class GateSet:
    single_qubit: tuple[str, ...] = SINGLE_QUBIT_CLIFFORDS
    two_qubit: tuple[str, ...] = TWO_QUBIT_CLIFFORDS
    # strict=False admits restricted sets (e.g. {I, H}) that cannot reach every Clifford
    strict: bool = True

    def __post_init__(self):
        single = tuple(self.single_qubit)
        if I not in single:
            single = (I,) + single
        object.__setattr__(self, "single_qubit", single)
        object.__setattr__(self, "two_qubit", tuple(self.two_qubit))
        for k in single:
            if k not in SINGLE_QUBIT_CLIFFORDS:
                raise InvalidArgument(f"unsupported single-qubit gate {k!r}")
        for k in self.two_qubit:
            if k not in TWO_QUBIT_CLIFFORDS:
                raise InvalidArgument(f"unsupported two-qubit gate {k!r}")
        if len(set(single)) != len(single) or len(set(self.two_qubit)) != len(self.two_qubit):
            raise InvalidArgument("duplicate gate in gate set")
        if not self.strict:
            return
        if H not in single or not ({S, SDG} & set(single)) or CNOT not in self.two_qubit:
            raise InvalidArgument("gate set must contain H, S (or Sdg) and CNOT to reach every Clifford")

    @classmethod
    def parse(cls, spec: str) -> GateSet:
        """``"H,S,CNOT"`` style lists; names are case-insensitive, ``cx`` aliases CNOT."""
        aliases = {k.lower(): k for k in SINGLE_QUBIT_CLIFFORDS + TWO_QUBIT_CLIFFORDS}
        aliases["cx"] = CNOT
        aliases["id"] = I
        single, two = [], []
        for name in filter(None, (s.strip() for s in spec.split(","))):
            kind = aliases.get(name.lower())
            if kind is None:
                raise InvalidArgument(f"unknown gate {name!r} in gate list")
            (two if kind in TWO_QUBIT_CLIFFORDS else single).append(kind)
        return cls(tuple(single), tuple(two))


DEFAULT_GATES = GateSet()


class VariableLayout:
    """Dense variable numbering; layout variables first, auxiliaries after."""

    def __init__(self, n: int, d_max: int, gates: GateSet):
        self.n = n
        self.d_max = d_max
        self.gates = gates
        self._sq_index = {g: i for i, g in enumerate(gates.single_qubit)}
        self._tq_index = {g: i for i, g in enumerate(gates.two_qubit)}
        nsq, ntq = len(gates.single_qubit), len(gates.two_qubit)
        self.num_sq_vars = nsq * n * d_max
        self.num_tq_vars = ntq * n * (n - 1) * d_max
        self.step_size = 2 * n * 2 * n + 2 * n
        self.num_tableau_vars = (d_max + 1) * self.step_size
        self._tq_base = 1 + self.num_sq_vars
        self._tab_base = self._tq_base + self.num_tq_vars
        self.num_layout_vars = self.num_gate_vars + self.num_tableau_vars
        self.num_vars = self.num_layout_vars

    @property
    def num_gate_vars(self) -> int:
        return self.num_sq_vars + self.num_tq_vars

    @property
    def num_aux_vars(self) -> int:
        return self.num_vars - self.num_layout_vars

    def fresh(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def sq(self, g: str, q: int, d: int) -> int:
        return 1 + (d * self.n + q) * len(self.gates.single_qubit) + self._sq_index[g]

    def tq(self, g: str, c: int, t: int, d: int) -> int:
        n = self.n
        pair = c * (n - 1) + (t if t < c else t - 1)
        return self._tq_base + (d * n * (n - 1) + pair) * len(self.gates.two_qubit) + self._tq_index[g]

    def x(self, q: int, k: int, step: int) -> int:
        return self._tab_base + step * self.step_size + q * 2 * self.n + k

    def z(self, q: int, k: int, step: int) -> int:
        return self._tab_base + step * self.step_size + (self.n + q) * 2 * self.n + k

    def r(self, k: int, step: int) -> int:
        return self._tab_base + step * self.step_size + 4 * self.n * self.n + k

    def qubit_gate_vars(self, q: int, d: int) -> list[int]:
        """Every gate variable acting on qubit ``q`` in layer ``d``."""
        out = [self.sq(g, q, d) for g in self.gates.single_qubit]
        for g in self.gates.two_qubit:
            out.extend(self.tq(g, q, t, d) for t in range(self.n) if t != q)
            out.extend(self.tq(g, c, q, d) for c in range(self.n) if c != q)
        return out

    def describe(self) -> dict[int, str]:
        """Human-readable name for every layout variable."""
        names: dict[int, str] = {}
        for d in range(self.d_max):
            for q in range(self.n):
                for g in self.gates.single_qubit:
                    names[self.sq(g, q, d)] = f"{g}[{q}]@{d}"
            for g in self.gates.two_qubit:
                for c in range(self.n):
                    for t in range(self.n):
                        if c != t:
                            names[self.tq(g, c, t, d)] = f"{g}[{c},{t}]@{d}"
        for s in range(self.d_max + 1):
            for k in range(2 * self.n):
                for q in range(self.n):
                    names[self.x(q, k, s)] = f"x[{q},{k}]@{s}"
                    names[self.z(q, k, s)] = f"z[{q},{k}]@{s}"
                names[self.r(k, s)] = f"r[{k}]@{s}"
        return names


def layout_variable_count(n: int, d_max: int, gates: GateSet = DEFAULT_GATES) -> int:
    nsq, ntq = len(gates.single_qubit), len(gates.two_qubit)
    return nsq * n * d_max + ntq * n * (n - 1) * d_max + (d_max + 1) * (2 * n * 2 * n + 2 * n)


@dataclass
class CnfInstance:
    clauses: list[list[int]]
    num_vars: int
    layout: VariableLayout | None = None
    target: Tableau | None = None
    symmetry: bool = True
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


# ---------------------------------------------------------------------------
# clause helpers


def xor2_clauses(a: int, b: int, c: int, guard: Sequence[int] = ()) -> list[list[int]]:
    """``a <=> b xor c``, each clause extended by ``guard`` literals."""
    g = list(guard)
    return [g + [-a, b, c], g + [-a, -b, -c], g + [a, -b, c], g + [a, b, -c]]


def equiv_clauses(a: int, b: int, guard: Sequence[int] = ()) -> list[list[int]]:
    g = list(guard)
    return [g + [-a, b], g + [a, -b]]


def and_clauses(a: int, operands: Sequence[int], guard: Sequence[int] = ()) -> list[list[int]]:
    """``a <=> AND(operands)``; operands may be negative literals."""
    g = list(guard)
    out = [g + [-a, lit] for lit in operands]
    out.append(g + [a] + [-lit for lit in operands])
    return out


def encode_exactly_one(
    variables: Sequence[int], method: str | None = None, fresh: Callable[[], int] | None = None
) -> list[list[int]]:
    """At-least-one clause plus a pairwise or sequential-counter at-most-one."""
    vs = list(variables)
    if not vs:
        raise InvalidArgument("exactly-one over an empty variable set")
    if method is None:
        method = "pairwise" if len(vs) <= PAIRWISE_LIMIT else "sequential"
    clauses = [list(vs)]
    if method == "pairwise":
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                clauses.append([-vs[i], -vs[j]])
        return clauses
    if method != "sequential":
        raise InvalidArgument(f"unknown exactly-one method {method!r}")
    if fresh is None:
        raise InvalidArgument("sequential encoding needs a fresh-variable source")
    m = len(vs)
    if m == 1:
        return clauses
    # s[i] <=> "some of vs[0..i] is true" (one direction suffices)
    s = [fresh() for _ in range(m - 1)]
    clauses.append([-vs[0], s[0]])
    for i in range(1, m - 1):
        clauses.append([-vs[i], s[i]])
        clauses.append([-s[i - 1], s[i]])
        clauses.append([-vs[i], -s[i - 1]])
    clauses.append([-vs[m - 1], -s[m - 2]])
    return clauses


# ---------------------------------------------------------------------------
# update-formula grouping

# Formula descriptors per tableau part of qubit q:
#   x-part: ("keep",) ("from_z",) ("xor_x", c)
#   z-part: ("keep",) ("from_x",) ("xor_self",) ("xor_z", t)
#   sign contribution: ("zero",) ("x&z",) ("x&~z",) ("x",) ("z",) ("x^z",) ("cnot", t)
_SINGLE_RULES = {
    I: (("keep",), ("keep",), ("zero",)),
    H: (("from_z",), ("from_x",), ("x&z",)),
    S: (("keep",), ("xor_self",), ("x&z",)),
    SDG: (("keep",), ("xor_self",), ("x&~z",)),
    X: (("keep",), ("keep",), ("z",)),
    Y: (("keep",), ("keep",), ("x^z",)),
    Z: (("keep",), ("keep",), ("x",)),
}


def update_groups(
    n: int, q: int, single_qubit: Iterable[str], two_qubit: Iterable[str] = ()
) -> dict[str, dict[tuple, list[tuple]]]:
    """Map each tableau part of qubit ``q`` to {formula: [gate keys]}.

    Gate keys are ``(kind, q)`` or ``(kind, c, t)``.  Gates listed under the
    same formula update that part identically and share one implication.
    """
    parts: dict[str, dict[tuple, list[tuple]]] = {"x": {}, "z": {}, "r": {}}

    def add(part, formula, key):
        parts[part].setdefault(formula, []).append(key)

    for kind in single_qubit:
        xr, zr, rr = _SINGLE_RULES[kind]
        key = (kind, q)
        add("x", xr, key)
        add("z", zr, key)
        add("r", rr, key)
    for kind in two_qubit:
        for other in range(n):
            if other == q:
                continue
            as_control = (kind, q, other)
            add("x", ("keep",), as_control)
            add("z", ("xor_z", other), as_control)
            add("r", ("cnot", other), as_control)
            as_target = (kind, other, q)
            add("x", ("xor_x", other), as_target)
            add("z", ("keep",), as_target)
            add("r", ("zero",), as_target)
    return parts


def _gate_var(layout: VariableLayout, key: tuple, d: int) -> int:
    if len(key) == 2:
        return layout.sq(key[0], key[1], d)
    return layout.tq(key[0], key[1], key[2], d)


def encode_transitions(layout: VariableLayout, gates: GateSet, d: int) -> list[list[int]]:
    """Clauses linking tableau step ``d`` to step ``d + 1`` through layer ``d``."""
    if not 0 <= d < layout.d_max:
        raise InvalidArgument(f"layer {d} outside 0..{layout.d_max - 1}")
    n = layout.n
    rows = range(2 * n)
    clauses: list[list[int]] = []
    contrib = [[layout.fresh() for _ in rows] for _ in range(n)]

    for q in range(n):
        groups = update_groups(n, q, gates.single_qubit, gates.two_qubit)
        for part, by_formula in groups.items():
            for formula, keys in by_formula.items():
                members = [_gate_var(layout, key, d) for key in keys]
                if len(members) == 1:
                    sel = members[0]
                else:
                    sel = layout.fresh()
                    clauses.extend([-g, sel] for g in members)
                guard = (-sel,)
                for k in rows:
                    clauses.extend(_formula_clauses(layout, part, formula, q, k, d, contrib, guard))

    # r' = r xor c_0 xor ... xor c_{n-1}
    for k in rows:
        acc = layout.r(k, d)
        for q in range(n):
            out = layout.r(k, d + 1) if q == n - 1 else layout.fresh()
            clauses.extend(xor2_clauses(out, acc, contrib[q][k]))
            acc = out
    return clauses


def _formula_clauses(layout, part, formula, q, k, d, contrib, guard):
    x0, z0 = layout.x(q, k, d), layout.z(q, k, d)
    kind = formula[0]
    if part == "x":
        new = layout.x(q, k, d + 1)
        if kind == "keep":
            return equiv_clauses(new, x0, guard)
        if kind == "from_z":
            return equiv_clauses(new, z0, guard)
        if kind == "xor_x":
            return xor2_clauses(new, x0, layout.x(formula[1], k, d), guard)
    elif part == "z":
        new = layout.z(q, k, d + 1)
        if kind == "keep":
            return equiv_clauses(new, z0, guard)
        if kind == "from_x":
            return equiv_clauses(new, x0, guard)
        if kind == "xor_self":
            return xor2_clauses(new, z0, x0, guard)
        if kind == "xor_z":
            return xor2_clauses(new, z0, layout.z(formula[1], k, d), guard)
    else:
        c = contrib[q][k]
        if kind == "zero":
            return [list(guard) + [-c]]
        if kind == "x":
            return equiv_clauses(c, x0, guard)
        if kind == "z":
            return equiv_clauses(c, z0, guard)
        if kind == "x^z":
            return xor2_clauses(c, x0, z0, guard)
        if kind == "x&z":
            return and_clauses(c, [x0, z0], guard)
        if kind == "x&~z":
            return and_clauses(c, [x0, -z0], guard)
        if kind == "cnot":
            t = formula[1]
            # c <=> x_q & z_t & ~(x_t xor z_q); the xor gets its own variable
            e = layout.fresh()
            out = xor2_clauses(e, layout.x(t, k, d), z0)
            out.extend(and_clauses(c, [x0, layout.z(t, k, d), -e], guard))
            return out
    raise AssertionError(f"unhandled formula {formula} for part {part}")


def encode_symmetry_breaking(layout: VariableLayout, gates: GateSet) -> list[list[int]]:
    n, d_max = layout.n, layout.d_max
    clauses: list[list[int]] = []
    non_identity = [g for g in gates.single_qubit if g != I]
    for d in range(d_max - 1):
        for q in range(n):
            if H in gates.single_qubit:
                clauses.append([-layout.sq(H, q, d), -layout.sq(H, q, d + 1)])
            ident = layout.sq(I, q, d)
            clauses.extend([-ident, -layout.sq(g, q, d + 1)] for g in non_identity)
        for q0 in range(n):
            for q1 in range(n):
                if q0 == q1:
                    continue
                both = [-layout.sq(I, q0, d), -layout.sq(I, q1, d)]
                clauses.extend(both + [-layout.tq(g, q0, q1, d + 1)] for g in gates.two_qubit)
    return clauses


def _pin_tableau(layout: VariableLayout, t: Tableau, step: int) -> list[list[int]]:
    out = []
    for k in range(2 * t.n):
        for q in range(t.n):
            v = layout.x(q, k, step)
            out.append([v if t.x_bit(q, k) else -v])
            v = layout.z(q, k, step)
            out.append([v if t.z_bit(q, k) else -v])
        v = layout.r(k, step)
        out.append([v if t.r_bit(k) else -v])
    return out


def build_encoding(
    target: Tableau, d_max: int, gates: GateSet = DEFAULT_GATES, symmetry: bool = True
) -> CnfInstance:
    """CNF satisfiable iff some circuit of depth <= ``d_max`` over ``gates`` realizes ``target``."""
    if d_max < 0:
        raise InvalidArgument(f"depth bound must be non-negative, got {d_max}")
    if not is_symplectic(target):
        raise InvalidArgument("target tableau fails the symplectic validity check")
    n = target.n
    layout = VariableLayout(n, d_max, gates)
    counts = {}
    clauses = _pin_tableau(layout, identity_tableau(n), 0)
    clauses += _pin_tableau(layout, target, d_max)
    counts["unit"] = len(clauses)
    for d in range(d_max):
        clauses += encode_transitions(layout, gates, d)
    counts["transition"] = len(clauses) - counts["unit"]
    before = len(clauses)
    for d in range(d_max):
        for q in range(n):
            clauses += encode_exactly_one(layout.qubit_gate_vars(q, d), fresh=layout.fresh)
    counts["exactly_one"] = len(clauses) - before
    before = len(clauses)
    if symmetry:
        clauses += encode_symmetry_breaking(layout, gates)
    counts["symmetry"] = len(clauses) - before
    return CnfInstance(clauses, layout.num_vars, layout, target, symmetry, counts)


def encoding_stats(instance: CnfInstance) -> dict[str, int]:
    layout = instance.layout
    stats = {
        "variables": instance.num_vars,
        "clauses": instance.num_clauses,
        "max_clause_width": max((len(c) for c in instance.clauses), default=0),
    }
    if layout is not None:
        stats.update(
            gate_vars=layout.num_gate_vars,
            tableau_vars=layout.num_tableau_vars,
            layout_vars=layout.num_layout_vars,
            aux_vars=instance.num_vars - layout.num_layout_vars,
        )
    stats.update({f"{k}_clauses": v for k, v in instance.counts.items()})
    return stats


def decode_model(layout: VariableLayout, assignment: Mapping[int, bool], target: Tableau | None = None) -> Circuit:
    """Read the gate choice per layer back into a (re-layered) circuit.

    When ``target`` is given the decoded circuit must simulate to it.
    """
    n = layout.n
    gate_list: list[Gate] = []
    for d in range(layout.d_max):
        chosen: dict[int, list[Gate]] = defaultdict(list)
        for q in range(n):
            for g in layout.gates.single_qubit:
                if assignment.get(layout.sq(g, q, d), False):
                    chosen[q].append(Gate(g, (q,)))
        for g in layout.gates.two_qubit:
            for c in range(n):
                for t in range(n):
                    if c != t and assignment.get(layout.tq(g, c, t, d), False):
                        cx = Gate(g, (c, t))
                        chosen[c].append(cx)
                        chosen[t].append(cx)
        for q in range(n):
            if len(chosen[q]) != 1:
                raise InternalConsistencyError(
                    f"qubit {q} carries {len(chosen[q])} gates in layer {d}: {chosen[q]}"
                )
        seen = set()
        for q in range(n):
            g = chosen[q][0]
            if g not in seen:
                seen.add(g)
                gate_list.append(g)
    circuit = layerize(n, gate_list)
    if target is not None and not tableau_equal(simulate(circuit), target):
        raise DecodeVerificationError("decoded circuit does not reproduce the target tableau")
    return circuit
