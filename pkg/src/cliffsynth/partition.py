"""Divide-and-conquer depth reduction for circuits too large for exact synthesis.

Pipeline: split a Clifford+T circuit into alternating Clifford / T blocks,
split each Clifford block by qubits (interaction-graph components packed into
bins of at most ``max_qubits``), split deep bins by layers, synthesize every
leaf optimally, and stitch everything back together.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .circuit import Circuit, layerize
from .encoder import DEFAULT_GATES, GateSet
from .errors import CliffSynthError, InvalidArgument, SearchTimeout
from .satio import Limits
from .search import LINEAR_DOWN, SearchStrategy, synth_optimal
from .tableau import NON_CLIFFORD, Gate, simulate, tableau_equal

log = logging.getLogger(__name__)

CLIFFORD = "clifford"
T_BARRIER = "t-barrier"


@dataclass(frozen=True)
class Block:
    kind: str
    qubits: tuple[int, ...]
    layer_range: tuple[int, int]
    circuit: Circuit


@dataclass
class BlockPlan:
    n: int
    blocks: list[Block] = field(default_factory=list)

    @property
    def clifford_blocks(self) -> list[Block]:
        return [b for b in self.blocks if b.kind == CLIFFORD]

    def kinds(self) -> list[str]:
        return [b.kind for b in self.blocks]

    def reassemble(self) -> Circuit:
        return layerize(self.n, (g for b in self.blocks for g in b.circuit.gates))


@dataclass(frozen=True)
class HeuristicConfig:
    split_size: int = 6
    depth_threshold: int = 12
    max_qubits: int = 5
    limits: Limits = Limits(wall_time=60.0)
    jobs: int = 1
    gates: GateSet = DEFAULT_GATES
    symmetry: bool = True

    def __post_init__(self):
        if self.split_size < 1:
            raise InvalidArgument("split size must be at least 1")
        if self.split_size >= self.depth_threshold:
            raise InvalidArgument("split size must be smaller than the depth threshold")
        if self.max_qubits < 2:
            raise InvalidArgument("max_qubits must be at least 2")


def split_vertical(c: Circuit, s: int) -> list[Circuit]:
    if s < 1:
        raise InvalidArgument("split size must be at least 1")
    return [Circuit(c.n, c.layers[i : i + s]) for i in range(0, c.depth, s)]


@dataclass(frozen=True)
class Bin:
    qubits: tuple[int, ...]
    circuit: Circuit  # on local indices 0..len(qubits)-1
    oversized: bool = False


def restrict(c: Circuit, qubits: tuple[int, ...]) -> Circuit:
    """Gates of ``c`` on ``qubits``, relabelled to local indices."""
    local = {q: i for i, q in enumerate(qubits)}
    gates = [Gate(g.kind, tuple(local[q] for q in g.qubits)) for g in c.gates if g.qubits[0] in local]
    return layerize(len(qubits), gates)


def embed(local: Circuit, qubits: tuple[int, ...]) -> list[Gate]:
    return [Gate(g.kind, tuple(qubits[q] for q in g.qubits)) for g in local.gates]


def interaction_components(c: Circuit) -> list[list[int]]:
    """Connected components of active qubits under two-qubit interactions."""
    parent = list(range(c.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    active = set()
    for g in c.gates:
        active.update(g.qubits)
        if len(g.qubits) == 2:
            a, b = find(g.qubits[0]), find(g.qubits[1])
            if a != b:
                parent[max(a, b)] = min(a, b)
    comps: dict[int, list[int]] = {}
    for q in sorted(active):
        comps.setdefault(find(q), []).append(q)
    return list(comps.values())


def split_horizontal(c: Circuit, n_max: int) -> list[Bin]:
    """First-fit-decreasing packing of interaction components into bins."""
    if n_max < 2:
        raise InvalidArgument("max_qubits must be at least 2")
    comps = sorted(interaction_components(c), key=lambda comp: (-len(comp), comp[0]))
    bins: list[list[int]] = []
    oversized: list[list[int]] = []
    for comp in comps:
        if len(comp) > n_max:
            oversized.append(comp)
            continue
        for b in bins:
            if len(b) + len(comp) <= n_max:
                b.extend(comp)
                break
        else:
            bins.append(list(comp))
    out = [Bin(tuple(sorted(b)), restrict(c, tuple(sorted(b)))) for b in bins]
    out += [Bin(tuple(comp), restrict(c, tuple(comp)), True) for comp in oversized]
    return out


def partition_clifford_t(c: Circuit) -> BlockPlan:
    """Alternate maximal Clifford blocks with blocks holding only T/Tdg gates.

    Each gate goes to the earliest block of its type that follows every
    earlier gate on its qubits, so Clifford gates sharing a layer with T gates
    join the preceding Clifford block and per-qubit gate order is kept.
    """
    frontier = [0] * c.n
    slots: dict[int, list[tuple[int, Gate]]] = {}
    for layer_index, layer in enumerate(c.layers):
        for g in layer:
            pos = max(frontier[q] for q in g.qubits)
            is_t = g.kind in NON_CLIFFORD
            if (pos % 2 == 1) != is_t:
                pos += 1
            slots.setdefault(pos, []).append((layer_index, g))
            for q in g.qubits:
                frontier[q] = pos
    plan = BlockPlan(c.n)
    for pos in sorted(slots):
        entries = slots[pos]
        gates = [g for _, g in entries]
        qubits = tuple(sorted({q for g in gates for q in g.qubits}))
        span = (min(i for i, _ in entries), max(i for i, _ in entries) + 1)
        kind = T_BARRIER if pos % 2 else CLIFFORD
        plan.blocks.append(Block(kind, qubits, span, layerize(c.n, gates)))
    return plan


# ---------------------------------------------------------------------------
# leaf synthesis


@dataclass(frozen=True)
class Leaf:
    block: int
    qubits: tuple[int, ...]
    circuit: Circuit


@dataclass
class LeafResult:
    circuit: Circuit
    original_depth: int
    depth: int
    certified: bool = False
    timed_out: bool = False


def plan_leaves(block: Circuit, block_index: int, cfg: HeuristicConfig) -> list[Leaf]:
    """Leaves in an order whose concatenation preserves per-qubit gate order."""
    leaves = []
    for b in split_horizontal(block, cfg.max_qubits):
        if b.circuit.depth <= cfg.depth_threshold and not b.oversized:
            leaves.append(Leaf(block_index, b.qubits, b.circuit))
            continue
        for chunk in split_vertical(b.circuit, cfg.split_size):
            if not b.oversized:
                leaves.append(Leaf(block_index, b.qubits, chunk))
                continue
            # oversized component: the shallow chunk may fall apart by qubits
            for sub in split_horizontal(chunk, cfg.max_qubits):
                qubits = tuple(b.qubits[q] for q in sub.qubits)
                leaves.append(Leaf(block_index, qubits, sub.circuit))
    return leaves


def synthesize_leaf(leaf: Leaf, cfg: HeuristicConfig) -> LeafResult:
    original = leaf.circuit
    if original.depth <= 1:
        return LeafResult(original, original.depth, original.depth, certified=True)
    target = simulate(original)
    try:
        report = synth_optimal(
            target,
            cfg.gates,
            SearchStrategy(LINEAR_DOWN, upper_bound=original.depth),
            cfg.limits,
            cfg.symmetry,
        )
    except SearchTimeout:
        return LeafResult(original, original.depth, original.depth, timed_out=True)
    if report.optimal_depth < original.depth:
        return LeafResult(report.circuit, original.depth, report.optimal_depth, report.certified)
    return LeafResult(original, original.depth, original.depth, report.certified, not report.certified)


def _synthesize_leaf_task(args):
    return synthesize_leaf(*args)


@dataclass
class HeuristicResult:
    circuit: Circuit
    input_depth: int
    plan: BlockPlan
    leaves: list[LeafResult]
    accepted_blocks: list[int]

    @property
    def depth(self) -> int:
        return self.circuit.depth

    @property
    def timeouts(self) -> int:
        return sum(r.timed_out for r in self.leaves)


def run_heuristic(c: Circuit, cfg: HeuristicConfig = HeuristicConfig()) -> HeuristicResult:
    plan = partition_clifford_t(c)
    leaves: list[Leaf] = []
    for i, block in enumerate(plan.blocks):
        if block.kind == CLIFFORD:
            leaves.extend(plan_leaves(block.circuit, i, cfg))

    work = [(leaf, cfg) for leaf in leaves]
    if cfg.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_synthesize_leaf_task, work))
    else:
        results = [_synthesize_leaf_task(w) for w in work]

    optimized: dict[int, list[Gate]] = {}
    for leaf, res in zip(leaves, results):
        optimized.setdefault(leaf.block, []).extend(embed(res.circuit, leaf.qubits))
    new_blocks: dict[int, Circuit] = {}
    for i, gates in optimized.items():
        block = plan.blocks[i].circuit
        candidate = layerize(c.n, gates)
        if not tableau_equal(simulate(candidate), simulate(block)):
            raise CliffSynthError(f"reassembled Clifford block {i} is not equivalent to the original")
        new_blocks[i] = candidate

    def assemble(chosen: set[int]) -> Circuit:
        gates = []
        for i, block in enumerate(plan.blocks):
            gates.extend((new_blocks[i] if i in chosen else block.circuit).gates)
        return layerize(c.n, gates)

    # substituting blocks can lengthen the critical path through neighbouring
    # T blocks; keep a substitution only when global depth does not grow
    base = assemble(set())
    chosen = set(new_blocks)
    best = assemble(chosen)
    if best.depth > base.depth:
        chosen = set()
        best = base
        for i in sorted(new_blocks):
            trial = assemble(chosen | {i})
            if trial.depth <= best.depth:
                chosen.add(i)
                best = trial
    if best.depth > c.depth:
        best, chosen = c, set()
    log.debug("heuristic: depth %d -> %d over %d leaves", c.depth, best.depth, len(leaves))
    return HeuristicResult(best, c.depth, plan, results, sorted(chosen))


def optimize_heuristic(c: Circuit, cfg: HeuristicConfig = HeuristicConfig()) -> Circuit:
    return run_heuristic(c, cfg).circuit
