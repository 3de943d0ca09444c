"""Depth-optimal Clifford circuit synthesis with a SAT solver."""

from .circuit import Circuit, circuit_from_gates, emit_circuit, layerize, metrics, parse_circuit
from .encoder import DEFAULT_GATES, GateSet, VariableLayout, build_encoding, decode_model
from .errors import (
    CircuitSyntaxError,
    CliffSynthError,
    DecodeVerificationError,
    DimacsError,
    InternalConsistencyError,
    InvalidArgument,
    NonCliffordGateError,
    SearchTimeout,
)
from .partition import HeuristicConfig, optimize_heuristic, partition_clifford_t, run_heuristic
from .satio import Limits, export_dimacs, import_dimacs, make_backend, solve
from .search import SearchStrategy, brute_force_min_depth, synth_at_depth, synth_optimal
from .tableau import (
    Gate,
    Tableau,
    apply_gate,
    apply_gates,
    format_tableau,
    identity_tableau,
    parse_tableau,
    random_tableau,
    simulate,
    tableau_equal,
)

__all__ = [
    "Circuit", "circuit_from_gates", "emit_circuit", "layerize", "metrics", "parse_circuit",
    "DEFAULT_GATES", "GateSet", "VariableLayout", "build_encoding", "decode_model",
    "CircuitSyntaxError", "CliffSynthError", "DecodeVerificationError", "DimacsError",
    "InternalConsistencyError", "InvalidArgument", "NonCliffordGateError", "SearchTimeout",
    "HeuristicConfig", "optimize_heuristic", "partition_clifford_t", "run_heuristic",
    "Limits", "export_dimacs", "import_dimacs", "make_backend", "solve",
    "SearchStrategy", "brute_force_min_depth", "synth_at_depth", "synth_optimal",
    "Gate", "Tableau", "apply_gate", "apply_gates", "format_tableau", "identity_tableau",
    "parse_tableau", "random_tableau", "simulate", "tableau_equal",
]
