"""Multi-token cops and robbers on graphs: solvers, equilibria and constructions."""

from .constructions import (
    CaptureOutcome,
    capture_function,
    fig1_fixture,
    noncapturing_ne_construction,
    path_profile,
    tree_profile,
    trigger_profile,
)
from .engine import Automaton, History, Positional, discounted_payoff, simulate
from .equilibrium import (
    BestResponse,
    Certificate,
    PositionalProfile,
    ValueTable,
    best_response,
    certify_ne,
    evaluate_profile,
    solve_positional_ne,
)
from .game import (
    NULL_MOVE,
    TERMINAL,
    ChainN,
    GameSpec,
    Generalized,
    State,
    StateCapError,
    TwoPlayer,
    action_set,
    capture_memberships,
    compile_game,
    enumerate_states,
    transition,
    turn_payoffs,
)
from .graph import Graph, GraphError, cycle_graph, parse_graph, path_graph, read_graph, star_graph
from .threat import ThreatProfile, build_threat_profile, verify_threat_ne
from .zerosum import (
    NonConvergenceError,
    ZeroSumSolution,
    build_aux_game,
    copwin_check,
    optimal_capture_time,
    solve_exact,
    solve_vi,
)

__all__ = [
    "action_set",
    "Automaton",
    "best_response",
    "BestResponse",
    "build_aux_game",
    "build_threat_profile",
    "capture_function",
    "capture_memberships",
    "CaptureOutcome",
    "Certificate",
    "certify_ne",
    "ChainN",
    "compile_game",
    "copwin_check",
    "cycle_graph",
    "discounted_payoff",
    "enumerate_states",
    "evaluate_profile",
    "fig1_fixture",
    "GameSpec",
    "Generalized",
    "Graph",
    "GraphError",
    "History",
    "noncapturing_ne_construction",
    "NonConvergenceError",
    "NULL_MOVE",
    "optimal_capture_time",
    "parse_graph",
    "path_graph",
    "path_profile",
    "Positional",
    "PositionalProfile",
    "read_graph",
    "simulate",
    "solve_exact",
    "solve_positional_ne",
    "solve_vi",
    "star_graph",
    "State",
    "StateCapError",
    "TERMINAL",
    "ThreatProfile",
    "transition",
    "tree_profile",
    "trigger_profile",
    "turn_payoffs",
    "TwoPlayer",
    "ValueTable",
    "verify_threat_ne",
    "ZeroSumSolution",
]

__version__ = "0.1.0"
