"""Command-line front end.

Results go to stdout as JSON (or to ``--out``). Errors go to stderr as
``{"error": {"kind": ..., "field": ..., "message": ...}}`` with exit code
2 for invalid input, 3 for file problems, 4 for solver non-convergence
and 5 when the state space exceeds the safety cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from .constructions import (
    capture_function,
    fig1_fixture,
    noncapturing_ne_construction,
    path_profile,
    tree_profile,
    trigger_profile,
)
from .engine import discounted_payoff, simulate
from .equilibrium import PositionalProfile, best_response, certify_ne, solve_positional_ne
from .game import (
    ChainN,
    Generalized,
    GameSpec,
    State,
    StateCapError,
    TwoPlayer,
    state_key,
)
from .graph import Graph, GraphError, parse_graph
from .presets import PRESET_NAMES, get_preset
from .threat import build_threat_profile, verify_threat_ne
from .zerosum import (
    INF,
    NonConvergenceError,
    ZeroSumSolution,
    build_aux_game,
    optimal_capture_time,
    solve_exact,
    solve_vi,
)

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_NONCONVERGENCE, EXIT_CAP = 0, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, kind: str, field: str | None, message: str, code: int):
        super().__init__(message)
        self.kind, self.field, self.code = kind, field, code


def _invalid(field: str | None, message: str) -> CliError:
    return CliError("validation", field, message, EXIT_VALIDATION)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise _invalid(None, message)


def _time(t) -> int | str:
    return "infinity" if t == INF else int(t)


# -- argument handling -------------------------------------------------------------------


def _read_text(path: str, field: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError("io", field, f"cannot read {path}: {exc.strerror}", EXIT_IO) from None


def _load_json(path: str, field: str) -> Any:
    text = _read_text(path, field)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _invalid(field, f"{path} is not valid JSON: {exc}") from None


def _graph(args) -> Graph:
    if args.graph and args.preset:
        raise _invalid("graph", "give either --graph or --preset, not both")
    if args.preset:
        return get_preset(args.preset).graph
    if not args.graph:
        raise _invalid("graph", "a graph is required (--graph FILE or --preset NAME)")
    try:
        return parse_graph(_read_text(args.graph, "graph"))
    except GraphError as exc:
        raise _invalid("graph", str(exc)) from None


def _gamma(args) -> float:
    if args.gamma is None:
        raise _invalid("gamma", "--gamma is required")
    if not 0.0 < args.gamma < 1.0:
        raise _invalid("gamma", f"gamma must lie strictly inside (0, 1), got {args.gamma}")
    return args.gamma


def _players(args) -> int:
    if args.players is not None:
        if args.players < 2:
            raise _invalid("players", f"at least 2 players are needed, got {args.players}")
        return args.players
    if args.preset:
        return get_preset(args.preset).tokens
    raise _invalid("players", "--players is required")


def _scheme(args, tokens: int):
    name = args.scheme
    if name is None:
        if args.preset:
            return get_preset(args.preset).scheme
        name = "two" if tokens == 2 else "chain"
    if name == "two":
        return TwoPlayer()
    if name == "chain":
        return ChainN()
    if name == "cyclic":
        return Generalized.cyclic()
    obj = _load_json(name, "scheme")
    try:
        return Generalized.from_targets(obj["targets"], bool(obj.get("penalty_dominates", True)))
    except (KeyError, TypeError) as exc:
        raise _invalid("scheme", f"generalized scheme file needs a 'targets' list: {exc}") from None


def _spec(args) -> GameSpec:
    g = _graph(args)
    gamma = _gamma(args)
    tokens = _players(args)
    scheme = _scheme(args, tokens)
    try:
        return GameSpec(g, tokens, gamma, scheme)
    except ValueError as exc:
        field = "scheme" if "scheme" in str(exc) or "token" in str(exc) else "players"
        raise _invalid(field, str(exc)) from None


def _s0(args, spec: GameSpec, required: bool = False) -> State | None:
    raw = args.s0
    if raw is None:
        if args.preset and get_preset(args.preset).tokens == spec.tokens:
            return get_preset(args.preset).s0
        if required:
            raise _invalid("s0", "--s0 is required")
        return None
    try:
        parts = [int(x) for x in raw.replace(";", ",").split(",")]
    except ValueError:
        raise _invalid("s0", f"expected 'v1,...,vN,mover', got {raw!r}") from None
    if len(parts) != spec.tokens + 1:
        raise _invalid("s0", f"expected {spec.tokens} positions and a mover, got {raw!r}")
    s = State(tuple(parts[:-1]), parts[-1])
    try:
        spec.check_state(s)
    except ValueError as exc:
        raise _invalid("s0", str(exc)) from None
    return s


def _profile_file(args, spec: GameSpec) -> PositionalProfile:
    obj = _load_json(args.profile, "profile")
    if not isinstance(obj, dict):
        raise _invalid("profile", "profile file must hold a JSON object mapping states to vertices")
    obj = obj.get("profile", obj)
    try:
        return PositionalProfile.from_json(spec, obj)
    except (ValueError, TypeError) as exc:
        raise _invalid("profile", str(exc)) from None


# -- output helpers -------------------------------------------------------------------------


def _solution_json(sol: ZeroSumSolution, s0: State | None) -> dict:
    g = sol.game
    out: dict[str, Any] = {
        "values": {state_key(g.state(i)): float(v) for i, v in enumerate(sol.values)},
        "capture_times": {state_key(g.state(i)): _time(t) for i, t in enumerate(sol.times)},
        "max_strategy": {state_key(s): a for s, a in sol.max_strategy.items()},
        "min_strategy": {state_key(s): a for s, a in sol.min_strategy.items()},
    }
    if s0 is not None:
        out["s0"] = {"state": state_key(s0), "value": sol.value(s0), "capture_time": _time(sol.capture_time(s0))}
    return out


def _solve_zero_sum(args, spec: GameSpec):
    if args.method == "vi":
        return solve_vi(spec, tol=args.tol, max_iters=args.max_iters)
    return solve_exact(spec)


# -- commands ----------------------------------------------------------------------------------


def _two_token_spec(args) -> GameSpec:
    if args.players not in (None, 2):
        raise _invalid("players", f"{args.command} is a two-token game, got --players {args.players}")
    if args.scheme not in (None, "two"):
        raise _invalid("scheme", f"{args.command} uses the two-token scheme only")
    return GameSpec.two_player(_graph(args), _gamma(args))


def cmd_copwin(args) -> dict:
    spec = _two_token_spec(args)
    sol = _solve_zero_sum(args, spec)
    t, x1, x2 = optimal_capture_time(sol, placement=True)
    return {"copwin": t != INF, "capture_time": _time(t), "cop_start": x1, "robber_start": x2}


def cmd_solve2(args) -> dict:
    spec = _two_token_spec(args)
    sol = _solve_zero_sum(args, spec)
    out = _solution_json(sol, _s0(args, spec))
    t, x1, x2 = optimal_capture_time(sol, placement=True)
    out["optimal_capture_time"] = {"capture_time": _time(t), "cop_start": x1, "robber_start": x2}
    return out


def cmd_solve_aux(args) -> dict:
    spec = _spec(args)
    if args.player is None:
        raise _invalid("player", "--player is required")
    try:
        aux = build_aux_game(spec, args.player)
    except ValueError as exc:
        raise _invalid("player", str(exc)) from None
    out = {"player": args.player}
    out.update(_solution_json(_solve_zero_sum(args, aux), _s0(args, spec)))
    return out


def cmd_solve_ne(args) -> dict:
    spec = _spec(args)
    profile, values = solve_positional_ne(spec, tol=args.tol, max_iters=args.max_iters)
    out: dict[str, Any] = {"profile": profile.to_json(), "values": values.to_json()}
    s0 = _s0(args, spec)
    if s0 is not None:
        outcome = capture_function(spec, s0, profile.strategies())
        out["s0"] = {"state": state_key(s0), "payoffs": list(outcome.payoffs), "K": outcome.K,
                     "capture_time": _time(outcome.history.capture_time)}
    return out


def cmd_certify(args) -> dict:
    spec = _spec(args)
    if not args.profile:
        raise _invalid("profile", "--profile is required")
    return certify_ne(spec, _profile_file(args, spec), tol=args.tol).to_json()


def cmd_threat_ne(args) -> dict:
    spec = _spec(args)
    profile = build_threat_profile(spec, method=args.method)
    s0 = _s0(args, spec)
    out: dict[str, Any] = {}
    if s0 is not None:
        h = simulate(spec, profile.automata, s0)
        out["s0"] = state_key(s0)
        out["aux_values"] = {str(n): profile.solutions[n].value(s0) for n in profile.solutions}
        out["on_path_capture_time"] = _time(h.capture_time)
    if args.verify:
        if s0 is None:
            raise _invalid("s0", "--verify needs --s0")
        out["report"] = verify_threat_ne(spec, profile, s0, tol=args.tol).to_json()
    return out


def _default_strategies(args, spec: GameSpec):
    if args.profile:
        return _profile_file(args, spec).strategies()
    if args.preset == "fig1":
        return fig1_fixture(spec.gamma).strategies
    if args.preset == "fig2":
        return trigger_profile(spec.graph, get_preset("fig2").s0)
    if args.preset == "fig5":
        return build_threat_profile(spec).automata
    return solve_positional_ne(spec, tol=args.tol, max_iters=args.max_iters)[0].strategies()


def cmd_simulate(args) -> dict:
    # scripted profiles do not depend on gamma; without it only the trace is reported
    trace_only = args.gamma is None and (args.profile or args.preset in ("fig1", "fig2"))
    if trace_only:
        args.gamma = 0.5
    spec = _spec(args)
    s0 = _s0(args, spec, required=True)
    h = simulate(spec, _default_strategies(args, spec), s0)
    out = h.to_json()
    if not trace_only:
        q = discounted_payoff(spec, h)
        winners = [n for n, x in enumerate(q, start=1) if x > 0]
        out["payoffs"] = list(q)
        out["K"] = winners[0] if winners else 0
    if args.dot:
        _write(args.dot, h.to_dot(), "dot")
    return out


def cmd_construct(args) -> dict:
    kind = args.kind
    if kind == "noncap":
        g, gamma = _graph(args), _gamma(args)
        spec = GameSpec.chain(g, 3, gamma)
        try:
            s0, strategies = noncapturing_ne_construction(g, gamma)
        except ValueError as exc:
            raise _invalid("graph", str(exc)) from None
    else:
        spec = _spec(args)
        if spec.tokens != 3 or not isinstance(spec.scheme, ChainN):
            raise _invalid("players", f"construct {kind} needs the three-token chain game")
        s0 = _s0(args, spec, required=kind == "trigger")
        try:
            if kind == "path":
                strategies = path_profile(spec.graph, s0)
            elif kind == "tree":
                strategies = tree_profile(spec.graph)
            else:
                strategies = trigger_profile(spec.graph, s0)
        except (GraphError, ValueError) as exc:
            raise _invalid("graph" if isinstance(exc, GraphError) else "s0", str(exc)) from None
    out: dict[str, Any] = {"construction": kind}
    if kind != "trigger":
        out["profile"] = PositionalProfile.from_strategies(spec, strategies).to_json()
    if s0 is not None:
        outcome = capture_function(spec, s0, strategies)
        out["s0"] = state_key(s0)
        out["K"] = outcome.K
        out["payoffs"] = list(outcome.payoffs)
        out["capture_time"] = _time(outcome.history.capture_time)
        if kind in ("trigger", "noncap"):
            out["best_deviation"] = {
                str(n): best_response(spec, [None if k == n else a for k, a in enumerate(strategies, 1)], n, s0).value
                for n in (1, 2, 3)
            }
    return out


def cmd_classify(args) -> dict:
    g = _graph(args)
    out: dict[str, Any] = {"vertex_count": g.vertex_count, "edge_count": len(g.edges)}
    out.update(g.classify())
    if args.gamma is not None:
        out["copwin"] = cmd_copwin(args)["copwin"]
    return out


COMMANDS = {
    "copwin": cmd_copwin,
    "solve2": cmd_solve2,
    "solve-aux": cmd_solve_aux,
    "solve-ne": cmd_solve_ne,
    "certify": cmd_certify,
    "threat-ne": cmd_threat_ne,
    "simulate": cmd_simulate,
    "construct": cmd_construct,
    "classify": cmd_classify,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--graph", help="edge-list file: vertex count, then one 'u v' pair per line")
    common.add_argument("--preset", choices=PRESET_NAMES)
    common.add_argument("--players", type=int, help="number of tokens N")
    common.add_argument("--scheme", help="two | chain | cyclic | path to a JSON file with 'targets'")
    common.add_argument("--gamma", type=float, help="discount factor in (0, 1)")
    common.add_argument("--s0", help="initial state 'v1,...,vN,mover'")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--max-iters", type=int, default=100_000)
    common.add_argument("--method", choices=("exact", "vi"), default="exact")
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--dot", help="write a DOT rendering here")

    parser = _Parser(prog="gcr", description="Multi-token cops and robbers on graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "solve-aux":
            p.add_argument("--player", type=int)
        if name in ("certify", "simulate"):
            p.add_argument("--profile", help="JSON object mapping 'x1,...,xN;mover' to a vertex")
        if name == "threat-ne":
            p.add_argument("--verify", action="store_true")
        if name == "construct":
            p.add_argument("kind", choices=("path", "tree", "trigger", "noncap"))
    return parser


def _write(path: str, text: str, field: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError("io", field, f"cannot write {path}: {exc.strerror}", EXIT_IO) from None


def _emit_error(err: CliError) -> int:
    json.dump({"error": {"kind": err.kind, "field": err.field, "message": str(err)}}, sys.stderr)
    sys.stderr.write("\n")
    return err.code


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        for field in ("profile", "player", "verify", "kind"):
            if not hasattr(args, field):
                setattr(args, field, None)
        if args.tol <= 0:
            raise _invalid("tol", f"tol must be positive, got {args.tol}")
        if args.max_iters <= 0:
            raise _invalid("max_iters", f"max-iters must be positive, got {args.max_iters}")
        result = COMMANDS[args.command](args)
        text = json.dumps(result, indent=2, allow_nan=False) + "\n"
        if args.out:
            _write(args.out, text, "out")
        else:
            sys.stdout.write(text)
        return EXIT_OK
    except CliError as err:
        return _emit_error(err)
    except NonConvergenceError as exc:
        return _emit_error(CliError("nonconvergence", "max_iters", str(exc), EXIT_NONCONVERGENCE))
    except StateCapError as exc:
        return _emit_error(CliError("state_cap", "graph", str(exc), EXIT_CAP))
    except (ValueError, GraphError, KeyError) as exc:
        return _emit_error(_invalid(None, str(exc)))


if __name__ == "__main__":
    sys.exit(main())
