"""Hand-built strategy profiles and outcome classification.

Every builder returns plain strategies (one per token) that can be fed to
:func:`gcr.engine.simulate`, tabulated with
:meth:`gcr.equilibrium.PositionalProfile.from_strategies` when positional,
or checked with :func:`gcr.equilibrium.best_response`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .engine import Automaton, History, Positional, Strategy, discounted_payoff, simulate
from .game import NULL_MOVE, TERMINAL, AnyState, ChainN, GameSpec, State
from .graph import Graph, GraphError
from .zerosum import INF, ZeroSumSolution, copwin_check, solve_exact


@dataclass
class CaptureOutcome:
    """Which player, if any, earned a capture.

    ``K`` is the smallest index with a positive payoff, 0 when nobody
    gained; ``capturers`` lists every such index.
    """

    K: int
    capturers: tuple[int, ...]
    payoffs: tuple[float, ...]
    history: History


def capture_function(spec: GameSpec, s0: AnyState, profile: Sequence[Strategy]) -> CaptureOutcome:
    h = simulate(spec, profile, s0)
    q = discounted_payoff(spec, h)
    winners = tuple(n for n, x in enumerate(q, start=1) if x > 0)
    return CaptureOutcome(winners[0] if winners else 0, winners, q, h)


# -- moves on trees -----------------------------------------------------------------


def away_from(g: Graph, x: int, y: int) -> int:
    """Lowest neighbor of ``x`` farther from ``y``; ``x`` itself if none."""
    d = g.distance(x, y)
    return next((w for w in g.neighbors(x) if g.distance(w, y) > d), x)


def _median_of(g: Graph):
    return lru_cache(maxsize=None)(g.median)


def collinear_case(g: Graph, positions: tuple[int, int, int]) -> int | None:
    """Index (1..3) of the token on the median, ``None`` when no token is.

    Ties prefer token 2, then token 1.
    """
    m = g.median(*positions)
    x1, x2, x3 = positions
    if m == x2:
        return 2
    if m == x1:
        return 1
    if m == x3:
        return 3
    return None


def _collinear_move(g: Graph, case: int, token: int, pos: tuple[int, int, int]) -> int:
    x1, x2, x3 = pos
    if token == 1:
        return g.step_toward(x1, x2)
    if token == 2:
        # an adjacent prey is taken at once; running would forfeit a sure capture
        if case == 2 or g.distance(x2, x3) == 1:
            return g.step_toward(x2, x3)
        return away_from(g, x2, x1)
    if case == 1:
        return x3
    return away_from(g, x3, x2)


def _median_race_rule(g: Graph):
    median = _median_of(g)

    def rule(s: State) -> int:
        pos = s.positions
        m = median(*pos)
        if m in pos:
            case = 2 if m == pos[1] else 1 if m == pos[0] else 3
            return _collinear_move(g, case, s.mover, pos)
        x = pos[s.mover - 1]
        # token 3 waits one step from the median while token 2 is also one step away
        if s.mover == 3 and g.distance(x, m) == 1 and g.distance(pos[1], m) == 1:
            return x
        return g.step_toward(x, m)

    return rule


def _require_three(s0: AnyState | None) -> None:
    if s0 is not None and (s0 is TERMINAL or len(s0.positions) != 3):
        raise ValueError("this construction needs a three-token state")


def path_profile(g: Graph, s0: State | None = None) -> list[Positional]:
    """Collinear chase on a path; every play ends in a capture.

    Depending on which token sits between the other two:
    token 1 in the middle: 1 closes on 2, 2 runs from 1, 3 stays;
    token 2 in the middle: 1 closes on 2, 2 closes on 3, 3 runs from 2;
    token 3 in the middle: 1 closes on 2, 2 runs from 1, 3 runs from 2.
    Token 2 takes token 3 whenever it is adjacent to it. The case is
    re-read every turn.
    """
    if not g.is_path:
        raise GraphError("path_profile needs a path graph")
    _require_three(s0)
    rule = _median_race_rule(g)
    return [Positional(rule, name=f"path strategy {k}") for k in (1, 2, 3)]


def tree_profile(g: Graph) -> list[Positional]:
    """Median race on a tree.

    While no token is on the median of the three positions, each mover
    steps toward it, except that token 3 holds one step short while token 2
    is also one step short. Once a token is on the median the tokens are
    collinear and the path rules of :func:`path_profile` apply.
    """
    if not g.is_tree:
        raise GraphError("tree_profile needs a tree")
    rule = _median_race_rule(g)
    return [Positional(rule, name=f"tree strategy {k}") for k in (1, 2, 3)]


# -- trigger profile on an odd path ---------------------------------------------------


def _moved(s: AnyState, a, token: int) -> bool:
    return isinstance(s, State) and a is not NULL_MOVE and s.mover == token and a != s.positions[token - 1]


def trigger_profile(g: Graph, s0: State) -> list[Automaton]:
    """Everybody waits; any move sets off chases that punish the mover.

    Token 1 waits until token 2 moves, then chases it. Token 2 waits until
    token 3 moves, then chases it. Token 3 waits until someone moves; if
    token 1 moved first it heads for token 2, if token 2 moved first it
    heads for token 1. Triggers never reset.
    """
    if not g.is_path or g.vertex_count % 2 == 0 or g.vertex_count < 3:
        raise GraphError("trigger_profile needs a path with an odd number of vertices")
    _require_three(s0)
    ends = {v for v in g.vertices if g.degree(v) == 1}
    x1, x2, x3 = s0.positions
    if {x1, x2} != ends or g.distance(x3, x1) != g.distance(x3, x2):
        raise ValueError("tokens 1 and 2 must start on the two ends and token 3 in the middle")

    def chaser(me: int, prey: int) -> Automaton:
        def act(mode, s):
            here = s.positions[me - 1]
            return here if mode == "wait" else g.step_toward(here, s.positions[prey - 1])

        def update(mode, s, a):
            return "chase" if mode == "wait" and _moved(s, a, prey) else mode

        return Automaton("wait", act, update, name=f"trigger {me}")

    def middle_act(mode, s):
        here = s.positions[2]
        if mode == "wait":
            return here
        return g.step_toward(here, s.positions[1 if mode == "to2" else 0])

    def middle_update(mode, s, a):
        if mode != "wait":
            return mode
        if _moved(s, a, 1):
            return "to2"
        if _moved(s, a, 2):
            return "to1"
        return mode

    return [chaser(1, 2), chaser(2, 3), Automaton("wait", middle_act, middle_update, name="trigger 3")]


# -- extended two-player strategies ------------------------------------------------------


def extended_pursuit(sol: ZeroSumSolution, cop: int, robber: int) -> Positional:
    """Two-token optimal pursuit of ``robber`` by ``cop``, ignoring other tokens."""
    return Positional(
        lambda s: sol.action(State((s.positions[cop - 1], s.positions[robber - 1]), 1)),
        name=f"token {cop} pursues {robber}",
    )


def extended_evasion(sol: ZeroSumSolution, cop: int, robber: int) -> Positional:
    """Two-token optimal evasion of ``cop`` by ``robber``, ignoring other tokens."""
    return Positional(
        lambda s: sol.action(State((s.positions[cop - 1], s.positions[robber - 1]), 2)),
        name=f"token {robber} evades {cop}",
    )


def stay_strategy() -> Positional:
    return Positional(lambda s: s.positions[s.mover - 1], name="stay")


def noncapturing_ne_construction(g: Graph, gamma: float) -> tuple[State, list[Positional]]:
    """A three-token start and profile on a graph that is not cop-win.

    Token 1 starts at vertex 1, token 3 on top of it, and token 2 at the
    lowest vertex from which it escapes a lone cop at vertex 1. Tokens 1
    and 3 never move; token 2 plays its two-token escape against token 1.
    """
    if copwin_check(g, gamma):
        raise ValueError("graph is cop-win; a single cop always captures")
    sol = solve_exact(GameSpec.two_player(g, gamma))
    x1 = 1
    x2 = next(v for v in g.vertices if v != x1 and sol.capture_time(State((x1, v), 1)) == INF)
    s0 = State((x1, x2, x1), 1)
    return s0, [stay_strategy(), extended_evasion(sol, 1, 2), stay_strategy()]


# -- the twelve-vertex evasion fixture ------------------------------------------------------


def fig1_graph() -> Graph:
    return Graph(12, [(i, i + 1) for i in range(1, 10)] + [(3, 11), (11, 12)])


@dataclass
class EvasionFixture:
    graph: Graph
    spec: GameSpec
    s0: State
    strategies: list[Positional]


def fig1_fixture(gamma: float = 0.9) -> EvasionFixture:
    """Token 3 hides behind a motionless token 1; token 2 keeps its distance.

    Token 1 stays. Token 2 stays unless token 1 is adjacent, then steps
    away from it. Token 3 walks to token 1 and shadows it.
    """
    g = fig1_graph()

    def p2(s: State) -> int:
        x1, x2 = s.positions[0], s.positions[1]
        return away_from(g, x2, x1) if g.distance(x1, x2) == 1 else x2

    def p3(s: State) -> int:
        return g.step_toward(s.positions[2], s.positions[0])

    strategies = [stay_strategy(), Positional(p2, name="keep away"), Positional(p3, name="shadow token 1")]
    return EvasionFixture(g, GameSpec(g, 3, gamma, ChainN()), State((1, 12, 2), 3), strategies)


def fig1_two_player_profile(gamma: float = 0.9) -> list[Positional]:
    """Each token plays its two-token optimum: 1 pursues 2, 2 pursues 3, 3 evades 2."""
    sol = solve_exact(GameSpec.two_player(fig1_graph(), gamma))
    return [extended_pursuit(sol, 1, 2), extended_pursuit(sol, 2, 3), extended_evasion(sol, 2, 3)]


def fig1_evasion_variant(gamma: float = 0.9) -> list[Positional]:
    """The fixture with tokens 2 and 3 switched to their two-token optima against each other."""
    sol = solve_exact(GameSpec.two_player(fig1_graph(), gamma))
    return [stay_strategy(), extended_pursuit(sol, 2, 3), extended_evasion(sol, 2, 3)]

