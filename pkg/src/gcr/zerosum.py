"""Two-player zero-sum pursuit games.

Player 1 (MAX) receives the focus payoff and player 2 (MIN) its negation.
Two solvers are provided: :func:`solve_vi` runs value iteration and
:func:`solve_exact` runs a retrograde analysis that never touches floating
point until the very end. They serve as oracles for each other.

Ties are broken toward the lowest-numbered vertex.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .engine import Positional
from .game import (
    TERMINAL,
    AnyState,
    CompiledGame,
    GameSpec,
    State,
    TwoPlayer,
    compile_game,
)
from .graph import Graph

INF = math.inf


class NonConvergenceError(RuntimeError):
    """An iterative solver ran out of iterations."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def is_zero_sum(spec: GameSpec) -> bool:
    return spec.players == 2 and (spec.focus is not None or isinstance(spec.scheme, TwoPlayer))


def _require_zero_sum(spec: GameSpec) -> None:
    if not is_zero_sum(spec):
        raise ValueError("expected a two-player zero-sum game (TwoPlayer scheme or an auxiliary game)")


def build_aux_game(spec: GameSpec, n: int) -> GameSpec:
    """Zero-sum game of token ``n`` (MAX) against all other tokens (MIN)."""
    if not isinstance(n, int) or not 1 <= n <= spec.tokens:
        raise ValueError(f"token index must lie in 1..{spec.tokens}, got {n!r}")
    if isinstance(spec.scheme, TwoPlayer) and n == 1 and spec.controllers == (1, 2) and spec.focus is None:
        return spec
    controllers = tuple(1 if k == n else 2 for k in range(1, spec.tokens + 1))
    return GameSpec(spec.graph, spec.tokens, spec.gamma, spec.scheme, controllers, focus=n)


@dataclass
class ZeroSumSolution:
    """Values, capture times and optimal positional strategies of a zero-sum game.

    ``capture_time`` counts turns until the capture that settles the
    payoff; it is infinite exactly when the value is zero. Arrays are
    indexed like ``game`` (a :class:`CompiledGame`); ``choice`` holds the
    mover's vertex at decision states and ``-1`` elsewhere.
    """

    spec: GameSpec
    game: CompiledGame
    values: np.ndarray
    times: np.ndarray
    choice: np.ndarray
    iterations: int = 0

    def value(self, s: AnyState) -> float:
        return float(self.values[self.game.index(s)])

    def capture_time(self, s: AnyState) -> int | float:
        t = self.times[self.game.index(s)]
        return INF if t == INF else int(t)

    def action(self, s: State) -> int:
        a = int(self.choice[self.game.index(s)])
        if a < 0:
            raise KeyError(f"no decision at {s!r}")
        return a

    def _table(self, player: int) -> dict[State, int]:
        g = self.game
        rows = np.flatnonzero(g.decision & (g.mover_player == player))
        return {g.state(int(i)): int(self.choice[i]) for i in rows}

    @property
    def max_strategy(self) -> dict[State, int]:
        return self._table(1)

    @property
    def min_strategy(self) -> dict[State, int]:
        return self._table(2)

    def token_strategy(self, token: int) -> Positional:
        """Positional strategy for ``token`` taken from this solution."""
        g = self.game
        rows = np.flatnonzero(g.decision & (g.mover == token))
        table = {g.state(int(i)): int(self.choice[i]) for i in rows}
        return Positional(table, name=f"token {token}")

    def profile(self) -> list[Positional]:
        return [self.token_strategy(k) for k in range(1, self.spec.tokens + 1)]

    def value_map(self) -> dict[AnyState, float]:
        return {self.game.state(i): float(v) for i, v in enumerate(self.values)}

    def time_map(self) -> dict[AnyState, int | float]:
        return {self.game.state(i): (INF if t == INF else int(t)) for i, t in enumerate(self.times)}


# -- shared helpers -----------------------------------------------------------------


def _lookahead(g: CompiledGame, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Successor values with padding set to -inf (for max) and +inf (for min)."""
    vals = v[np.where(g.valid, g.succ, 0)]
    return np.where(g.valid, vals, -np.inf), np.where(g.valid, vals, np.inf)


def _greedy_choice(g: CompiledGame, v: np.ndarray, eps: float) -> np.ndarray:
    lo, hi = _lookahead(g, v)
    choice = -np.ones(g.n_states, dtype=np.int64)
    maxer = g.decision & (g.mover_player == 1)
    miner = g.decision & (g.mover_player == 2)
    best_hi = lo.max(axis=1)
    best_lo = hi.min(axis=1)
    # first column within eps of the optimum is the lowest vertex
    col_max = np.argmax(lo >= best_hi[:, None] - eps, axis=1)
    col_min = np.argmax(hi <= best_lo[:, None] + eps, axis=1)
    rows = np.arange(g.n_states)
    choice[maxer] = g.action[rows[maxer], col_max[maxer]]
    choice[miner] = g.action[rows[miner], col_min[miner]]
    return choice


# -- value iteration ------------------------------------------------------------------


def solve_vi(spec: GameSpec, tol: float = 1e-9, max_iters: int = 100_000) -> ZeroSumSolution:
    """Value iteration from the zero function.

    Stops once the sup-norm change drops below ``tol * (1 - gamma) / (2 * gamma)``,
    which keeps the result within ``tol`` of the fixed point.
    """
    _require_zero_sum(spec)
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    g = compile_game(spec)
    gamma = spec.gamma
    q = g.player_payoff[:, 0]
    maxer = g.mover_player == 1
    threshold = tol * (1.0 - gamma) / (2.0 * gamma)
    v = np.zeros(g.n_states)
    delta = np.inf
    for it in range(1, max_iters + 1):
        lo, hi = _lookahead(g, v)
        best = np.where(maxer, lo.max(axis=1), hi.min(axis=1))
        new = q + gamma * best
        new[g.terminal] = 0.0
        delta = float(np.max(np.abs(new - v)))
        v = new
        if delta < threshold:
            break
    else:
        raise NonConvergenceError(f"value iteration did not converge in {max_iters} iterations", delta)
    times = np.array([_time_or_inf(x, gamma, tol) for x in v])
    times[g.terminal] = INF
    choice = _greedy_choice(g, v, eps=min(tol, 1e-12))
    return ZeroSumSolution(spec, g, v, times, choice, it)


def _time_or_inf(u: float, gamma: float, tol: float) -> float:
    if abs(u) < tol:
        return INF
    return float(capture_time_from_value(abs(u), gamma, tol=max(tol, 1e-9)))


# -- retrograde analysis -----------------------------------------------------------------


def _retrograde(g: CompiledGame, seeds: np.ndarray, chooser: int) -> np.ndarray:
    """Forced-capture times toward ``seeds``.

    A state where ``chooser`` moves joins once one successor is solved; a
    state where the other side moves joins once all successors are solved.
    Returns time per state, ``-1`` when the seed set cannot be forced.
    """
    n = g.n_states
    time = -np.ones(n, dtype=np.int64)
    preds: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in g.succ[i][g.valid[i]]:
            preds[int(j)].append(i)
    pending = g.valid.sum(axis=1).astype(np.int64)
    queue: deque[int] = deque()
    for i in np.flatnonzero(seeds):
        time[i] = 0
        queue.append(int(i))
    while queue:
        j = queue.popleft()
        for i in preds[j]:
            if time[i] >= 0 or not g.decision[i]:
                continue
            if g.mover_player[i] == chooser:
                time[i] = time[j] + 1
                queue.append(i)
            else:
                pending[i] -= 1
                if pending[i] == 0:
                    time[i] = time[j] + 1
                    queue.append(i)
    return time


def solve_exact(spec: GameSpec) -> ZeroSumSolution:
    """Retrograde solution: exact capture times and values ``±gamma**t`` or 0."""
    _require_zero_sum(spec)
    g = compile_game(spec)
    r = g.player_payoff[:, 0]
    win = _retrograde(g, g.capture & (r > 0), chooser=1)
    loss = _retrograde(g, g.capture & (r < 0), chooser=2)
    times = np.full(g.n_states, INF)
    values = np.zeros(g.n_states)
    gamma = spec.gamma
    for i in range(g.n_states):
        if win[i] >= 0:
            times[i] = win[i]
            values[i] = gamma ** int(win[i]) * r[i] if g.capture[i] else gamma ** int(win[i])
        elif loss[i] >= 0:
            times[i] = loss[i]
            values[i] = gamma ** int(loss[i]) * r[i] if g.capture[i] else -(gamma ** int(loss[i]))
    choice = _exact_choice(g, win, loss)
    return ZeroSumSolution(spec, g, values, times, choice, 0)


def _exact_choice(g: CompiledGame, win: np.ndarray, loss: np.ndarray) -> np.ndarray:
    """Greedy strategies ranked on integer keys so ties are exact."""
    # rank: larger is better for MAX; win in t -> big - t, draw -> 0, loss in t -> -(big - t)
    big = g.n_states + 2
    rank = np.zeros(g.n_states, dtype=np.int64)
    rank[win >= 0] = big - win[win >= 0]
    rank[loss >= 0] = -(big - loss[loss >= 0])
    return _greedy_choice(g, rank.astype(float), eps=0.5)


# -- derived quantities ---------------------------------------------------------------


def capture_time_from_value(u: float, gamma: float, tol: float = 1e-9) -> int | float:
    """The exponent T with ``gamma**T == u``; infinity for ``u == 0``."""
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma!r}")
    if abs(u) <= tol:
        return INF
    if u < 0 or u > 1 + tol:
        raise ValueError(f"value {u!r} is not a power of gamma={gamma}")
    t = max(0, round(math.log(min(u, 1.0)) / math.log(gamma)))
    if abs(gamma ** t - u) > tol * max(1.0, u):
        raise ValueError(f"value {u!r} is not a power of gamma={gamma} within {tol}")
    return t


def optimal_capture_time(
    values: float | ZeroSumSolution | Mapping[AnyState, float],
    gamma: float | None = None,
    placement: bool = False,
    tol: float = 1e-9,
):
    """Turn count of optimal play in the cop-and-robber game.

    With a scalar value this is just ``log(u) / log(gamma)`` with an
    exactness check. With a solution or a value map of the two-token game,
    the cop places first, then the robber, and the cop moves first; the
    result is the max-min capture time, and with ``placement=True`` the
    tuple ``(time, cop_vertex, robber_vertex)``.
    """
    if isinstance(values, (int, float, np.floating)):
        if gamma is None:
            raise ValueError("gamma is required for a scalar value")
        if placement:
            raise ValueError("placement needs a full value map")
        return capture_time_from_value(float(values), gamma, tol)
    if isinstance(values, ZeroSumSolution):
        gamma = values.spec.gamma if gamma is None else gamma
        vertices = values.spec.graph.vertex_count
        lookup = values.value
    else:
        if gamma is None:
            raise ValueError("gamma is required with a value map")
        vertices = max(max(s.positions) for s in values if s is not TERMINAL)
        lookup = values.__getitem__
    best_x1, best_x2, best = 0, 0, -INF
    for x1 in range(1, vertices + 1):
        worst_x2, worst = 0, INF
        for x2 in range(1, vertices + 1):
            u = lookup(State((x1, x2), 1))
            if u < worst - tol:
                worst_x2, worst = x2, u
        if worst > best + tol:
            best_x1, best_x2, best = x1, worst_x2, worst
    t = capture_time_from_value(best, gamma, tol)
    return (t, best_x1, best_x2) if placement else t


def copwin_check(graph: Graph, gamma: float = 0.9) -> bool:
    """Whether one cop captures the robber from the best placement on ``graph``."""
    sol = solve_exact(GameSpec.two_player(graph, gamma))
    return optimal_capture_time(sol) != INF


def solve_two_player(graph: Graph, gamma: float, method: str = "exact", tol: float = 1e-9) -> ZeroSumSolution:
    spec = GameSpec.two_player(graph, gamma)
    return solve_exact(spec) if method == "exact" else solve_vi(spec, tol=tol)


def solve_aux(spec: GameSpec, n: int, method: str = "exact", tol: float = 1e-9) -> ZeroSumSolution:
    aux = build_aux_game(spec, n)
    return solve_exact(aux) if method == "exact" else solve_vi(aux, tol=tol)
