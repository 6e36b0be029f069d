"""N-player positional equilibria, their certification, and best responses.

Positional profiles are stored as one action per compiled state: the
vertex chosen by the mover at every decision state, ``-1`` elsewhere.
Values are exact: a profile's value at a state is ``gamma**t`` times the
turn payoff of the capture reached after ``t`` turns, or 0 when play
cycles forever.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .engine import Automaton, Positional, Strategy
from .game import (
    NULL_MOVE,
    TERMINAL,
    AnyState,
    CompiledGame,
    GameSpec,
    IllegalActionError,
    State,
    action_set,
    compile_game,
    is_capture,
    parse_state_key,
    player_payoffs,
    state_cap,
    state_key,
    StateCapError,
    transition,
)
from .zerosum import NonConvergenceError

_TIE_EPS = 1e-12


# -- profiles and values ------------------------------------------------------------


class PositionalProfile:
    """Memoryless profile: the mover's vertex at every decision state."""

    def __init__(self, spec: GameSpec, choice: np.ndarray):
        self.spec = spec
        self.game = compile_game(spec)
        g = self.game
        choice = np.asarray(choice, dtype=np.int64)
        if choice.shape != (g.n_states,):
            raise ValueError(f"choice array must have shape ({g.n_states},)")
        ok = (g.action == choice[:, None]) & g.valid
        bad = g.decision & ~ok.any(axis=1)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise IllegalActionError(f"profile plays {int(choice[i])} at {g.state(i)!r}, which is not a legal move")
        self.choice = np.where(g.decision, choice, -1)
        self.column = np.where(g.decision, np.argmax(ok, axis=1), 0)
        self.next = g.succ[np.arange(g.n_states), self.column]

    @classmethod
    def from_strategies(cls, spec: GameSpec, strategies: Sequence[Strategy]) -> "PositionalProfile":
        """Tabulate positional strategies, one per token."""
        if len(strategies) != spec.tokens:
            raise ValueError(f"need {spec.tokens} strategies, got {len(strategies)}")
        g = compile_game(spec)
        choice = -np.ones(g.n_states, dtype=np.int64)
        for i in np.flatnonzero(g.decision):
            s = g.state(int(i))
            choice[i] = int(strategies[s.mover - 1].act(None, s))
        return cls(spec, choice)

    @classmethod
    def from_rule(cls, spec: GameSpec, rule) -> "PositionalProfile":
        """Profile from ``rule(state) -> vertex`` evaluated at every decision state."""
        g = compile_game(spec)
        choice = -np.ones(g.n_states, dtype=np.int64)
        for i in np.flatnonzero(g.decision):
            choice[i] = int(rule(g.state(int(i))))
        return cls(spec, choice)

    @classmethod
    def stay(cls, spec: GameSpec) -> "PositionalProfile":
        g = compile_game(spec)
        movers = np.clip(g.mover[:-1] - 1, 0, None)
        here = g.positions[np.arange(g.terminal), movers]
        return cls(spec, np.append(here, -1))

    @classmethod
    def from_json(cls, spec: GameSpec, obj: Mapping[str, int]) -> "PositionalProfile":
        g = compile_game(spec)
        stay = cls.stay(spec).choice.copy()
        seen = np.zeros(g.n_states, dtype=bool)
        for key, a in obj.items():
            s = parse_state_key(key)
            spec.check_state(s)
            i = g.index(s)
            stay[i] = int(a)
            seen[i] = True
        missing = g.decision & ~seen
        if missing.any():
            s = g.state(int(np.flatnonzero(missing)[0]))
            raise ValueError(f"profile is not total: no action for state {state_key(s)}")
        return cls(spec, stay)

    def action(self, s: State) -> int:
        a = int(self.choice[self.game.index(s)])
        if a < 0:
            raise KeyError(f"no decision at {s!r}")
        return a

    def strategy(self, token: int) -> Positional:
        g = self.game
        rows = np.flatnonzero(g.decision & (g.mover == token))
        return Positional({g.state(int(i)): int(self.choice[i]) for i in rows}, name=f"token {token}")

    def strategies(self) -> list[Positional]:
        return [self.strategy(k) for k in range(1, self.spec.tokens + 1)]

    def with_player(self, player: int, other: "PositionalProfile") -> "PositionalProfile":
        """This profile with ``player``'s decisions taken from ``other``."""
        g = self.game
        mask = g.decision & (g.mover_player == player)
        return PositionalProfile(self.spec, np.where(mask, other.choice, self.choice))

    def to_json(self) -> dict[str, int]:
        g = self.game
        return {state_key(g.state(int(i))): int(self.choice[i]) for i in np.flatnonzero(g.decision)}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PositionalProfile) and self.spec == other.spec and np.array_equal(self.choice, other.choice)

    def __hash__(self) -> int:
        return hash(self.choice.tobytes())


@dataclass
class ValueTable:
    """Per-player values at every compiled state."""

    game: CompiledGame
    u: np.ndarray  # (n_states, players)

    def value(self, s: AnyState, player: int) -> float:
        return float(self.u[self.game.index(s), player - 1])

    def vector(self, s: AnyState) -> tuple[float, ...]:
        return tuple(float(x) for x in self.u[self.game.index(s)])

    def to_json(self) -> dict[str, list[float]]:
        g = self.game
        return {state_key(g.state(i)): [float(x) for x in self.u[i]] for i in range(g.n_states)}


def _capture_reached(g: CompiledGame, nxt: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Turns to, and index of, the first capture state along the functional graph ``nxt``."""
    n = g.n_states
    times = np.full(n, -1, dtype=np.int64)
    target = np.full(n, -1, dtype=np.int64)
    order = np.argsort(nxt, kind="stable")
    starts = np.searchsorted(nxt[order], np.arange(n + 1))
    queue = deque()
    for i in np.flatnonzero(g.capture):
        times[i] = 0
        target[i] = i
        queue.append(int(i))
    while queue:
        j = queue.popleft()
        for i in order[starts[j]:starts[j + 1]]:
            if times[i] < 0 and not g.capture[i]:
                times[i] = times[j] + 1
                target[i] = target[j]
                queue.append(int(i))
    return times, target


def evaluate_profile(spec: GameSpec, profile: PositionalProfile) -> ValueTable:
    """Exact discounted values of a positional profile."""
    g = profile.game
    times, target = _capture_reached(g, profile.next)
    u = np.zeros((g.n_states, spec.players))
    hit = times >= 0
    u[hit] = (spec.gamma ** times[hit].astype(float))[:, None] * g.player_payoff[target[hit]]
    return ValueTable(g, u + 0.0)


def profile_capture_times(profile: PositionalProfile) -> np.ndarray:
    """Capture time per state under the profile, ``inf`` for cycles."""
    times, _ = _capture_reached(profile.game, profile.next)
    return np.where(times >= 0, times.astype(float), math.inf)


# -- certification ------------------------------------------------------------------


@dataclass
class Deviation:
    state: State
    player: int
    prescribed: int
    deviation: int
    prescribed_value: float
    deviation_value: float

    @property
    def gain(self) -> float:
        return self.deviation_value - self.prescribed_value

    def to_json(self) -> dict:
        return {
            "state": state_key(self.state),
            "player": self.player,
            "prescribed": self.prescribed,
            "deviation": self.deviation,
            "prescribed_value": self.prescribed_value,
            "deviation_value": self.deviation_value,
            "gain": self.gain,
        }


@dataclass
class Certificate:
    passed: bool
    consistency_residual: float
    max_gain: float
    inconsistent: list[tuple[AnyState, float]] = field(default_factory=list)
    violations: list[Deviation] = field(default_factory=list)

    def violations_by(self, player: int) -> list[Deviation]:
        return [d for d in self.violations if d.player == player]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "consistency_residual": self.consistency_residual,
            "max_gain": self.max_gain,
            "inconsistent_states": [state_key(s) for s, _ in self.inconsistent],
            "violations": [d.to_json() for d in self.violations],
        }


def certify_ne(
    spec: GameSpec,
    profile: PositionalProfile,
    u: ValueTable | None = None,
    tol: float = 1e-9,
) -> Certificate:
    """One-shot deviation check of a positional profile.

    Passes iff ``u`` satisfies the one-step consistency equation along the
    profile at every state and no mover gains more than ``tol`` by a single
    different move followed by the profile. For positional profiles in
    discounted games this is equivalent to being an equilibrium from every
    initial state. When ``u`` is omitted the profile is evaluated exactly.
    """
    g = profile.game
    u = evaluate_profile(spec, profile) if u is None else u
    U = u.u
    gamma = spec.gamma
    rhs = g.player_payoff + gamma * U[profile.next]
    rhs[g.terminal] = 0.0
    gap = np.abs(rhs - U).max(axis=1)
    residual = float(gap.max())
    inconsistent = [(g.state(int(i)), float(gap[i])) for i in np.flatnonzero(gap >= tol)]

    violations: list[Deviation] = []
    max_gain = 0.0
    rows = np.flatnonzero(g.decision)
    p = g.mover_player[rows] - 1
    cont = U[np.where(g.valid[rows], g.succ[rows], 0), p[:, None]]
    cont = np.where(g.valid[rows], cont, -np.inf)
    cur = U[profile.next[rows], p]
    best_col = np.argmax(cont, axis=1)
    best = cont[np.arange(len(rows)), best_col]
    gains = gamma * (best - cur)
    if len(gains):
        max_gain = float(max(0.0, gains.max()))
    for r in np.flatnonzero(gains > tol):
        i = int(rows[r])
        q = float(g.player_payoff[i, p[r]])
        violations.append(
            Deviation(
                g.state(i),
                int(p[r]) + 1,
                int(profile.choice[i]),
                int(g.action[i, best_col[r]]),
                q + gamma * float(cur[r]),
                q + gamma * float(best[r]),
            )
        )
    passed = residual < tol and not violations
    return Certificate(passed, residual, max_gain, inconsistent, violations)


# -- solving ---------------------------------------------------------------------------


def _rank_table(spec: GameSpec, priority: Sequence[int] | None) -> np.ndarray:
    """rank[v] for tie-breaking; lower rank wins. Index 0 is unused."""
    v = spec.graph.vertex_count
    rank = np.zeros(v + 1, dtype=np.int64)
    order = list(range(1, v + 1)) if priority is None else list(priority)
    if sorted(order) != list(range(1, v + 1)):
        raise ValueError("priority must be a permutation of the vertices")
    for r, x in enumerate(order):
        rank[x] = r
    return rank


def _greedy(
    g: CompiledGame,
    U: np.ndarray,
    rank: np.ndarray,
    rows: np.ndarray,
    keep: np.ndarray | None = None,
) -> np.ndarray:
    """Mover's best vertex at ``rows``; ties go to ``keep`` when optimal, else to lowest rank."""
    p = g.mover_player[rows] - 1
    valid = g.valid[rows]
    cont = np.where(valid, U[np.where(valid, g.succ[rows], 0), p[:, None]], -np.inf)
    best = cont.max(axis=1)
    ok = cont >= best[:, None] - _TIE_EPS
    acts = g.action[rows]
    r = np.where(ok, rank[np.clip(acts, 0, None)], np.iinfo(np.int64).max)
    pick = acts[np.arange(len(rows)), np.argmin(r, axis=1)]
    if keep is not None:
        kept = keep[rows]
        keep_ok = (ok & (acts == kept[:, None])).any(axis=1)
        pick = np.where(keep_ok, kept, pick)
    return pick


def solve_positional_ne(
    spec: GameSpec,
    tol: float = 1e-9,
    max_iters: int = 10_000,
    priority: Sequence[int] | None = None,
) -> tuple[PositionalProfile, ValueTable]:
    """Positional equilibrium by synchronous sweeps of the coupled system.

    Each sweep lets the mover pick its best continuation under the current
    values (ties by ``priority``, lowest vertex first by default) and
    propagates every player's value one step along that choice. If the
    sweeps have not settled after as many rounds as there are states, they
    continue with values averaged over consecutive iterates. The result is
    evaluated exactly and certified before it is returned.

    Raises:
        NonConvergenceError: no certified profile within ``max_iters`` sweeps.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    g = compile_game(spec)
    rank = _rank_table(spec, priority)
    gamma = spec.gamma
    rows = np.flatnonzero(g.decision)
    threshold = tol * (1.0 - gamma) / (2.0 * gamma)
    undamped = g.n_states + 2
    q = g.player_payoff
    U = np.zeros((g.n_states, spec.players))
    base_next = g.succ[:, 0].copy()
    residual = math.inf
    choice = -np.ones(g.n_states, dtype=np.int64)
    for it in range(1, max_iters + 1):
        choice = -np.ones(g.n_states, dtype=np.int64)
        choice[rows] = _greedy(g, U, rank, rows)
        nxt = base_next.copy()
        col = np.argmax(g.action[rows] == choice[rows][:, None], axis=1)
        nxt[rows] = g.succ[rows, col]
        new = q + gamma * U[nxt]
        new[g.terminal] = 0.0
        if it > undamped:
            new = 0.5 * (new + U)
        residual = float(np.abs(new - U).max())
        U = new
        if residual < threshold:
            break
    else:
        raise NonConvergenceError(f"equilibrium sweeps did not settle in {max_iters} iterations", residual)

    profile = PositionalProfile(spec, choice)
    values = evaluate_profile(spec, profile)
    for _ in range(g.n_states + 1):
        refined = -np.ones(g.n_states, dtype=np.int64)
        refined[rows] = _greedy(g, values.u, rank, rows, keep=profile.choice)
        if np.array_equal(refined, profile.choice):
            break
        profile = PositionalProfile(spec, refined)
        values = evaluate_profile(spec, profile)
    cert = certify_ne(spec, profile, values, tol)
    if not cert.passed:
        raise NonConvergenceError("equilibrium candidate failed certification", max(cert.max_gain, cert.consistency_residual))
    return profile, values


def positional_best_response(
    spec: GameSpec,
    profile: PositionalProfile,
    player: int,
    priority: Sequence[int] | None = None,
) -> PositionalProfile:
    """Replace ``player``'s decisions by a positional best response to the rest.

    Current decisions are kept wherever they are already optimal.
    """
    g = profile.game
    rank = _rank_table(spec, priority)
    gamma = spec.gamma
    mine = np.flatnonzero(g.decision & (g.mover_player == player))
    p = player - 1
    base = profile.next.copy()
    q = g.player_payoff[:, p]
    v = np.zeros(g.n_states)
    for _ in range(g.n_states + 2):
        cont = np.where(g.valid[mine], v[np.where(g.valid[mine], g.succ[mine], 0)], -np.inf)
        nxt_val = v[base]
        nxt_val[mine] = cont.max(axis=1)
        new = q + gamma * nxt_val
        new[g.terminal] = 0.0
        if np.array_equal(new, v):
            break
        v = new
    U = np.zeros((g.n_states, spec.players))
    U[:, p] = v
    choice = profile.choice.copy()
    choice[mine] = _greedy(g, U, rank, mine, keep=profile.choice)
    return PositionalProfile(spec, choice)


def best_response_dynamics(
    spec: GameSpec,
    start: PositionalProfile,
    max_rounds: int = 200,
    priority: Sequence[int] | None = None,
) -> PositionalProfile | None:
    """Round-robin positional best responses until no player changes; ``None`` if that never happens."""
    profile = start
    for _ in range(max_rounds):
        changed = False
        for n in range(1, spec.players + 1):
            nxt = positional_best_response(spec, profile, n, priority)
            if nxt != profile:
                profile, changed = nxt, True
        if not changed:
            return profile
    return None


# -- best response against finite-memory opponents -------------------------------------


@dataclass
class BestResponse:
    """Optimal deviation of ``player`` against fixed opponents.

    ``policy`` maps product nodes ``(state, opponent modes)`` where the
    player moves to the chosen vertex.
    """

    spec: GameSpec
    player: int
    value: float
    start: tuple
    policy: dict[tuple, int]
    opponents: tuple
    node_count: int

    def as_automata(self) -> dict[int, Automaton]:
        """One automaton per token of ``player`` that replays the optimal policy."""
        opps = self.opponents
        policy = self.policy

        def act(mode, s):
            return policy[(s, mode)]

        def update(mode, s, a):
            return tuple(None if o is None else o.update(m, s, a) for o, m in zip(opps, mode))

        return {
            k: Automaton(self.start[1], act, update, name=f"best response of player {self.player}")
            for k in self.spec.tokens_of(self.player)
        }

    def profile_with(self, opponents: Sequence[Strategy | None]) -> list[Strategy]:
        autos = self.as_automata()
        return [autos.get(k + 1, o) for k, o in enumerate(opponents)]


def best_response(
    spec: GameSpec,
    opponents: Sequence[Strategy | None],
    player: int,
    s0: AnyState,
    cap: int | None = None,
) -> BestResponse:
    """Exact best response of ``player`` from ``s0``.

    ``opponents`` has one entry per token; entries for the player's own
    tokens are ignored. The reachable product of game states and opponent
    modes is a deterministic single-agent discounted problem and is solved
    exactly, so the value covers every deviation, history-dependent or not.

    Raises:
        StateCapError: the reachable product space exceeds ``cap``.
    """
    if len(opponents) != spec.tokens:
        raise ValueError(f"need one entry per token ({spec.tokens}), got {len(opponents)}")
    if not 1 <= player <= spec.players:
        raise ValueError(f"invalid player {player!r}")
    spec.check_state(s0)
    cap = state_cap() if cap is None else cap
    mine = set(spec.tokens_of(player))
    opps = tuple(None if k + 1 in mine else o for k, o in enumerate(opponents))
    if any(o is None for k, o in enumerate(opps) if k + 1 not in mine):
        raise ValueError("every opponent token needs a strategy")

    def step_modes(modes, s, a):
        return tuple(None if o is None else o.update(m, s, a) for o, m in zip(opps, modes))

    start = (s0, tuple(None if o is None else o.initial_mode for o in opps))
    index: dict[tuple, int] = {start: 0}
    nodes = [start]
    children: list[list[tuple[Any, int]]] = []
    reward: list[float] = []
    chooser: list[bool] = []
    k = 0
    while k < len(nodes):
        s, modes = nodes[k]
        k += 1
        reward.append(player_payoffs(spec, s)[player - 1])
        if s is TERMINAL:
            options = [(NULL_MOVE, TERMINAL)]
            decide = False
        elif is_capture(spec, s):
            options = [(NULL_MOVE, TERMINAL)]
            decide = False
        elif s.mover in mine:
            options = [(a, transition(spec, s, a)) for a in action_set(spec, s, s.mover)]
            decide = True
        else:
            a = opps[s.mover - 1].act(modes[s.mover - 1], s)
            if a not in action_set(spec, s, s.mover):
                raise IllegalActionError(f"token {s.mover} chose {a!r} at {s!r}; legal: {action_set(spec, s, s.mover)}")
            a = int(a)
            options = [(a, transition(spec, s, a))]
            decide = False
        chooser.append(decide)
        kids = []
        for a, nxt in options:
            node = (nxt, step_modes(modes, s, a) if s is not TERMINAL else modes)
            j = index.get(node)
            if j is None:
                if len(nodes) >= cap:
                    raise StateCapError(f"best-response product space exceeds the cap of {cap} nodes")
                j = index[node] = len(nodes)
                nodes.append(node)
            kids.append((a, j))
        children.append(kids)

    n = len(nodes)
    ptr = np.zeros(n + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(c) for c in children])
    dst = np.array([j for c in children for _, j in c], dtype=np.int64)
    r = np.array(reward)
    gamma = spec.gamma
    v = np.zeros(n)
    for _ in range(n + 2):
        new = r + gamma * np.maximum.reduceat(v[dst], ptr[:-1])
        if np.array_equal(new, v):
            break
        v = new
    policy: dict[tuple, int] = {}
    for i in range(n):
        if chooser[i]:
            best_a, best_v = None, -math.inf
            for a, j in children[i]:
                if v[j] > best_v + _TIE_EPS:
                    best_a, best_v = a, v[j]
            policy[nodes[i]] = int(best_a)
    return BestResponse(spec, player, float(v[0]) + 0.0, start, policy, opps, n)
