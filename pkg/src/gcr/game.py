"""Game states, action sets, transitions and turn payoffs.

A state is a tuple of token positions plus the token that moves next, or
the absorbing :data:`TERMINAL` state. Tokens and players are 1-indexed.
Every capture state has a single null move that leads to ``TERMINAL``.

Payoff schemes are small frozen dataclasses. ``GameSpec`` binds a graph,
token count, discount factor, scheme and the token-to-player controller
map. :func:`compile_game` lowers a spec to dense numpy tables that the
solvers iterate over.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, NamedTuple, Union

import numpy as np

from .graph import Graph

DEFAULT_STATE_CAP = 5_000_000


class StateCapError(RuntimeError):
    """The state space is larger than the configured safety cap."""


class IllegalActionError(ValueError):
    """An action outside the acting token's action set."""


def state_cap() -> int:
    """Safety cap on state counts; ``GCR_STATE_CAP`` overrides the default."""
    raw = os.environ.get("GCR_STATE_CAP")
    return int(raw) if raw else DEFAULT_STATE_CAP


# -- states and actions ----------------------------------------------------------


class State(NamedTuple):
    positions: tuple[int, ...]
    mover: int

    def __repr__(self) -> str:
        return f"State({self.positions}, mover={self.mover})"


class _Terminal:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TERMINAL"

    def __reduce__(self):
        return (_Terminal, ())


class _NullMove:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NULL_MOVE"

    def __reduce__(self):
        return (_NullMove, ())


TERMINAL = _Terminal()
NULL_MOVE = _NullMove()

AnyState = Union[State, _Terminal]


# -- payoff schemes ---------------------------------------------------------------


@dataclass(frozen=True)
class TwoPlayer:
    """Classic cop (token 1) and robber (token 2)."""

    def validate(self, tokens: int) -> None:
        if tokens != 2:
            raise ValueError(f"TwoPlayer scheme requires 2 tokens, got {tokens}")

    def captures(self, pos: tuple[int, ...]) -> frozenset[int]:
        return frozenset({1}) if pos[0] == pos[1] else frozenset()

    def payoffs(self, pos: tuple[int, ...]) -> tuple[float, ...]:
        q = 1.0 if pos[0] == pos[1] else 0.0
        return (q, -q)


@dataclass(frozen=True)
class ChainN:
    """Token n chases token n+1.

    A token earns +1 when it captures its successor without being
    captured by its predecessor, and -1 when it is captured by a
    predecessor that is itself not captured.
    """

    def validate(self, tokens: int) -> None:
        if tokens < 2:
            raise ValueError(f"ChainN scheme requires at least 2 tokens, got {tokens}")

    def captures(self, pos: tuple[int, ...]) -> frozenset[int]:
        return frozenset(n for n in range(1, len(pos)) if pos[n - 1] == pos[n])

    def payoffs(self, pos: tuple[int, ...]) -> tuple[float, ...]:
        caps = self.captures(pos)

        def exclusive(k: int) -> bool:
            # s in S~k minus S~(k-1); S~0 and S~N are empty
            return k in caps and (k - 1) not in caps

        out = []
        for n in range(1, len(pos) + 1):
            if exclusive(n - 1):
                out.append(-1.0)
            elif exclusive(n):
                out.append(1.0)
            else:
                out.append(0.0)
        return tuple(out)


@dataclass(frozen=True)
class Generalized:
    """Arbitrary capture relation: ``targets[n-1]`` are the tokens n can capture.

    ``pursuers`` must be the converse relation. When a token sits with both
    a target and a pursuer, ``penalty_dominates`` picks -1 (default) over +1.
    """

    targets: tuple[frozenset[int], ...]
    pursuers: tuple[frozenset[int], ...]
    penalty_dominates: bool = True

    @classmethod
    def from_targets(cls, targets, penalty_dominates: bool = True) -> "Generalized":
        tg = tuple(frozenset(t) for t in targets)
        pu = tuple(frozenset(m for m in range(1, len(tg) + 1) if n in tg[m - 1])
                   for n in range(1, len(tg) + 1))
        return cls(tg, pu, penalty_dominates)

    @classmethod
    def cyclic(cls) -> "Generalized":
        """Three tokens: 1 chases 2, 2 chases 3, 3 chases 1."""
        return cls.from_targets([{2}, {3}, {1}])

    def validate(self, tokens: int) -> None:
        if len(self.targets) != tokens or len(self.pursuers) != tokens:
            raise ValueError(f"Generalized scheme describes {len(self.targets)} tokens, spec has {tokens}")
        for n in range(1, tokens + 1):
            a, b = self.targets[n - 1], self.pursuers[n - 1]
            if n in a or n in b:
                raise ValueError(f"token {n} may not target or pursue itself")
            for m in a | b:
                if not 1 <= m <= tokens:
                    raise ValueError(f"token {n} references unknown token {m}")
            for m in a:
                if n not in self.pursuers[m - 1]:
                    raise ValueError(f"token {m} is a target of {n} but {n} is not among its pursuers")
            for m in b:
                if n not in self.targets[m - 1]:
                    raise ValueError(f"token {m} is a pursuer of {n} but {n} is not among its targets")

    def captures(self, pos: tuple[int, ...]) -> frozenset[int]:
        return frozenset(
            n for n in range(1, len(pos) + 1)
            if any(pos[n - 1] == pos[m - 1] for m in self.targets[n - 1])
        )

    def payoffs(self, pos: tuple[int, ...]) -> tuple[float, ...]:
        out = []
        for n in range(1, len(pos) + 1):
            x = pos[n - 1]
            hit = any(x == pos[m - 1] for m in self.targets[n - 1])
            hurt = any(x == pos[m - 1] for m in self.pursuers[n - 1])
            if hit and hurt:
                out.append(-1.0 if self.penalty_dominates else 1.0)
            elif hurt:
                out.append(-1.0)
            elif hit:
                out.append(1.0)
            else:
                out.append(0.0)
        return tuple(out)


PayoffScheme = Union[TwoPlayer, ChainN, Generalized]


# -- game specification ------------------------------------------------------------


@dataclass(frozen=True)
class GameSpec:
    """A pursuit game on ``graph`` with ``tokens`` tokens.

    ``controllers[k-1]`` is the player moving token k (identity by default).
    A player's turn payoff is the sum over its tokens, except when ``focus``
    is set: then the game is the zero-sum pair (q^focus, -q^focus) between
    player 1 and player 2.
    """

    graph: Graph
    tokens: int
    gamma: float
    scheme: PayoffScheme = field(default_factory=ChainN)
    controllers: tuple[int, ...] = ()
    focus: int | None = None

    def __post_init__(self):
        if not isinstance(self.tokens, int) or self.tokens < 2:
            raise ValueError(f"token count must be an integer >= 2, got {self.tokens!r}")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie strictly inside (0, 1), got {self.gamma!r}")
        self.scheme.validate(self.tokens)
        ctrl = tuple(self.controllers) or tuple(range(1, self.tokens + 1))
        if len(ctrl) != self.tokens:
            raise ValueError(f"controllers must map all {self.tokens} tokens, got {len(ctrl)}")
        players = max(ctrl)
        if min(ctrl) < 1 or set(ctrl) != set(range(1, players + 1)):
            raise ValueError(f"every player 1..{players} must control at least one token")
        object.__setattr__(self, "controllers", ctrl)
        if self.focus is not None:
            if players != 2:
                raise ValueError("a zero-sum focus requires exactly two players")
            if not 1 <= self.focus <= self.tokens:
                raise ValueError(f"focus token {self.focus} out of range")

    @property
    def players(self) -> int:
        return max(self.controllers)

    def tokens_of(self, player: int) -> tuple[int, ...]:
        return tuple(k for k in range(1, self.tokens + 1) if self.controllers[k - 1] == player)

    @classmethod
    def two_player(cls, graph: Graph, gamma: float) -> "GameSpec":
        return cls(graph, 2, gamma, TwoPlayer())

    @classmethod
    def chain(cls, graph: Graph, tokens: int, gamma: float) -> "GameSpec":
        return cls(graph, tokens, gamma, ChainN())

    @classmethod
    def cyclic(cls, graph: Graph, gamma: float) -> "GameSpec":
        return cls(graph, 3, gamma, Generalized.cyclic())

    def check_state(self, s: AnyState) -> None:
        if s is TERMINAL:
            return
        if not isinstance(s, State):
            raise TypeError(f"not a state: {s!r}")
        if len(s.positions) != self.tokens:
            raise ValueError(f"state has {len(s.positions)} positions, game has {self.tokens} tokens")
        for x in s.positions:
            if not isinstance(x, (int, np.integer)) or not 1 <= x <= self.graph.vertex_count:
                raise ValueError(f"invalid vertex {x!r} in state {s!r}")
        if not 1 <= s.mover <= self.tokens:
            raise ValueError(f"invalid mover {s.mover!r}")


# -- state machine -------------------------------------------------------------------


def capture_memberships(spec: GameSpec, s: State) -> frozenset[int]:
    """Indices n with s in the n-capture set; empty iff s is a non-capture state."""
    if s is TERMINAL:
        raise ValueError("the terminal state has no positions")
    return spec.scheme.captures(s.positions)


def is_capture(spec: GameSpec, s: AnyState) -> bool:
    return s is not TERMINAL and bool(spec.scheme.captures(s.positions))


def action_set(spec: GameSpec, s: AnyState, token: int) -> tuple:
    if not 1 <= token <= spec.tokens:
        raise ValueError(f"invalid token {token!r}")
    if s is TERMINAL or is_capture(spec, s):
        return (NULL_MOVE,)
    x = s.positions[token - 1]
    if token == s.mover:
        return spec.graph.closed_neighborhood(x)
    return (x,)


def transition(spec: GameSpec, s: AnyState, a) -> AnyState:
    if s is TERMINAL or is_capture(spec, s):
        if a is not NULL_MOVE:
            raise IllegalActionError(f"only the null move is legal at {s!r}, got {a!r}")
        return TERMINAL
    legal = action_set(spec, s, s.mover)
    if a not in legal:
        raise IllegalActionError(f"token {s.mover} cannot move to {a!r} from {s!r}; legal: {legal}")
    pos = list(s.positions)
    pos[s.mover - 1] = int(a)
    return State(tuple(pos), s.mover % spec.tokens + 1)


def turn_payoffs(spec: GameSpec, s: AnyState) -> tuple[float, ...]:
    """Per-token turn payoff vector."""
    if s is TERMINAL:
        return (0.0,) * spec.tokens
    return spec.scheme.payoffs(s.positions)


def player_payoffs(spec: GameSpec, s: AnyState) -> tuple[float, ...]:
    q = turn_payoffs(spec, s)
    if spec.focus is not None:
        f = q[spec.focus - 1]
        return (f, -f)
    out = [0.0] * spec.players
    for k, p in enumerate(spec.controllers):
        out[p - 1] += q[k]
    return tuple(out)


def state_count(spec: GameSpec) -> int:
    """Nonterminal state count |V|^N * N."""
    return spec.graph.vertex_count ** spec.tokens * spec.tokens


def enumerate_states(spec: GameSpec, cap: int | None = None) -> Iterator[AnyState]:
    """All nonterminal states in lexicographic order, then ``TERMINAL``."""
    cap = state_cap() if cap is None else cap
    count = state_count(spec)
    if count > cap:
        raise StateCapError(f"{count} states exceed the safety cap of {cap}")
    n, v = spec.tokens, spec.graph.vertex_count
    for idx in range(v ** n):
        pos = _unrank(idx, v, n)
        for mover in range(1, n + 1):
            yield State(pos, mover)
    yield TERMINAL


def _unrank(idx: int, v: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for k in range(n - 1, -1, -1):
        idx, r = divmod(idx, v)
        out[k] = r + 1
    return tuple(out)


# -- dense tables ------------------------------------------------------------------


class CompiledGame:
    """Dense numpy view of a game.

    State ``i < terminal`` has positions ``positions[i]`` and mover
    ``mover[i]``; index ``terminal`` is the absorbing state. ``succ`` and
    ``action`` list the mover's options (sorted by vertex, ``-1`` padded);
    capture states and the terminal state carry one option, the null move,
    encoded as action ``0``.
    """

    def __init__(self, spec: GameSpec, cap: int | None = None):
        cap = state_cap() if cap is None else cap
        count = state_count(spec)
        if count > cap:
            raise StateCapError(f"{count} states exceed the safety cap of {cap}")
        g = spec.graph
        v, n = g.vertex_count, spec.tokens
        self.spec = spec
        self.n_vertices = v
        self.n_tokens = n
        self.terminal = count
        self.n_states = count + 1

        n_pos = v ** n
        digits = np.array([_unrank(i, v, n) for i in range(n_pos)], dtype=np.int64).reshape(n_pos, n)
        self.positions = np.repeat(digits, n, axis=0)
        mover = np.tile(np.arange(1, n + 1), n_pos)
        self.mover = np.append(mover, 0)

        pos_payoff = np.array([spec.scheme.payoffs(tuple(map(int, row))) for row in digits], dtype=float)
        pos_capture = np.array([bool(spec.scheme.captures(tuple(map(int, row)))) for row in digits])
        token_payoff = np.vstack([np.repeat(pos_payoff, n, axis=0), np.zeros((1, n))])
        self.token_payoff = token_payoff
        self.capture = np.append(np.repeat(pos_capture, n), False)
        self.player_payoff = self._player_payoffs(token_payoff)

        ctrl = np.array((0,) + spec.controllers)
        self.mover_player = ctrl[self.mover]
        self.mover_player[self.capture] = 0

        # neighbor table, closed neighborhoods sorted ascending
        width = max(len(g.closed_neighborhood(x)) for x in g.vertices)
        nbr = -np.ones((v + 1, width), dtype=np.int64)
        for x in g.vertices:
            cn = g.closed_neighborhood(x)
            nbr[x, : len(cn)] = cn
        self.width = width

        idx = np.arange(count)
        pos_idx = idx // n
        tok = self.mover[:-1] - 1
        place = v ** (n - 1 - tok)  # weight of the mover's digit
        cur = self.positions[idx, tok]
        cand = nbr[cur]  # (count, width)
        valid = cand > 0
        next_pos = pos_idx[:, None] + (cand - cur[:, None]) * place[:, None]
        next_mover = (tok + 1) % n
        succ = np.where(valid, next_pos * n + next_mover[:, None], -1)
        action = np.where(valid, cand, -1)

        cap_rows = self.capture[:-1]
        succ[cap_rows] = -1
        action[cap_rows] = -1
        succ[cap_rows, 0] = self.terminal
        action[cap_rows, 0] = 0
        term_row = -np.ones((1, width), dtype=np.int64)
        term_row[0, 0] = self.terminal
        act_row = -np.ones((1, width), dtype=np.int64)
        act_row[0, 0] = 0
        self.succ = np.vstack([succ, term_row])
        self.action = np.vstack([action, act_row])
        self.valid = self.succ >= 0
        self.decision = ~self.capture.copy()
        self.decision[-1] = False

    def _player_payoffs(self, token_payoff: np.ndarray) -> np.ndarray:
        spec = self.spec
        if spec.focus is not None:
            f = token_payoff[:, spec.focus - 1]
            return np.stack([f, -f], axis=1)
        out = np.zeros((token_payoff.shape[0], spec.players))
        for k, p in enumerate(spec.controllers):
            out[:, p - 1] += token_payoff[:, k]
        return out

    def index(self, s: AnyState) -> int:
        if s is TERMINAL:
            return self.terminal
        v, n = self.n_vertices, self.n_tokens
        pos_idx = 0
        for x in s.positions:
            pos_idx = pos_idx * v + (int(x) - 1)
        return pos_idx * n + (s.mover - 1)

    def state(self, i: int) -> AnyState:
        if i == self.terminal:
            return TERMINAL
        return State(tuple(int(x) for x in self.positions[i]), int(self.mover[i]))

    def states(self) -> list[AnyState]:
        return [self.state(i) for i in range(self.n_states)]

    def next_index(self, i: int, vertex: int) -> int:
        row = self.action[i]
        j = int(np.flatnonzero(row == vertex)[0])
        return int(self.succ[i, j])


@lru_cache(maxsize=64)
def _compile_cached(spec: GameSpec) -> CompiledGame:
    return CompiledGame(spec)


def compile_game(spec: GameSpec) -> CompiledGame:
    """Dense tables for ``spec``; cached per spec."""
    if state_count(spec) > state_cap():
        raise StateCapError(f"{state_count(spec)} states exceed the safety cap of {state_cap()}")
    return _compile_cached(spec)


# -- serialization -------------------------------------------------------------------


def state_key(s: AnyState) -> str:
    """Compact key ``"x1,...,xN;mover"`` or ``"terminal"``."""
    if s is TERMINAL:
        return "terminal"
    return ",".join(map(str, s.positions)) + f";{s.mover}"


def parse_state_key(key: str) -> AnyState:
    key = key.strip()
    if key == "terminal":
        return TERMINAL
    try:
        pos, mover = key.split(";")
        return State(tuple(int(x) for x in pos.split(",")), int(mover))
    except ValueError:
        raise ValueError(f"malformed state key {key!r}, expected 'x1,...,xN;mover'") from None


def state_to_json(s: AnyState):
    if s is TERMINAL:
        return "terminal"
    return {"positions": list(s.positions), "mover": s.mover}


def state_from_json(obj) -> AnyState:
    if obj == "terminal":
        return TERMINAL
    if isinstance(obj, str):
        return parse_state_key(obj)
    try:
        return State(tuple(int(x) for x in obj["positions"]), int(obj["mover"]))
    except (KeyError, TypeError, ValueError):
        raise ValueError(f"malformed state {obj!r}") from None


def action_to_json(a):
    return "null" if a is NULL_MOVE else int(a)
