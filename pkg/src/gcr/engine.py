"""Deterministic play-out of strategy profiles.

A profile holds one strategy per token. Every strategy exposes the same
three members: ``initial_mode``, ``act(mode, state)`` and
``update(mode, state, action)``. Positional strategies ignore their mode.
After each turn every strategy observes the pre-move state and the action
played, so automata can react to moves of other tokens.

Plays run until the terminal state or until a (state, modes) pair repeats.
A repeat proves the play is infinite, since every strategy is
deterministic, so the capture time is reported as infinity.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Mapping, Sequence

from .game import (
    NULL_MOVE,
    TERMINAL,
    AnyState,
    GameSpec,
    IllegalActionError,
    State,
    action_set,
    action_to_json,
    is_capture,
    player_payoffs,
    state_key,
    state_to_json,
    transition,
)

INF = math.inf


class Positional:
    """A memoryless strategy given by a state-to-vertex table or a rule.

    ``rule`` is either a mapping from :class:`State` to vertex or a
    callable ``rule(state) -> vertex``.
    """

    initial_mode = None

    def __init__(self, rule: Mapping[State, int] | Callable[[State], int], name: str = ""):
        self.rule = rule
        self.name = name

    def act(self, mode, s: State) -> int:
        if callable(self.rule):
            return self.rule(s)
        try:
            return self.rule[s]
        except KeyError:
            raise KeyError(f"positional table {self.name or ''} has no entry for {s!r}") from None

    def update(self, mode, s: State, a) -> None:
        return None

    def __repr__(self) -> str:
        return f"Positional({self.name or type(self.rule).__name__})"


class Automaton:
    """A finite-memory strategy.

    Args:
        initial_mode: Mode at the start of play. Must be hashable.
        act: ``act(mode, state) -> vertex`` when this token moves.
        update: ``update(mode, state, action) -> mode``, called after every
            turn with the pre-move state and the action taken by the mover.
    """

    def __init__(
        self,
        initial_mode: Hashable,
        act: Callable[[Any, State], int],
        update: Callable[[Any, AnyState, Any], Hashable],
        name: str = "",
    ):
        self.initial_mode = initial_mode
        self._act = act
        self._update = update
        self.name = name

    def act(self, mode, s: State) -> int:
        return self._act(mode, s)

    def update(self, mode, s: AnyState, a):
        return self._update(mode, s, a)

    def __repr__(self) -> str:
        return f"Automaton({self.name or self.initial_mode!r})"


Strategy = Positional | Automaton


@dataclass
class History:
    states: list[AnyState]
    actions: list[Any]
    capture_time: int | float
    truncated: bool = False
    cycle_start: int | None = None
    modes: list[tuple] = field(default_factory=list)

    @property
    def is_infinite(self) -> bool:
        return self.capture_time == INF

    def to_json(self) -> dict:
        return {
            "states": [state_to_json(s) for s in self.states],
            "actions": [action_to_json(a) for a in self.actions],
            "capture_time": "infinity" if self.is_infinite else self.capture_time,
            "truncated": self.truncated,
            "cycle_start": self.cycle_start,
        }

    def to_dot(self, name: str = "history") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        seen: dict[AnyState, int] = {}
        for s in self.states:
            if s not in seen:
                seen[s] = len(seen)
                shape = "doublecircle" if s is TERMINAL else "box"
                lines.append(f'  n{seen[s]} [label="{state_key(s)}", shape={shape}];')
        for t, a in enumerate(self.actions):
            u, v = seen[self.states[t]], seen[self.states[t + 1]]
            label = "λ" if a is NULL_MOVE else str(a)
            lines.append(f'  n{u} -> n{v} [label="t={t}: {label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _profile_check(spec: GameSpec, profile: Sequence[Strategy]) -> None:
    if len(profile) != spec.tokens:
        raise ValueError(f"profile has {len(profile)} strategies, game has {spec.tokens} tokens")


def simulate(
    spec: GameSpec,
    profile: Sequence[Strategy],
    s0: AnyState,
    max_steps: int | None = None,
) -> History:
    """Play ``profile`` from ``s0``.

    Raises:
        IllegalActionError: a strategy chose a move outside its action set.
        RuntimeError: ``max_steps`` turns elapsed without termination or a
            repeated configuration (only possible with unbounded mode sets).
    """
    _profile_check(spec, profile)
    spec.check_state(s0)
    modes = tuple(p.initial_mode for p in profile)
    states: list[AnyState] = [s0]
    actions: list[Any] = []
    mode_log: list[tuple] = [modes]
    seen: dict[tuple, int] = {(s0, modes): 0}
    capture_time: int | float = INF
    s = s0
    t = 0
    while True:
        if s is TERMINAL:
            return History(states, actions, capture_time, False, None, mode_log)
        if is_capture(spec, s):
            if capture_time == INF:
                capture_time = t
            a = NULL_MOVE
        else:
            k = s.mover
            a = profile[k - 1].act(modes[k - 1], s)
            if a not in action_set(spec, s, k):
                raise IllegalActionError(
                    f"token {k} chose {a!r} at {s!r}; legal: {action_set(spec, s, k)}"
                )
            a = int(a)
        nxt = transition(spec, s, a)
        modes = tuple(p.update(m, s, a) for p, m in zip(profile, modes))
        actions.append(a)
        states.append(nxt)
        mode_log.append(modes)
        t += 1
        s = nxt
        key = (s, modes)
        if key in seen and s is not TERMINAL:
            return History(states, actions, INF, True, seen[key], mode_log)
        seen[key] = t
        if max_steps is not None and t >= max_steps:
            raise RuntimeError(f"no termination or repeat within {max_steps} turns")


def replay(spec: GameSpec, h: History) -> None:
    """Check that ``h`` is consistent with the game dynamics."""
    if len(h.actions) != len(h.states) - 1:
        raise ValueError("history has misaligned states and actions")
    first = next((t for t, s in enumerate(h.states) if is_capture(spec, s)), None)
    expected = INF if first is None else first
    if expected != h.capture_time:
        raise ValueError(f"recorded capture time {h.capture_time} disagrees with states ({expected})")
    for t, a in enumerate(h.actions):
        try:
            nxt = transition(spec, h.states[t], a)
        except IllegalActionError as exc:
            raise ValueError(f"inconsistent history at t={t}: {exc}") from None
        if nxt != h.states[t + 1]:
            raise ValueError(f"inconsistent history at t={t}: {h.states[t]!r} --{a!r}--> {h.states[t + 1]!r}")


def discounted_payoff(spec: GameSpec, h: History) -> tuple[float, ...]:
    """Total discounted payoff per player.

    Turn payoffs vanish outside the single capture state, so the result is
    ``gamma ** T`` times that state's payoff, or all zeros when T is infinite.
    """
    replay(spec, h)
    if h.is_infinite:
        return (0.0,) * spec.players
    q = player_payoffs(spec, h.states[h.capture_time])
    w = spec.gamma ** h.capture_time
    return tuple(w * x + 0.0 for x in q)


def payoff_of(spec: GameSpec, profile: Sequence[Strategy], s0: AnyState) -> tuple[float, ...]:
    """Shorthand for ``discounted_payoff(spec, simulate(spec, profile, s0))``."""
    return discounted_payoff(spec, simulate(spec, profile, s0))
