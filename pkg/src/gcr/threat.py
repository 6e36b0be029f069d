"""Threat profiles: cooperate on each token's own auxiliary-game strategy,
punish the first deviator with the strategies of the deviator's auxiliary game.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import Automaton, Positional, discounted_payoff, simulate
from .equilibrium import best_response
from .game import NULL_MOVE, TERMINAL, AnyState, GameSpec, State, is_capture, state_key
from .zerosum import ZeroSumSolution, solve_aux

COOPERATIVE = "cooperative"


def punish(m: int) -> tuple[str, int]:
    return ("punish", m)


@dataclass
class ThreatProfile:
    spec: GameSpec
    solutions: dict[int, ZeroSumSolution]
    automata: list[Automaton]

    def base(self, token: int) -> ZeroSumSolution:
        return self.solutions[token]

    def cooperative_profile(self) -> list[Positional]:
        """Each token's own auxiliary-game strategy, without threats."""
        return [self.solutions[k].token_strategy(k) for k in range(1, self.spec.tokens + 1)]

    def without(self, player: int) -> list[Automaton | None]:
        mine = set(self.spec.tokens_of(player))
        return [None if k + 1 in mine else a for k, a in enumerate(self.automata)]


def _token_automaton(spec: GameSpec, token: int, sols: dict[int, ZeroSumSolution]) -> Automaton:
    def act(mode, s: State) -> int:
        source = token if mode == COOPERATIVE else mode[1]
        return sols[source].action(s)

    def update(mode, s: AnyState, a):
        if mode != COOPERATIVE or s is TERMINAL or a is NULL_MOVE or is_capture(spec, s):
            return mode
        m = s.mover
        if m != token and a != sols[m].action(s):
            return punish(m)
        return mode

    return Automaton(COOPERATIVE, act, update, name=f"threat strategy of token {token}")


def build_threat_profile(spec: GameSpec, method: str = "exact") -> ThreatProfile:
    """Solve every auxiliary game and assemble the threat automata.

    Requires one player per token. The punish mode is entered on the first
    deviation by another token and never left.
    """
    if spec.controllers != tuple(range(1, spec.tokens + 1)):
        raise ValueError("threat profiles need one player per token")
    sols = {n: solve_aux(spec, n, method=method) for n in range(1, spec.tokens + 1)}
    autos = [_token_automaton(spec, k, sols) for k in range(1, spec.tokens + 1)]
    return ThreatProfile(spec, sols, autos)


@dataclass
class ThreatRow:
    player: int
    on_path: float
    best_deviation: float
    tol: float = 1e-9

    @property
    def ok(self) -> bool:
        return self.best_deviation <= self.on_path + self.tol


@dataclass
class ThreatReport:
    s0: AnyState
    rows: list[ThreatRow]

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)

    def to_json(self) -> dict:
        return {
            "s0": state_key(self.s0),
            "passed": self.passed,
            "players": [
                {"player": r.player, "on_path": r.on_path, "best_deviation": r.best_deviation, "ok": r.ok}
                for r in self.rows
            ],
        }


def verify_threat_ne(spec: GameSpec, profile: ThreatProfile, s0: AnyState, tol: float = 1e-9) -> ThreatReport:
    """Compare each player's on-path payoff with its exact best deviation."""
    on_path = discounted_payoff(spec, simulate(spec, profile.automata, s0))
    rows = []
    for n in range(1, spec.players + 1):
        br = best_response(spec, profile.without(n), n, s0)
        rows.append(ThreatRow(n, on_path[n - 1], br.value, tol))
    return ThreatReport(s0, rows)
