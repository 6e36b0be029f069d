"""Threat profiles on a four-token chain.

Each token follows the optimal strategy of its own zero-sum auxiliary
game; the moment someone else deviates, everyone switches to punishing
that token. The report compares each player's on-path payoff with the
best it could get by deviating against the automata.
"""

from gcr import GameSpec, State, path_graph
from gcr.threat import build_threat_profile, verify_threat_ne

spec = GameSpec.chain(path_graph(6), 4, 0.9)
profile = build_threat_profile(spec)
s0 = State((1, 3, 4, 5), 4)

print(f"auxiliary values at {s0}:")
for n, sol in profile.solutions.items():
    print(f"  token {n}: {sol.value(s0):+.4f}, cooperative move {sol.action(s0)}")

report = verify_threat_ne(spec, profile, s0)
for row in report.rows:
    print(f"player {row.player}: on path {row.on_path:+.4f}, best deviation {row.best_deviation:+.4f}")
print(f"no profitable deviation: {report.passed}")
