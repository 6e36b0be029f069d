"""A standoff on a five-vertex path where nobody ever captures.

Tokens 1 and 2 sit on the ends and token 3 in the middle. Everyone waits;
the first token to move is punished by a chase. The exact best-response
search shows no token can gain by moving, whoever moves first.
"""

from gcr import GameSpec, State, path_graph
from gcr.constructions import capture_function, trigger_profile
from gcr.equilibrium import best_response

g = path_graph(5)
spec = GameSpec.chain(g, 3, 0.9)

for mover in (1, 2, 3):
    s0 = State((1, 5, 3), mover)
    profile = trigger_profile(g, s0)
    outcome = capture_function(spec, s0, profile)
    gains = []
    for n in (1, 2, 3):
        others = [None if k == n else a for k, a in enumerate(profile, start=1)]
        gains.append(best_response(spec, others, n, s0).value)
    print(f"mover {mover}: payoffs {outcome.payoffs}, best deviation values {gains}")
