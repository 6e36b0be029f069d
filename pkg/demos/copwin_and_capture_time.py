"""Which small graphs let a single cop win, and how fast.

Trees always do; cycles of length four or more never do. For the cop-win
graphs the printed capture time is the best the cop can guarantee from the
worst starting placement.
"""

from gcr import GameSpec, State, cycle_graph, path_graph, solve_exact, star_graph
from gcr.zerosum import INF, optimal_capture_time

GAMMA = 0.9

graphs = {
    "path on 5 vertices": path_graph(5),
    "star with 4 leaves": star_graph(4),
    "triangle": cycle_graph(3),
    "square": cycle_graph(4),
    "hexagon": cycle_graph(6),
}

for name, g in graphs.items():
    sol = solve_exact(GameSpec.two_player(g, GAMMA))
    t, cop, robber = optimal_capture_time(sol, placement=True)
    if t == INF:
        print(f"{name:20s} robber escapes forever (e.g. cop at {cop}, robber at {robber})")
    else:
        print(f"{name:20s} capture within {t} turns (cop at {cop}, robber at {robber})")

# one concrete position: cop at an end of the path, robber at the other, cop to move
sol = solve_exact(GameSpec.two_player(path_graph(5), GAMMA))
s = State((1, 5), 1)
print(f"\nfrom {s}: value {sol.value(s):.4f}, capture after {sol.capture_time(s)} turns")
