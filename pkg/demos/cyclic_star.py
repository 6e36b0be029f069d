"""Cyclic chase on a star: 1 hunts 2, 2 hunts 3, 3 hunts 1.

With the three tokens on the leaves, entering the center exposes the
mover to its hunter. Every equilibrium the solver or best-response
dynamics can find leaves all three tokens where they are.
"""

from gcr.constructions import capture_function
from gcr.equilibrium import PositionalProfile, best_response_dynamics, certify_ne, solve_positional_ne
from gcr.game import State
from gcr.presets import get_preset

preset = get_preset("fig6-star")
spec = preset.spec(0.9)

found = [solve_positional_ne(spec)[0], solve_positional_ne(spec, priority=[4, 3, 2, 1])[0]]
dyn = best_response_dynamics(spec, PositionalProfile.stay(spec))
if dyn is not None:
    found.append(dyn)

for i, profile in enumerate(found, start=1):
    cert = certify_ne(spec, profile)
    outcomes = [capture_function(spec, State(preset.s0.positions, m), profile.strategies()).K for m in (1, 2, 3)]
    print(f"candidate {i}: certified {cert.passed}, capturer for movers 1..3: {outcomes}")
