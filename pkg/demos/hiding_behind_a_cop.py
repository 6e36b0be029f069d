"""Three tokens on a twelve-vertex tree where the last one never gets caught.

Token 3 walks onto token 1's vertex and stays there. Token 2 cannot
capture it without also landing on token 1, so it keeps its distance and
the play cycles forever. Letting every token use its plain two-token
optimum instead is not an equilibrium: the certificate names a state where
a token gains by deviating.
"""

from gcr.constructions import fig1_fixture, fig1_two_player_profile
from gcr.engine import simulate
from gcr.equilibrium import PositionalProfile, certify_ne

fx = fig1_fixture(0.9)
h = simulate(fx.spec, fx.strategies, fx.s0)
print("trace:")
for s, a in zip(h.states, h.actions):
    print(f"  {s} -> {a}")
print(f"capture time {h.capture_time}, cycle starts at step {h.cycle_start}")

profile = PositionalProfile.from_strategies(fx.spec, fig1_two_player_profile(0.9))
cert = certify_ne(fx.spec, profile)
print(f"\ntwo-token optima form an equilibrium: {cert.passed}")
w = cert.violations[0]
print(f"first violation: player {w.player} at {w.state} should play {w.prescribed} but gains {w.gain:.4f} with {w.deviation}")
