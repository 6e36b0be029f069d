import math

import numpy as np
import pytest

from gcr.engine import Positional, discounted_payoff, simulate
from gcr.equilibrium import (
    PositionalProfile,
    best_response,
    best_response_dynamics,
    certify_ne,
    evaluate_profile,
    positional_best_response,
    profile_capture_times,
    solve_positional_ne,
)
from gcr.game import TERMINAL, GameSpec, IllegalActionError, StateCapError, State, compile_game
from gcr.graph import cycle_graph, path_graph, star_graph
from gcr.zerosum import NonConvergenceError, solve_exact

import oracle


def stay():
    return Positional(lambda s: s.positions[s.mover - 1])


def test_three_tokens_on_an_edge():
    spec = GameSpec.chain(path_graph(2), 3, 0.9)
    profile, u = solve_positional_ne(spec)
    s = State((1, 2, 1), 1)
    assert profile.action(s) == 2
    assert u.vector(s) == pytest.approx((0.9, -0.9, 0.0))
    assert oracle.one_shot_violations(2, [(1, 2)], lambda t: profile.action(State(t[:-1], t[-1])), 0.9, 3) == []


def test_capture_states_take_turn_payoffs():
    spec = GameSpec.chain(path_graph(3), 3, 0.9)
    _, u = solve_positional_ne(spec)
    assert u.vector(State((2, 2, 3), 2)) == (1.0, -1.0, 0.0)
    assert u.vector(TERMINAL) == (0.0, 0.0, 0.0)


@pytest.mark.parametrize("g", [path_graph(3), path_graph(5), cycle_graph(4), star_graph(3)])
def test_two_player_ne_matches_zero_sum(g):
    spec = GameSpec.two_player(g, 0.9)
    _, u = solve_positional_ne(spec)
    exact = solve_exact(spec)
    assert np.allclose(u.u[:, 0], exact.values, atol=1e-9)
    assert np.allclose(u.u[:, 1], -exact.values, atol=1e-9)


def test_cop_that_stays_is_not_an_equilibrium():
    spec = GameSpec.two_player(path_graph(3), 0.9)
    cert = certify_ne(spec, PositionalProfile.stay(spec))
    assert not cert.passed
    witness = {(d.state, d.deviation) for d in cert.violations_by(1)}
    # a single step is profitable exactly when it lands on the robber
    assert (State((1, 2), 1), 2) in witness
    assert all(d.deviation == d.state.positions[1] for d in cert.violations)
    assert not cert.violations_by(2)
    assert all(d.gain > 0 for d in cert.violations)


def test_certify_flags_inconsistent_values():
    spec = GameSpec.two_player(path_graph(3), 0.9)
    profile, u = solve_positional_ne(spec)
    u.u[profile.game.index(State((1, 3), 1)), 0] += 0.1
    cert = certify_ne(spec, profile, u)
    assert not cert.passed
    assert cert.consistency_residual == pytest.approx(0.1)
    assert State((1, 3), 1) in {s for s, _ in cert.inconsistent}


def test_evaluation_matches_direct_play():
    g = path_graph(4)
    spec = GameSpec.chain(g, 3, 0.9)
    rng = np.random.default_rng(7)
    cg = compile_game(spec)
    choice = -np.ones(cg.n_states, dtype=np.int64)
    for i in np.flatnonzero(cg.decision):
        choice[i] = rng.choice(cg.action[i][cg.valid[i]])
    profile = PositionalProfile(spec, choice)
    u = evaluate_profile(spec, profile)
    times = profile_capture_times(profile)
    policy = lambda t: profile.action(State(t[:-1], t[-1]))  # noqa: E731
    for s in list(cg.states())[:-1]:
        q, t = oracle.play(4, g.sorted_edges(), policy, s.positions + (s.mover,), 0.9)
        assert u.vector(s) == pytest.approx(tuple(q), abs=1e-12)
        assert times[cg.index(s)] == t


def test_profile_validation_and_json():
    spec = GameSpec.two_player(path_graph(3), 0.9)
    stay_profile = PositionalProfile.stay(spec)
    bad = stay_profile.choice.copy()
    bad[compile_game(spec).index(State((1, 3), 1))] = 3
    with pytest.raises(IllegalActionError):
        PositionalProfile(spec, bad)
    data = stay_profile.to_json()
    assert data["1,3;1"] == 1
    assert PositionalProfile.from_json(spec, data) == stay_profile
    del data["1,3;1"]
    with pytest.raises(ValueError, match="not total"):
        PositionalProfile.from_json(spec, data)


def test_priority_changes_ties_only():
    spec = GameSpec.chain(star_graph(3), 3, 0.9)
    a, ua = solve_positional_ne(spec)
    b, ub = solve_positional_ne(spec, priority=[4, 3, 2, 1])
    assert certify_ne(spec, a, ua).passed and certify_ne(spec, b, ub).passed
    with pytest.raises(ValueError):
        solve_positional_ne(spec, priority=[1, 2, 3])


def test_non_convergence_reported():
    spec = GameSpec.chain(path_graph(5), 3, 0.9)
    with pytest.raises(NonConvergenceError) as err:
        solve_positional_ne(spec, max_iters=1)
    assert err.value.residual > 0


def test_best_response_against_motionless_robber():
    spec = GameSpec.two_player(path_graph(3), 0.9)
    robber = Positional(lambda s: s.positions[1])
    br = best_response(spec, [None, robber], 1, State((1, 3), 1))
    assert br.value == pytest.approx(0.9 ** 3)
    h = simulate(spec, br.profile_with([None, robber]), State((1, 3), 1))
    assert discounted_payoff(spec, h)[0] == pytest.approx(br.value)


def test_best_response_at_least_on_profile_payoff():
    g = path_graph(4)
    spec = GameSpec.chain(g, 3, 0.9)
    profile, _ = solve_positional_ne(spec)
    strategies = profile.strategies()
    for s0 in [State((1, 4, 2), 1), State((2, 3, 4), 3), State((4, 1, 3), 2)]:
        on_path = discounted_payoff(spec, simulate(spec, strategies, s0))
        for n in (1, 2, 3):
            others = [None if k == n else st for k, st in enumerate(strategies, start=1)]
            assert best_response(spec, others, n, s0).value <= on_path[n - 1] + 1e-12
            assert best_response(spec, others, n, s0).value >= on_path[n - 1] - 1e-12


def test_best_response_checks():
    spec = GameSpec.two_player(path_graph(3), 0.9)
    with pytest.raises(ValueError):
        best_response(spec, [None], 1, State((1, 3), 1))
    with pytest.raises(ValueError):
        best_response(spec, [None, None], 1, State((1, 3), 1))
    with pytest.raises(StateCapError):
        best_response(spec, [None, stay()], 1, State((1, 3), 1), cap=2)
    with pytest.raises(IllegalActionError):
        best_response(spec, [None, Positional(lambda s: 1)], 1, State((1, 3), 2))


def test_positional_best_response_and_dynamics():
    spec = GameSpec.two_player(path_graph(4), 0.9)
    start = PositionalProfile.stay(spec)
    better = positional_best_response(spec, start, 1)
    assert not certify_ne(spec, start).passed
    assert certify_ne(spec, better).violations_by(1) == []
    fixed = best_response_dynamics(spec, start)
    assert fixed is not None and certify_ne(spec, fixed).passed


def test_infinite_values_are_zero():
    spec = GameSpec.two_player(cycle_graph(4), 0.9)
    profile, u = solve_positional_ne(spec)
    assert u.value(State((1, 3), 2), 1) == 0.0
    assert math.isinf(profile_capture_times(profile)[profile.game.index(State((1, 3), 2))])
