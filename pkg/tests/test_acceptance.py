"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py``; the summary lines appear at
the end of the pytest report (and inline with ``-s``).
"""

import math
import random

import numpy as np

from gcr.constructions import (
    capture_function,
    fig1_fixture,
    fig1_two_player_profile,
    noncapturing_ne_construction,
    tree_profile,
    trigger_profile,
)
from gcr.engine import simulate
from gcr.equilibrium import (
    PositionalProfile,
    best_response,
    best_response_dynamics,
    certify_ne,
    profile_capture_times,
    solve_positional_ne,
)
from gcr.game import TERMINAL, GameSpec, State, compile_game, enumerate_states
from gcr.graph import cycle_graph, path_graph, star_graph
from gcr.presets import get_preset
from gcr.threat import build_threat_profile, verify_threat_ne
from gcr.zerosum import INF, build_aux_game, copwin_check, solve_exact, solve_vi

from conftest import ACCEPTANCE_LINES, fixture_graphs, tree_corpus

GAMMA = 0.9


def record(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def others(profile, n):
    return [None if k == n else s for k, s in enumerate(profile, start=1)]


def nonterminal(spec):
    return [s for s in enumerate_states(spec) if s is not TERMINAL]


def test_01_value_iteration_matches_retrograde():
    graphs = fixture_graphs()
    worst, mismatched = 0.0, []
    for name, g in graphs.items():
        spec = GameSpec.two_player(g, GAMMA)
        vi = solve_vi(spec, tol=1e-9)
        ex = solve_exact(spec)
        worst = max(worst, float(np.abs(vi.values - ex.values).max()))
        if not np.array_equal(np.isinf(vi.times), np.isinf(ex.times)):
            mismatched.append(name)
    record(1, "value iteration and retrograde agree", worst <= 1e-6 and not mismatched,
           f"{len(graphs)} graphs, max gap {worst:.1e}, classification mismatches {mismatched}")


def test_02_copwin_classification():
    trees = {n: g for n, g in fixture_graphs().items() if g.is_tree}
    tree_ok = all(copwin_check(g, GAMMA) for g in trees.values())
    cycles_ok = not any(copwin_check(cycle_graph(n), GAMMA) for n in (4, 5, 6))
    antipodal = solve_exact(GameSpec.two_player(cycle_graph(4), GAMMA)).value(State((1, 3), 1))
    record(2, "trees are cop-win, long cycles are not", tree_ok and cycles_ok and antipodal == 0.0,
           f"{len(trees)} trees; C4 antipodal value {antipodal}")


def test_03_two_token_fixtures():
    p2 = solve_exact(GameSpec.two_player(path_graph(2), GAMMA))
    p3 = solve_exact(GameSpec.two_player(path_graph(3), GAMMA))
    s = State((1, 3), 1)
    ok = (
        p2.value(State((1, 2), 1)) == GAMMA
        and p2.value(State((1, 2), 2)) == GAMMA ** 2
        and p3.capture_time(s) == 3
        and p3.value(s) == GAMMA ** 3
    )
    record(3, "edge and three-vertex path values", ok,
           f"P2 {p2.value(State((1, 2), 1))}, {p2.value(State((1, 2), 2))}; P3 T={p3.capture_time(s)}")


def test_04_positional_equilibria_certify():
    failures = []
    worst = 0.0
    for g in [path_graph(n) for n in range(2, 6)] + [star_graph(3)]:
        for tokens in (2, 3):
            spec = GameSpec.two_player(g, GAMMA) if tokens == 2 else GameSpec.chain(g, 3, GAMMA)
            profile, u = solve_positional_ne(spec, tol=1e-9)
            if not certify_ne(spec, profile, u, tol=1e-9).passed:
                failures.append((g.vertex_count, tokens))
            if tokens == 2:
                worst = max(worst, float(np.abs(u.u[:, 0] - solve_exact(spec).values).max()))
    record(4, "positional equilibria certified on small graphs", not failures and worst <= 1e-6,
           f"failures {failures}, two-token gap {worst:.1e}")


def _aux2_profiles(max_vertices):
    for g in tree_corpus(max_vertices):
        spec = GameSpec.chain(g, 3, GAMMA)
        sol = solve_vi(build_aux_game(spec, 2), tol=1e-9)
        yield g, spec, PositionalProfile.from_strategies(spec, sol.profile())


def test_05_aux_game_optimum_is_equilibrium_on_trees():
    count, failures = 0, 0
    for g, spec, profile in _aux2_profiles(7):
        count += 1
        failures += not certify_ne(spec, profile, tol=1e-9).passed
    record(5, "middle token's zero-sum optimum is an equilibrium on trees", failures == 0,
           f"{count} trees, {failures} failures")


def test_06_aux_game_optimum_always_captures_on_trees():
    count, escapes = 0, 0
    for g, spec, profile in _aux2_profiles(7):
        count += 1
        escapes += int(np.isinf(profile_capture_times(profile)[:-1]).sum())
    record(6, "middle token's zero-sum optimum captures from every start on trees", escapes == 0,
           f"{count} trees, {escapes} escaping starts")


def test_07_trigger_profile_is_noncapturing_equilibrium():
    g = path_graph(5)
    spec = GameSpec.chain(g, 3, GAMMA)
    details, ok = [], True
    for mover in (1, 2, 3):
        s0 = State((1, 5, 3), mover)
        profile = trigger_profile(g, s0)
        out = capture_function(spec, s0, profile)
        devs = [best_response(spec, others(profile, n), n, s0).value for n in (1, 2, 3)]
        ok &= out.payoffs == (0.0, 0.0, 0.0) and all(v <= 0.0 for v in devs)
        details.append(f"mover {mover}: best deviations {devs}")
    record(7, "trigger profile on the five-vertex path", ok, "; ".join(details))


def test_08_evasion_fixture():
    fx = fig1_fixture(GAMMA)
    h = simulate(fx.spec, fx.strategies, fx.s0)
    profile = PositionalProfile.from_strategies(fx.spec, fig1_two_player_profile(GAMMA))
    cert = certify_ne(fx.spec, profile)
    witnesses = [d for d in cert.violations if d.player in (2, 3)]
    w = witnesses[0] if witnesses else None
    record(8, "hiding behind token 1 escapes forever; two-token optima are not an equilibrium",
           h.capture_time == INF and h.truncated and not cert.passed and w is not None,
           f"T_C={h.capture_time}; witness {w.to_json() if w else None}")


def test_09_four_token_aux_game():
    spec = GameSpec.chain(path_graph(6), 4, GAMMA)
    sol = solve_exact(build_aux_game(spec, 2))
    s = State((1, 3, 4, 5), 4)
    cg = sol.game
    i = cg.index(s)
    outcomes = {int(a): float(sol.values[j]) for a, j in zip(cg.action[i][cg.valid[i]], cg.succ[i][cg.valid[i]])}
    optimal = [a for a, v in outcomes.items() if v == min(outcomes.values())]
    record(9, "token 4 blocks at vertex 4", sol.value(s) == 0.0 and sol.action(s) == 4 and optimal == [4],
           f"value {sol.value(s)}, successor values by move {outcomes}")


def test_10_noncapturing_equilibrium_on_c4():
    g = cycle_graph(4)
    spec = GameSpec.chain(g, 3, GAMMA)
    s0, profile = noncapturing_ne_construction(g, GAMMA)
    out = capture_function(spec, s0, profile)
    devs = [best_response(spec, others(profile, n), n, s0).value for n in (1, 2, 3)]
    ok = s0.positions[2] == s0.positions[0] and out.K == 0 and all(v <= 0.0 for v in devs)
    record(10, "noncapturing equilibrium on the four-cycle", ok, f"s0 {s0}, best deviations {devs}")


def test_11_threat_profiles():
    spec = GameSpec.chain(path_graph(4), 3, GAMMA)
    tp = build_threat_profile(spec)
    bad = [s for s in nonterminal(spec) if not verify_threat_ne(spec, tp, s).passed]
    spec4 = get_preset("fig5").spec(GAMMA)
    report = verify_threat_ne(spec4, build_threat_profile(spec4), get_preset("fig5").s0)
    record(11, "threat profiles admit no profitable deviation", not bad and report.passed,
           f"P4: {len(nonterminal(spec))} starts, {len(bad)} failures; four tokens on P6: {report.passed}")


def test_12_median_race_on_trees():
    trees = tree_corpus(8)
    escapes = 0
    victims = []
    for g in trees:
        spec = GameSpec.chain(g, 3, GAMMA)
        profile = PositionalProfile.from_strategies(spec, tree_profile(g))
        times = profile_capture_times(profile)
        escapes += int(np.isinf(times[:-1]).sum())
        cg = compile_game(spec)
        for s in nonterminal(spec):
            if not cg.capture[cg.index(s)]:
                victims.append((g, s))
    rng = random.Random(12)
    rng.shuffle(victims)
    sampled, worst = 0, -math.inf
    for g, s0 in victims:
        if sampled == 20:
            break
        spec = GameSpec.chain(g, 3, GAMMA)
        strategies = tree_profile(g)
        if capture_function(spec, s0, strategies).K != 1:
            continue
        sampled += 1
        worst = max(worst, best_response(spec, others(strategies, 2), 2, s0).value)
    record(12, "median race captures on every tree; token 2 cannot dodge its capture",
           escapes == 0 and sampled == 20 and worst < 0,
           f"{len(trees)} trees, {escapes} escapes; {sampled} sampled starts, best dodge {worst:.4f}")


def test_13_cyclic_star_has_only_noncapturing_equilibria():
    preset = get_preset("fig6-star")
    spec = preset.spec(GAMMA)
    g = spec.graph
    orders = [None, [4, 3, 2, 1]] + [random.Random(i).sample(list(g.vertices), g.vertex_count) for i in range(6)]
    candidates = []
    for order in orders:
        candidates.append(solve_positional_ne(spec, priority=order)[0])
    cg = compile_game(spec)
    starts = [PositionalProfile.stay(spec)]
    prey = {1: 2, 2: 3, 3: 1}
    starts.append(PositionalProfile.from_rule(
        spec, lambda s: g.step_toward(s.positions[s.mover - 1], s.positions[prey[s.mover] - 1])))
    for seed in range(10):
        rng = np.random.default_rng(seed)
        choice = -np.ones(cg.n_states, dtype=np.int64)
        for i in np.flatnonzero(cg.decision):
            choice[i] = rng.choice(cg.action[i][cg.valid[i]])
        starts.append(PositionalProfile(spec, choice))
    for start in starts:
        for order in orders[:3]:
            found = best_response_dynamics(spec, start, priority=order)
            if found is not None:
                candidates.append(found)
    certified = [p for p in candidates if certify_ne(spec, p).passed]
    capturing = [
        (p, m) for p in certified for m in (1, 2, 3)
        if capture_function(spec, State(preset.s0.positions, m), p.strategies()).K != 0
    ]
    record(13, "cyclic chase on the star has only noncapturing equilibria",
           len(certified) > 0 and not capturing,
           f"{len(candidates)} candidates, {len(certified)} certified, {len(capturing)} capturing")
