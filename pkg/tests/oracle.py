"""Reference computations that share no code with the package.

States are plain tuples ``(x1, ..., xN, mover)``; the terminal state is
``None``. Everything is dictionaries and loops, favouring obviousness
over speed, so only tiny games are practical.
"""

from __future__ import annotations

import itertools
import math


def adjacency(n, edges):
    adj = {v: set() for v in range(1, n + 1)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def chain_capture(pos):
    return any(pos[i] == pos[i + 1] for i in range(len(pos) - 1))


def chain_payoff(pos):
    caps = {i + 1 for i in range(len(pos) - 1) if pos[i] == pos[i + 1]}
    out = []
    for n in range(1, len(pos) + 1):
        lost = (n - 1) in caps and (n - 2) not in caps
        won = n in caps and (n - 1) not in caps
        out.append(-1 if lost else 1 if won else 0)
    return out


def states(n, tokens):
    for pos in itertools.product(range(1, n + 1), repeat=tokens):
        for m in range(1, tokens + 1):
            yield pos + (m,)


def moves(adj, s):
    """Successors of a non-capture state as ``(vertex, next_state)`` pairs."""
    *pos, m = s
    tokens = len(pos)
    out = []
    for v in sorted(adj[pos[m - 1]] | {pos[m - 1]}):
        nxt = list(pos)
        nxt[m - 1] = v
        out.append((v, tuple(nxt) + (m % tokens + 1,)))
    return out


def zero_sum_values(n, edges, gamma, tokens=2, focus=1):
    """Value of the focus token against the rest, by plain iteration to an exact fixpoint."""
    adj = adjacency(n, edges)
    all_states = list(states(n, tokens))
    v = {s: 0.0 for s in all_states}
    for _ in range(10 * len(all_states) + 10):
        new = {}
        for s in all_states:
            pos = s[:-1]
            if chain_capture(pos):
                new[s] = float(chain_payoff(pos)[focus - 1])
                continue
            vals = [v[t] for _, t in moves(adj, s)]
            new[s] = gamma * (max(vals) if s[-1] == focus else min(vals))
        if new == v:
            return v
        v = new
    raise RuntimeError("oracle did not reach a fixpoint")


def capture_times(values, gamma):
    out = {}
    for s, u in values.items():
        out[s] = math.inf if u == 0 else round(math.log(abs(u)) / math.log(gamma))
    return out


def play(n, edges, policy, s0, gamma, payoff=chain_payoff, capture=chain_capture):
    """Discounted payoffs of a positional ``policy(state) -> vertex`` from ``s0``."""
    adj = adjacency(n, edges)
    seen = set()
    s, t = s0, 0
    while s not in seen:
        seen.add(s)
        pos = s[:-1]
        if capture(pos):
            return [gamma ** t * q for q in payoff(pos)], t
        succ = dict(moves(adj, s))
        s = succ[policy(s)]
        t += 1
    return [0.0] * (len(s0) - 1), math.inf


def one_shot_violations(n, edges, policy, gamma, tokens, payoff=chain_payoff, capture=chain_capture, tol=1e-9):
    """States where the mover gains by one different move, evaluated by direct play."""
    adj = adjacency(n, edges)
    bad = []
    for s in states(n, tokens):
        if capture(s[:-1]):
            continue
        m = s[-1]
        base = dict(moves(adj, s))[policy(s)]
        keep = play(n, edges, policy, base, gamma, payoff, capture)[0][m - 1]
        for v, t in moves(adj, s):
            alt = play(n, edges, policy, t, gamma, payoff, capture)[0][m - 1]
            if gamma * alt > gamma * keep + tol:
                bad.append((s, v))
    return bad
