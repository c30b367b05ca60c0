"""Brute-force reference implementations used as test oracles.

Nothing here calls into the solvers under test.  The game stepper below is
a second, deliberately naive rendering of the rotor semantics: counters are
kept per vertex (not per switch slot) and every step rebuilds the tuple.
"""
from __future__ import annotations

import itertools
from collections import deque

from switchgames.core import Owner
from switchgames.reductions import And, Lit, Or, Quantifier


# ---- formulas -------------------------------------------------------------

def brute_sat(f) -> bool:
    return any(cnf_value(f.clauses, dict(enumerate(bits, 1)))
               for bits in itertools.product((False, True), repeat=f.num_vars))


def qbf_value(prefix, matrix) -> bool:
    def expand(i, values):
        if i == len(prefix):
            return _eval(matrix, values)
        quant, v = prefix[i]
        branches = (expand(i + 1, {**values, v: b}) for b in (False, True))
        return any(branches) if quant is Quantifier.EXISTS else all(branches)
    return expand(0, {})


def _eval(node, values) -> bool:
    # written out again rather than reusing evaluate_matrix
    if isinstance(node, Lit):
        return values[abs(node.literal)] is (node.literal > 0)
    if isinstance(node, And):
        return all(_eval(c, values) for c in node.children)
    assert isinstance(node, Or)
    return any(_eval(c, values) for c in node.children)


def cnf_value(clauses, values) -> bool:
    return all(any(values[abs(l)] is (l > 0) for l in c) for c in clauses)


# ---- graphs ---------------------------------------------------------------

def graph_reaches(num_vertices, edges, s, t) -> bool:
    adj = {v: [] for v in range(num_vertices)}
    for u, v in edges:
        adj[u].append(v)
    seen, todo = {s}, deque([s])
    while todo:
        u = todo.popleft()
        if u == t:
            return True
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return False


# ---- naive game stepper ---------------------------------------------------

def naive_moves(game, state):
    """Successor states of ``(v, counts)`` with counts indexed by vertex."""
    v, counts = state
    if v == game.target:
        return []
    if game.owners[v] is Owner.SWITCH:
        order = game.succ[v]
        c = counts[v]
        nxt = list(counts)
        nxt[v] = (c + 1) % len(order)
        return [(order[c], tuple(nxt))]
    return [(u, counts) for u in dict.fromkeys(game.succ[v])]


def naive_initial(game):
    return (game.start, (0,) * len(game.owners))


def naive_reachable(game):
    start = naive_initial(game)
    seen, todo = {start}, [start]
    while todo:
        s = todo.pop()
        for n in naive_moves(game, s):
            if n not in seen:
                seen.add(n)
                todo.append(n)
    return seen


def one_player_reachable_target(game) -> bool:
    return any(v == game.target for v, _ in naive_reachable(game))


def naive_walk(game, limit=100000):
    """Deterministic walk; returns ("target"|"dead"|"cycle", states)."""
    state = naive_initial(game)
    states, seen = [state], {state: 0}
    for _ in range(limit):
        if state[0] == game.target:
            return "target", states
        moves = naive_moves(game, state)
        if not moves:
            return "dead", states
        assert len(moves) == 1, "walk needs a zero-player game"
        state = moves[0]
        if state in seen:
            return "cycle", states + [state]
        seen[state] = len(states)
        states.append(state)
    raise AssertionError("walk did not settle")


def naive_game_value(game) -> bool:
    """True iff Reachability wins, by least fixpoint over naive states."""
    states = sorted(naive_reachable(game))
    moves = {s: naive_moves(game, s) for s in states}
    win = {s for s in states if s[0] == game.target}
    changed = True
    while changed:
        changed = False
        for s in states:
            if s in win or not moves[s]:
                continue
            owner = game.owners[s[0]]
            hits = [m in win for m in moves[s]]
            good = all(hits) if owner is Owner.SAFETY else any(hits)
            if good:
                win.add(s)
                changed = True
    return naive_initial(game) in win


# ---- attractor on a blown-up game -----------------------------------------

def dfs_attractor(bg) -> set[int]:
    """Winning set by repeated memoized alternating depth-first evaluation.

    One pass evaluates every node depth-first; a node met again while still
    on the DFS stack is treated as losing (an infinite play).  That
    under-approximates, so passes repeat, seeding each with the nodes already
    proved winning, until nothing new is proved.  The DFS keeps its own
    stack so deep blown-up games do not hit the recursion limit.
    """
    proved: set[int] = set(bg.target_nodes)
    while True:
        memo: dict[int, bool] = {}
        on_stack: set[int] = set()

        def value(v):
            if v in proved:
                return True
            return memo.get(v)

        for root in range(len(bg.nodes)):
            if value(root) is not None:
                continue
            frames = [[root, iter(bg.succ[root]), []]]
            on_stack.add(root)
            while frames:
                v, it, seen = frames[-1]
                u = next(it, None)
                if u is not None:
                    known = value(u)
                    if known is None and u in on_stack:
                        known = False
                    if known is None:
                        on_stack.add(u)
                        frames.append([u, iter(bg.succ[u]), []])
                    else:
                        seen.append(known)
                    continue
                frames.pop()
                on_stack.discard(v)
                if not bg.succ[v]:
                    result = False
                elif bg.owner(v) is Owner.SAFETY:
                    result = all(seen)
                else:
                    result = any(seen)
                memo[v] = result
                if frames:
                    frames[-1][2].append(result)

        before = len(proved)
        proved |= {v for v, ok in memo.items() if ok}
        if len(proved) == before:
            return proved


__all__ = [
    "brute_sat", "qbf_value", "cnf_value", "graph_reaches", "naive_moves", "naive_initial",
    "naive_reachable", "one_player_reachable_target", "naive_walk", "naive_game_value",
    "dfs_attractor",
]
