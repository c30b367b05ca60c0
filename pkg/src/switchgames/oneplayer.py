"""Deciding one-player games and producing flow certificates."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .core import Game, GameState, Outcome, Owner, Play, Player, is_one_player, require_valid
from .errors import NotOnePlayer, StateLimitExceeded
from .flows import ControlledSwitchingFlow, check_flow, play_to_flow


@dataclass(frozen=True)
class OnePlayerVerdict:
    winner: Player
    certificate: ControlledSwitchingFlow | None
    witness_play: Play | None
    explored_states: int


def solve_one_player(game: Game, state_limit: int | None = None) -> OnePlayerVerdict:
    """Breadth-first reachability over game states.

    The first target state dequeued-from-discovery gives a shortest witness
    play; it never repeats a state, so it converts directly to a certificate.
    """
    require_valid(game)
    if not is_one_player(game):
        raise NotOnePlayer("game has safety vertices with outgoing edges")
    owners, succ, slots, target = game.owners, game.succ, game.switch_slot, game.target
    start = game.initial_state
    parent: dict[tuple, tuple | None] = {start: None}
    queue = deque([start])
    found = start if start.vertex == target else None
    while queue and found is None:
        v, counters = state = queue.popleft()
        out = succ[v]
        if owners[v] is Owner.SWITCH:
            slot = slots[v]
            pos = counters[slot]
            nxt = pos + 1
            if nxt == len(out):
                nxt = 0
            children = (GameState(out[pos], counters[:slot] + (nxt,) + counters[slot + 1:]),)
        else:
            children = [GameState(u, counters) for u in out]
        for child in children:
            if child in parent:
                continue
            parent[child] = state
            if child.vertex == target:
                found = child
                break
            if state_limit is not None and len(parent) > state_limit:
                raise StateLimitExceeded(len(parent))
            queue.append(child)
    if found is None:
        return OnePlayerVerdict(Player.SAFETY, None, None, len(parent))
    path = []
    node = found
    while node is not None:
        path.append(node)
        node = parent[node]
    play = Play(tuple(reversed(path)), Outcome.REACHED_TARGET)
    return OnePlayerVerdict(Player.REACHABILITY, play_to_flow(game, play), play, len(parent))


def search_flow(game: Game, total_flow_cap: int) -> ControlledSwitchingFlow | None:
    """Search for a controlled switching flow with total at most the cap.

    Independent of the state-space search: the flow conditions are posed as
    an integer program and handed to a branch-and-bound solver.  A switching
    vertex with ``k`` positions gets an integer ``c`` and monotone binaries
    ``y_0 >= ... >= y_{k-2}`` (``y_{k-1}`` fixed to 0), so position ``j``
    carries ``c + y_j`` and the throughput is ``k*c + sum(y)``; this is
    exactly the set of rotor-compatible splits.

    The returned flow is canonical: least total flow, then lexicographically
    least throughput vector (switch vertices in index order), then least
    reach-flow vector (reach edges in vertex/successor-list order).  The
    least total equals the length of a shortest winning play.
    """
    require_valid(game)
    if not is_one_player(game):
        raise NotOnePlayer("game has safety vertices with outgoing edges")
    if game.start == game.target:
        return ControlledSwitchingFlow()

    n = len(game)
    reach_edges = [(v, u) for v in range(n) if game.owners[v] is Owner.REACH for u in game.succ[v]]
    columns: list[tuple] = [("x", e) for e in reach_edges]
    c_col, y_cols = {}, {}
    for v in game.switches:
        c_col[v] = len(columns)
        columns.append(("c", v))
        y_cols[v] = []
        for j in range(len(game.succ[v]) - 1):
            y_cols[v].append(len(columns))
            columns.append(("y", v, j))
    m = len(columns)
    if m == 0:
        return None

    rows, lo, hi = [], [], []

    def add_row(coeffs: dict[int, float], low: float, high: float):
        row = np.zeros(m)
        for col, a in coeffs.items():
            row[col] += a
        rows.append(row)
        lo.append(low)
        hi.append(high)

    # flow leaving each vertex minus flow entering it
    flow_terms: list[dict[int, float]] = [dict() for _ in range(n)]

    def add_term(vertex: int, col: int, a: float):
        flow_terms[vertex][col] = flow_terms[vertex].get(col, 0.0) + a

    for i, (v, u) in enumerate(reach_edges):
        add_term(v, i, 1.0)
        add_term(u, i, -1.0)
    for v in game.switches:
        order = game.succ[v]
        for j, u in enumerate(order):
            add_term(v, c_col[v], 1.0)
            add_term(u, c_col[v], -1.0)
            if j < len(order) - 1:
                add_term(v, y_cols[v][j], 1.0)
                add_term(u, y_cols[v][j], -1.0)
    for w in range(n):
        want = 1.0 if w == game.start else -1.0 if w == game.target else 0.0
        add_row(flow_terms[w], want, want)
    for v in game.switches:
        ys = y_cols[v]
        for a, b in zip(ys, ys[1:]):
            add_row({a: 1.0, b: -1.0}, 0.0, np.inf)

    total = np.zeros(m)
    weights = {}
    for i in range(len(reach_edges)):
        total[i] = 1.0
    for v in game.switches:
        k = len(game.succ[v])
        total[c_col[v]] = k
        weights[v] = {c_col[v]: float(k), **{y: 1.0 for y in y_cols[v]}}
        for y in y_cols[v]:
            total[y] = 1.0
    rows.append(total)
    lo.append(0.0)
    hi.append(float(total_flow_cap))

    upper = np.full(m, np.inf)
    for v in game.switches:
        for y in y_cols[v]:
            upper[y] = 1.0
    bounds = Bounds(np.zeros(m), upper)
    integrality = np.ones(m)

    objectives = [total]
    for v in game.switches:
        obj = np.zeros(m)
        for col, a in weights[v].items():
            obj[col] = a
        objectives.append(obj)
    for i in range(len(reach_edges)):
        obj = np.zeros(m)
        obj[i] = 1.0
        objectives.append(obj)

    x = None
    for obj in objectives:
        res = milp(obj, constraints=LinearConstraint(np.array(rows), lo, hi),
                   integrality=integrality, bounds=bounds)
        if res.status == 2:
            return None
        if res.x is None:
            raise RuntimeError(f"integer program failed: {res.message}")
        x = np.rint(res.x).astype(int)
        best = int(round(float(obj @ x)))
        rows.append(obj.copy())
        lo.append(best)
        hi.append(best)

    flow = ControlledSwitchingFlow(
        {e: int(x[i]) for i, e in enumerate(reach_edges) if x[i]},
        {v: int(len(game.succ[v]) * x[c_col[v]] + sum(x[y] for y in y_cols[v]))
         for v in game.switches
         if len(game.succ[v]) * x[c_col[v]] + sum(x[y] for y in y_cols[v])},
    )
    if check_flow(game, flow):
        raise RuntimeError("integer program returned a flow that fails the balance check")
    return flow
