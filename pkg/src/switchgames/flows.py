"""Controlled switching flows: the certificate for one-player games.

A switching vertex stores only its total throughput ``T``.  The flow on
each position of its order is implied: with ``k`` positions,
``c, i = divmod(T, k)`` and position ``j`` carries ``c + 1`` if ``j < i``
and ``c`` otherwise, which is the only split a rotor can produce.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping

from .core import Game, GameState, Outcome, Owner, Play, is_one_player, successor
from .errors import NotOnePlayer, NotWinningPlay, RepeatedState, ShapeMismatch, StrategyStuck


@dataclass(frozen=True)
class ControlledSwitchingFlow:
    reach_flow: Mapping[tuple[int, int], int] = field(default_factory=dict)
    switch_throughput: Mapping[int, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.reach_flow.values()) + sum(self.switch_throughput.values())

    def throughput(self, v: int) -> int:
        return self.switch_throughput.get(v, 0)

    def normalized(self) -> ControlledSwitchingFlow:
        """Drop zero entries and sort keys so equal flows compare equal."""
        return ControlledSwitchingFlow(
            {e: n for e, n in sorted(self.reach_flow.items()) if n},
            {v: n for v, n in sorted(self.switch_throughput.items()) if n},
        )

    def __eq__(self, other):
        if not isinstance(other, ControlledSwitchingFlow):
            return NotImplemented
        a, b = self.normalized(), other.normalized()
        return dict(a.reach_flow) == dict(b.reach_flow) and dict(a.switch_throughput) == dict(b.switch_throughput)


def position_flows(throughput: int, k: int) -> list[int]:
    c, i = divmod(throughput, k)
    return [c + 1 if j < i else c for j in range(k)]


def check_shape(game: Game, flow: ControlledSwitchingFlow) -> list[str]:
    problems = []
    for (v, u), n in flow.reach_flow.items():
        if not (0 <= v < len(game)) or game.owners[v] is not Owner.REACH:
            problems.append(f"reach entry at non-reach vertex {v}")
        elif u not in game.succ[v]:
            problems.append(f"{game.names[v]} -> {u} is not an edge")
        if n < 0:
            problems.append(f"negative count {n} on reach edge {v}->{u}")
    for v, n in flow.switch_throughput.items():
        if not (0 <= v < len(game)) or game.owners[v] is not Owner.SWITCH:
            problems.append(f"switch entry at non-switch vertex {v}")
        if n < 0:
            problems.append(f"negative throughput {n} at vertex {v}")
    return problems


def edge_flows(game: Game, flow: ControlledSwitchingFlow) -> dict[tuple[int, int], int]:
    """Per-edge flow, summing switch positions that share a successor."""
    out: dict[tuple[int, int], int] = defaultdict(int)
    for e, n in flow.reach_flow.items():
        out[e] += n
    for v, t in flow.switch_throughput.items():
        order = game.succ[v]
        for u, n in zip(order, position_flows(t, len(order))):
            out[(v, u)] += n
    return dict(out)


def balances(game: Game, flow: ControlledSwitchingFlow) -> list[int]:
    problems = check_shape(game, flow)
    if problems:
        raise ShapeMismatch("; ".join(problems))
    bal = [0] * len(game)
    for (v, u), n in edge_flows(game, flow).items():
        bal[v] += n
        bal[u] -= n
    return bal


def balance(game: Game, flow: ControlledSwitchingFlow, v: int) -> int:
    """Outgoing minus incoming flow at ``v``."""
    return balances(game, flow)[v]


@dataclass(frozen=True)
class FlowViolation:
    vertex: int | None
    got: int | None
    want: int | None
    message: str

    def __str__(self):
        return self.message


def check_flow(game: Game, flow: ControlledSwitchingFlow) -> list[FlowViolation]:
    """Balance check.  The switching condition holds by construction."""
    problems = check_shape(game, flow)
    if problems:
        return [FlowViolation(None, None, None, p) for p in problems]
    if game.start == game.target:
        if flow.total():
            return [FlowViolation(game.start, flow.total(), 0,
                                  "start equals target: only the empty flow is valid")]
        return []
    bal = balances(game, flow)
    out = []
    for v, got in enumerate(bal):
        want = 1 if v == game.start else -1 if v == game.target else 0
        if got != want:
            out.append(FlowViolation(v, got, want, f"balance({game.names[v]}) = {got}, expected {want}"))
    return out


def play_to_flow(game: Game, play: Play) -> ControlledSwitchingFlow:
    """Count how often the play uses each edge."""
    if play.outcome is not Outcome.REACHED_TARGET:
        raise NotWinningPlay(f"play ends with outcome {play.outcome.value}")
    if len(set(play.states)) != len(play.states):
        raise RepeatedState("play repeats a state")
    reach: dict[tuple[int, int], int] = defaultdict(int)
    switch: dict[int, int] = defaultdict(int)
    for here, there in zip(play.states, play.states[1:]):
        owner = game.owners[here.vertex]
        if owner is Owner.SWITCH:
            switch[here.vertex] += 1
        elif owner is Owner.REACH:
            reach[(here.vertex, there.vertex)] += 1
        else:
            raise NotOnePlayer(f"play passes safety vertex {game.names[here.vertex]}")
    return ControlledSwitchingFlow(dict(sorted(reach.items())), dict(sorted(switch.items())))


def run_marginal(game: Game, flow: ControlledSwitchingFlow) -> Play:
    """Execute the marginal strategy whose budgets are the flow's reach counts.

    At a reachability vertex the first successor (in list order) whose edge
    has budget left is taken.  Every transition consumes one unit of flow, so
    more than ``flow.total()`` transitions means the certificate is broken.
    """
    if not is_one_player(game):
        raise NotOnePlayer("marginal strategies are defined for one-player games")
    used: dict[tuple[int, int], int] = defaultdict(int)
    budget = flow.reach_flow
    limit = flow.total()
    state = game.initial_state
    states = [state]
    while True:
        v = state.vertex
        if v == game.target:
            return Play(tuple(states), Outcome.REACHED_TARGET)
        if not game.succ[v]:
            return Play(tuple(states), Outcome.DEAD_END)
        if len(states) > limit:
            raise StrategyStuck(f"flow exhausted after {limit} transitions at {game.names[v]}")
        if game.owners[v] is Owner.SWITCH:
            state = successor(game, state)
        else:
            for u in game.succ[v]:
                if used[(v, u)] < budget.get((v, u), 0):
                    used[(v, u)] += 1
                    state = GameState(u, state.counters)
                    break
            else:
                raise StrategyStuck(f"no budgeted edge left at {game.names[v]}")
        states.append(state)
