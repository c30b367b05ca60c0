"""Two-player games: explicit blow-up, attractor, strategies.

The blown-up game has one node per reachable (vertex, counters) pair, so
switching vertices become ordinary deterministic nodes and the classical
attractor construction applies.  Positional strategies on the blown-up game
are switch-configuration strategies on the original game.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Union

from .core import (
    Game,
    GameState,
    Outcome,
    Owner,
    Play,
    Player,
    next_states,
    require_valid,
)
from .errors import EnumerationCapExceeded, IllegalChoice, StateLimitExceeded, UndefinedMove


@dataclass
class BlownUpGame:
    game: Game
    nodes: list[GameState]
    index: dict[GameState, int]
    succ: list[tuple[int, ...]]
    target_nodes: frozenset[int]

    def owner(self, node: int) -> Owner:
        return self.game.owners[self.nodes[node].vertex]

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self.succ)


def blow_up(game: Game, state_limit: int | None = None) -> BlownUpGame:
    """Forward exploration from the initial state, nodes numbered in discovery order.

    Target nodes and dead ends get no outgoing edges: plays stop there.
    """
    require_valid(game)
    start = game.initial_state
    nodes = [start]
    index = {start: 0}
    succ: list[tuple[int, ...]] = []
    targets = []
    i = 0
    while i < len(nodes):
        state = nodes[i]
        if state.vertex == game.target:
            targets.append(i)
            succ.append(())
        else:
            out = []
            for child in next_states(game, state) if game.succ[state.vertex] else ():
                j = index.get(child)
                if j is None:
                    j = len(nodes)
                    if state_limit is not None and j >= state_limit:
                        raise StateLimitExceeded(j + 1)
                    index[child] = j
                    nodes.append(child)
                out.append(j)
            succ.append(tuple(out))
        i += 1
    return BlownUpGame(game, nodes, index, succ, frozenset(targets))


def attractor_ranks(bg: BlownUpGame) -> list[int | None]:
    """Layer at which each node joins the reachability attractor (None if never).

    Backward propagation with per-node counters of successors not yet in the
    attractor.  Nodes are processed first-in first-out, so ranks come out in
    nondecreasing order and every node's rank is one more than the rank of
    the successor that pulled it in.
    """
    n = len(bg.nodes)
    preds: list[list[int]] = [[] for _ in range(n)]
    for v, out in enumerate(bg.succ):
        for u in out:
            preds[u].append(v)
    remaining = [len(out) for out in bg.succ]
    existential = [bg.owner(v) is Owner.REACH for v in range(n)]
    rank: list[int | None] = [None] * n
    queue = deque()
    for t in sorted(bg.target_nodes):
        rank[t] = 0
        queue.append(t)
    while queue:
        u = queue.popleft()
        for v in preds[u]:
            if rank[v] is not None:
                continue
            if existential[v]:
                rank[v] = rank[u] + 1
                queue.append(v)
            else:
                # one decrement per edge, so parallel edges count separately
                remaining[v] -= 1
                if remaining[v] == 0:
                    rank[v] = rank[u] + 1
                    queue.append(v)
    return rank


def attractor(bg: BlownUpGame) -> set[int]:
    return {v for v, r in enumerate(attractor_ranks(bg)) if r is not None}


@dataclass(frozen=True)
class SwitchConfigStrategy:
    player: Player
    moves: dict = field(default_factory=dict)  # (vertex, counters) -> successor vertex

    def move(self, state: GameState):
        return self.moves.get((state.vertex, state.counters))


@dataclass(frozen=True)
class PositionalStrategy:
    player: Player
    moves: dict = field(default_factory=dict)  # vertex -> successor vertex

    def move(self, state: GameState):
        return self.moves.get(state.vertex)


Strategy = Union[SwitchConfigStrategy, PositionalStrategy]


@dataclass(frozen=True)
class TwoPlayerVerdict:
    winner: Player
    strategy: SwitchConfigStrategy
    nodes: int
    edges: int
    attractor_size: int


def extract_strategy(bg: BlownUpGame, player: Player, ranks: list[int | None] | None = None) -> SwitchConfigStrategy:
    if ranks is None:
        ranks = attractor_ranks(bg)
    moves = {}
    owner = player.owner
    for v, state in enumerate(bg.nodes):
        out = bg.succ[v]
        if not out or bg.owner(v) is not owner:
            continue
        choice = out[0]
        if player is Player.REACHABILITY:
            if ranks[v] is None:
                continue
            # strict '<' keeps the earliest successor on ties
            best = None
            for u in out:
                if ranks[u] is not None and (best is None or ranks[u] < ranks[best]):
                    best = u
            choice = best
        elif ranks[v] is None:
            choice = next(u for u in out if ranks[u] is None)
        moves[(state.vertex, state.counters)] = bg.nodes[choice].vertex
    return SwitchConfigStrategy(player, moves)


def solve_two_player(game: Game, state_limit: int | None = None) -> TwoPlayerVerdict:
    bg = blow_up(game, state_limit)
    ranks = attractor_ranks(bg)
    winner = Player.REACHABILITY if ranks[0] is not None else Player.SAFETY
    strategy = extract_strategy(bg, winner, ranks)
    size = sum(r is not None for r in ranks)
    return TwoPlayerVerdict(winner, strategy, len(bg.nodes), bg.edge_count, size)


@dataclass(frozen=True)
class StrategyCheck:
    winning: bool
    counterexample: Play | None
    explored: int
    longest_play: int | None  # transitions, when every consistent play is finite


def _consistent_children(game: Game, strategy: Strategy, state: GameState) -> list[GameState]:
    v = state.vertex
    if not game.succ[v]:
        return []
    if game.owners[v] is strategy.player.owner:
        u = strategy.move(state)
        if u is None:
            raise UndefinedMove(f"strategy has no move at {game.describe(state)}")
        if u not in game.succ[v]:
            raise IllegalChoice(f"strategy moves {game.names[v]} to non-successor {u}")
        return [GameState(u, state.counters)]
    return next_states(game, state)


def verify_strategy(game: Game, strategy: Strategy, state_limit: int | None = None) -> StrategyCheck:
    """Explore every play consistent with the strategy.

    For the reachability player the strategy wins iff no consistent play
    hits a dead end or loops (infinite plays are safety wins).  For the
    safety player it wins iff no consistent play reaches the target.  The
    counterexample is the first bad play in depth-first order with
    successors taken in canonical order.
    """
    require_valid(game)
    reach = strategy.player is Player.REACHABILITY
    on_path: dict[GameState, int] = {}
    path: list[GameState] = []
    stack: list = []
    done: set[GameState] = set()
    depth: dict[GameState, int] = {}  # longest play from a finished, cycle-free state
    acyclic = True

    def bad(state):
        if state.vertex == game.target:
            return None if reach else Outcome.REACHED_TARGET
        if reach and not game.succ[state.vertex]:
            return Outcome.DEAD_END
        return None

    def visit(state):
        path.append(state)
        on_path[state] = len(path) - 1
        children = [] if state.vertex == game.target else _consistent_children(game, strategy, state)
        stack.append((state, children, iter(children)))
        return bad(state)

    outcome = visit(game.initial_state)
    while outcome is None and stack:
        state, children, it = stack[-1]
        child = next(it, None)
        if child is None:
            stack.pop()
            path.pop()
            del on_path[state]
            done.add(state)
            if all(c in depth for c in children):
                depth[state] = max((depth[c] + 1 for c in children), default=0)
            continue
        if child in on_path:
            if reach:
                path.append(child)
                return StrategyCheck(False, Play(tuple(path), Outcome.CYCLE, on_path[child]),
                                     len(done) + len(on_path), None)
            acyclic = False
            continue
        if child in done:
            continue
        if state_limit is not None and len(done) + len(on_path) >= state_limit:
            raise StateLimitExceeded(len(done) + len(on_path) + 1)
        outcome = visit(child)
    explored = len(done) + len(on_path)
    if outcome is not None:
        return StrategyCheck(False, Play(tuple(path), outcome), explored, None)
    longest = depth.get(game.initial_state) if acyclic else None
    return StrategyCheck(True, None, explored, longest)


@dataclass(frozen=True)
class PositionalSearch:
    exists: bool
    strategy: PositionalStrategy | None
    tried: int


def positional_strategies(game: Game, player: Player):
    """All positional strategies of ``player`` in canonical order.

    Choices are enumerated lexicographically over the player's vertices in
    index order, each ranging over its successor list in list order.
    """
    owned = [v for v, o in enumerate(game.owners) if o is player.owner and game.succ[v]]
    for combo in itertools.product(*(game.succ[v] for v in owned)):
        yield PositionalStrategy(player, dict(zip(owned, combo)))


def positional_strategy_count(game: Game, player: Player) -> int:
    count = 1
    for v, o in enumerate(game.owners):
        if o is player.owner and game.succ[v]:
            count *= len(game.succ[v])
    return count


def exists_winning_positional(game: Game, player: Player, state_limit: int | None = None,
                              enumeration_cap: int = 1 << 16) -> PositionalSearch:
    total = positional_strategy_count(game, player)
    if total > enumeration_cap:
        raise EnumerationCapExceeded(f"{total} positional strategies exceed the cap of {enumeration_cap}")
    tried = 0
    for strategy in positional_strategies(game, player):
        tried += 1
        if verify_strategy(game, strategy, state_limit).winning:
            return PositionalSearch(True, strategy, tried)
    return PositionalSearch(False, None, tried)
