"""Game model and exact step semantics of reachability switching games.

A game is a directed graph whose vertices are owned by the reachability
player, the safety player, or by nobody (switching vertices).  Switching
vertices route the token through a fixed cyclic order of successors, one
position per visit, like a rotor router.  A state is the current vertex
together with the position counter of every switching vertex.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    ChoiceRequired,
    IllegalChoice,
    InvalidGame,
    NotAPlayerVertex,
    NotASwitchVertex,
)


class Owner(enum.Enum):
    REACH = "R"
    SAFETY = "S"
    SWITCH = "W"


class Player(enum.Enum):
    REACHABILITY = "reachability"
    SAFETY = "safety"

    @property
    def owner(self) -> Owner:
        return Owner.REACH if self is Player.REACHABILITY else Owner.SAFETY

    @property
    def opponent(self) -> Player:
        return Player.SAFETY if self is Player.REACHABILITY else Player.REACHABILITY


class Terminal(enum.Enum):
    TARGET = "target"
    DEAD_END = "dead-end"
    LIVE = "live"


class Outcome(enum.Enum):
    REACHED_TARGET = "reached-target"
    DEAD_END = "dead-end"
    CYCLE = "cycle"
    TRUNCATED = "truncated"


class GameState(NamedTuple):
    """Current vertex plus the counter vector, aligned with ``Game.switches``."""

    vertex: int
    counters: tuple[int, ...]


@dataclass(frozen=True)
class Violation:
    rule: str
    vertex: int | None = None
    detail: object = None

    def __str__(self):
        parts = [self.rule]
        if self.vertex is not None:
            parts.append(f"vertex {self.vertex}")
        if self.detail is not None:
            parts.append(str(self.detail))
        return ": ".join(parts)


@dataclass(frozen=True)
class Game:
    """Immutable game tuple.

    ``succ[v]`` is the successor list of a player vertex (duplicates are
    collapsed, first occurrence wins) or the switching order of a switching
    vertex (repetition allowed).  Construction never fails; call
    :func:`validate` or :func:`require_valid` to check the invariants.
    """

    owners: tuple[Owner, ...]
    succ: tuple[tuple[int, ...], ...]
    start: int
    target: int
    names: tuple[str, ...] = ()
    switches: tuple[int, ...] = field(init=False, repr=False, compare=False)
    switch_slot: dict = field(init=False, repr=False, compare=False)
    name_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        owners = tuple(self.owners)
        succ = []
        for v, out in enumerate(self.succ):
            out = tuple(out)
            if v < len(owners) and owners[v] is not Owner.SWITCH:
                out = tuple(dict.fromkeys(out))
            succ.append(out)
        names = tuple(self.names) if self.names else tuple(f"v{i}" for i in range(len(owners)))
        object.__setattr__(self, "owners", owners)
        object.__setattr__(self, "succ", tuple(succ))
        object.__setattr__(self, "names", names)
        switches = tuple(v for v, o in enumerate(owners) if o is Owner.SWITCH)
        object.__setattr__(self, "switches", switches)
        object.__setattr__(self, "switch_slot", {v: i for i, v in enumerate(switches)})
        object.__setattr__(self, "name_index", {n: i for i, n in enumerate(names)})

    def __len__(self):
        return len(self.owners)

    @property
    def initial_state(self) -> GameState:
        return GameState(self.start, (0,) * len(self.switches))

    def vertex(self, name: str) -> int:
        return self.name_index[name]

    def name(self, v: int) -> str:
        return self.names[v]

    def order_lengths(self) -> tuple[int, ...]:
        return tuple(len(self.succ[v]) for v in self.switches)

    def state_space_bound(self) -> int:
        bound = len(self.owners)
        for k in self.order_lengths():
            bound *= k
        return bound

    def describe(self, state: GameState) -> str:
        return f"{self.names[state.vertex]} [{','.join(map(str, state.counters))}]"


class GameBuilder:
    """Assemble a game by vertex name; successors may be forward references."""

    def __init__(self):
        self._names: list[str] = []
        self._owners: list[Owner] = []
        self._succ: dict[str, list[str]] = {}
        self._index: dict[str, int] = {}

    def add(self, name: str, owner: Owner, succ: Iterable[str] = ()) -> str:
        if name in self._index:
            raise ValueError(f"duplicate vertex name {name!r}")
        self._index[name] = len(self._names)
        self._names.append(name)
        self._owners.append(owner)
        self._succ[name] = list(succ)
        return name

    def set_succ(self, name: str, succ: Iterable[str]) -> None:
        self._succ[name] = list(succ)

    def __contains__(self, name):
        return name in self._index

    def build(self, start: str, target: str) -> Game:
        succ = tuple(tuple(self._index[u] for u in self._succ[n]) for n in self._names)
        return Game(tuple(self._owners), succ, self._index[start], self._index[target], tuple(self._names))


def validate(game: Game) -> list[Violation]:
    n = len(game.owners)
    out = []
    if len(game.succ) != n:
        out.append(Violation("SuccessorTableSize", None, f"{len(game.succ)} rows for {n} vertices"))
    if len(game.names) != n:
        out.append(Violation("NameTableSize", None, f"{len(game.names)} names for {n} vertices"))
    seen = {}
    for v, name in enumerate(game.names):
        if name in seen:
            out.append(Violation("DuplicateName", v, name))
        seen.setdefault(name, v)
    for v, owner in enumerate(game.owners):
        if not isinstance(owner, Owner):
            out.append(Violation("UnknownOwner", v, owner))
        out_edges = game.succ[v] if v < len(game.succ) else ()
        for u in out_edges:
            if not (isinstance(u, int) and 0 <= u < n):
                out.append(Violation("UnknownSuccessor", v, u))
        if owner is Owner.SWITCH and not out_edges:
            out.append(Violation("EmptyOrder", v))
    for label, v in (("start", game.start), ("target", game.target)):
        if not (isinstance(v, int) and 0 <= v < n):
            out.append(Violation("InvalidEndpoint", None, f"{label}={v}"))
    return out


def require_valid(game: Game) -> None:
    violations = validate(game)
    if violations:
        raise InvalidGame(violations)


def update_counters(game: Game, counters: Sequence[int], v: int) -> tuple[int, ...]:
    slot = game.switch_slot.get(v)
    if slot is None:
        raise NotASwitchVertex(f"{game.names[v]} is not a switching vertex")
    new = list(counters)
    new[slot] = (new[slot] + 1) % len(game.succ[v])
    return tuple(new)


def successor(game: Game, state: GameState) -> GameState:
    v = state.vertex
    slot = game.switch_slot.get(v)
    if slot is None:
        raise NotASwitchVertex(f"{game.names[v]} is not a switching vertex")
    order = game.succ[v]
    pos = state.counters[slot]
    counters = state.counters[:slot] + ((pos + 1) % len(order),) + state.counters[slot + 1:]
    return GameState(order[pos], counters)


def step_with_choice(game: Game, state: GameState, choice: int) -> GameState:
    v = state.vertex
    if game.owners[v] is Owner.SWITCH:
        raise NotAPlayerVertex(f"{game.names[v]} is a switching vertex")
    if choice not in game.succ[v]:
        raise IllegalChoice(f"{game.names[choice] if 0 <= choice < len(game) else choice} "
                            f"is not a successor of {game.names[v]}")
    return GameState(choice, state.counters)


def is_terminal(game: Game, state: GameState) -> Terminal:
    if state.vertex == game.target:
        return Terminal.TARGET
    if not game.succ[state.vertex]:
        return Terminal.DEAD_END
    return Terminal.LIVE


def next_states(game: Game, state: GameState) -> list[GameState]:
    """All successor states of a live state, in canonical order."""
    if game.owners[state.vertex] is Owner.SWITCH:
        return [successor(game, state)]
    return [GameState(u, state.counters) for u in game.succ[state.vertex]]


def player_count(game: Game) -> int:
    """0, 1 or 2 according to which players actually face a choice.

    A player vertex with a single successor is a forced move and a player
    vertex without successors is a sink, so neither makes its owner a player.
    Any safety vertex with an outgoing edge makes the game two-player, since
    the one-player certificate only accounts for reachability edges.
    """
    reach_choice = any(o is Owner.REACH and len(s) >= 2 for o, s in zip(game.owners, game.succ))
    safety_edges = [len(s) for o, s in zip(game.owners, game.succ) if o is Owner.SAFETY]
    if any(k >= 2 for k in safety_edges):
        return 2
    if reach_choice:
        return 2 if any(safety_edges) else 1
    return 0


def is_one_player(game: Game) -> bool:
    return all(not s for o, s in zip(game.owners, game.succ) if o is Owner.SAFETY)


@dataclass(frozen=True)
class Play:
    states: tuple[GameState, ...]
    outcome: Outcome
    repeat_index: int | None = None

    @property
    def transitions(self) -> int:
        return len(self.states) - 1

    @property
    def final(self) -> GameState:
        return self.states[-1]

    def vertices(self) -> list[int]:
        return [s.vertex for s in self.states]

    def describe(self, game: Game) -> str:
        if self.outcome is Outcome.REACHED_TARGET:
            return "REACHED"
        if self.outcome is Outcome.DEAD_END:
            return f"DEAD END at {game.names[self.final.vertex]}"
        if self.outcome is Outcome.CYCLE:
            return f"CYCLE at step {self.transitions} (repeats step {self.repeat_index})"
        return "TRUNCATED"


def run_zero_player(game: Game, step_limit: int | None = None) -> Play:
    """Simulate the deterministic walk from the initial state.

    Player vertices with exactly one successor are taken as forced moves.
    Without ``step_limit`` the walk always resolves, because the state space
    is finite and every repeated state is detected.
    """
    require_valid(game)
    state = game.initial_state
    states = [state]
    seen = {state: 0}
    owners, succ, target = game.owners, game.succ, game.target
    while True:
        v = state.vertex
        if v == target:
            return Play(tuple(states), Outcome.REACHED_TARGET)
        out = succ[v]
        if not out:
            return Play(tuple(states), Outcome.DEAD_END)
        if step_limit is not None and len(states) > step_limit:
            return Play(tuple(states), Outcome.TRUNCATED)
        if owners[v] is Owner.SWITCH:
            state = successor(game, state)
        elif len(out) == 1:
            state = GameState(out[0], state.counters)
        else:
            raise ChoiceRequired(v, game.names[v])
        first = seen.get(state)
        states.append(state)
        if first is not None:
            return Play(tuple(states), Outcome.CYCLE, first)
        seen[state] = len(states) - 1
