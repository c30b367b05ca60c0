"""Seeded random games for test corpora."""
from __future__ import annotations

import random

from .core import Game, Owner


def random_game(vertices: int, players: int, max_order: int, seed: int) -> Game:
    """Random game on ``vertices`` vertices, start ``v0`` and target the last vertex.

    ``players`` restricts ownership: 0 gives only switching vertices, 1 adds
    reachability vertices, 2 adds safety vertices too.  Switching orders
    have length 1..max_order with repetition; player vertices get 0..max_order
    distinct successors.  Identical arguments give identical games.
    """
    if vertices < 1 or max_order < 1:
        raise ValueError("vertices and max_order must be positive")
    if players not in (0, 1, 2):
        raise ValueError("players must be 0, 1 or 2")
    rng = random.Random(seed)
    kinds = [Owner.SWITCH, Owner.REACH, Owner.SAFETY][: players + 1]
    owners, succ = [], []
    for _ in range(vertices):
        owner = kinds[rng.randrange(len(kinds))]
        if owner is Owner.SWITCH:
            out = [rng.randrange(vertices) for _ in range(rng.randint(1, max_order))]
        else:
            out = rng.sample(range(vertices), min(vertices, rng.randint(0, max_order)))
        owners.append(owner)
        succ.append(tuple(out))
    return Game(tuple(owners), tuple(succ), 0, vertices - 1)
