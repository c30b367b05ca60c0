"""Solvers, certificates and reductions for reachability switching games."""
from .core import (
    Game,
    GameBuilder,
    GameState,
    Outcome,
    Owner,
    Play,
    Player,
    Terminal,
    is_terminal,
    player_count,
    run_zero_player,
    step_with_choice,
    successor,
    update_counters,
    validate,
)
from .flows import ControlledSwitchingFlow, balance, check_flow, play_to_flow, run_marginal
from .oneplayer import OnePlayerVerdict, search_flow, solve_one_player
from .reductions import (
    CnfFormula,
    Digraph,
    QbfFormula,
    from_3sat,
    from_qbf,
    from_stcon,
    memory_game,
)
from .twoplayer import (
    PositionalStrategy,
    SwitchConfigStrategy,
    attractor,
    blow_up,
    exists_winning_positional,
    solve_two_player,
    verify_strategy,
)

__version__ = "0.1.0"

__all__ = [
    "ControlledSwitchingFlow",
    "balance",
    "check_flow",
    "play_to_flow",
    "run_marginal",
    "OnePlayerVerdict",
    "search_flow",
    "solve_one_player",
    "Game",
    "GameBuilder",
    "GameState",
    "Outcome",
    "Owner",
    "Play",
    "Player",
    "Terminal",
    "is_terminal",
    "player_count",
    "run_zero_player",
    "step_with_choice",
    "successor",
    "update_counters",
    "validate",
    "CnfFormula",
    "Digraph",
    "QbfFormula",
    "from_3sat",
    "from_qbf",
    "from_stcon",
    "memory_game",
    "PositionalStrategy",
    "SwitchConfigStrategy",
    "attractor",
    "blow_up",
    "exists_winning_positional",
    "solve_two_player",
    "verify_strategy",
]
