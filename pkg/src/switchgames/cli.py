"""Command-line entry point.

Exit codes: 0 reachability wins / certificate or strategy valid / success,
1 safety wins / invalid, 2 usage or input error, 3 resource limit hit.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import io as gio
from .core import Outcome, Player, player_count, run_zero_player
from .errors import (
    ChoiceRequired,
    MalformedFormula,
    NotOnePlayer,
    StateLimitExceeded,
    StrategyStuck,
    SwitchGameError,
    UndefinedMove,
)
from .flows import check_flow, run_marginal
from .generate import random_game
from .oneplayer import solve_one_player
from .reductions import from_3sat, from_qbf, from_stcon, memory_game
from .twoplayer import solve_two_player, verify_strategy

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _load(path: str, parser, *args):
    try:
        return parser(_read(path), *args)
    except gio.ParseError as exc:
        raise UsageError("\n".join(f"{path}:{d}" for d in exc.diagnostics)) from exc


def _emit(args, lines: list[str], payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _state_json(game, state):
    return {"vertex": game.names[state.vertex], "counters": list(state.counters)}


def _play_json(game, play):
    return {
        "states": [_state_json(game, s) for s in play.states],
        "outcome": play.outcome.value,
        "repeat_index": play.repeat_index,
    }


def _transcript(game, play) -> list[str]:
    lines = [f"step {k}: {game.describe(s)}" for k, s in enumerate(play.states)]
    lines.append(play.describe(game))
    return lines


def cmd_simulate(args) -> int:
    game = _load(args.game, gio.parse_game)
    try:
        play = run_zero_player(game, args.limit)
    except ChoiceRequired as exc:
        raise UsageError(f"vertex {exc.name} needs a player choice; not a zero-player game") from exc
    _emit(args, _transcript(game, play), _play_json(game, play))
    if play.outcome is Outcome.REACHED_TARGET:
        return EXIT_OK
    if play.outcome is Outcome.TRUNCATED:
        return EXIT_LIMIT
    return EXIT_NO


def cmd_solve(args) -> int:
    game = _load(args.game, gio.parse_game)
    players = player_count(game) if args.players == "auto" else int(args.players)
    began = time.perf_counter()
    payload = {"players": players}
    if players == 0:
        try:
            play = run_zero_player(game, args.state_limit)
        except ChoiceRequired as exc:
            raise UsageError(f"vertex {exc.name} needs a player choice; cannot solve as zero-player") from exc
        if play.outcome is Outcome.TRUNCATED:
            raise StateLimitExceeded(play.transitions)
        winner = Player.REACHABILITY if play.outcome is Outcome.REACHED_TARGET else Player.SAFETY
        payload.update(outcome=play.outcome.value, steps=play.transitions)
        stats = f"players 0 steps {play.transitions} outcome {play.outcome.value}"
    elif players == 1:
        verdict = solve_one_player(game, args.state_limit)
        winner = verdict.winner
        payload.update(states=verdict.explored_states)
        stats = f"players 1 states {verdict.explored_states}"
        if verdict.certificate is not None:
            payload["certificate_total"] = verdict.certificate.total()
            stats += f" certificate-total {verdict.certificate.total()}"
            if args.emit_certificate:
                _write(args.emit_certificate, gio.serialize_flow(game, verdict.certificate))
    else:
        verdict = solve_two_player(game, args.state_limit)
        winner = verdict.winner
        payload.update(nodes=verdict.nodes, edges=verdict.edges, attractor=verdict.attractor_size)
        stats = f"players 2 nodes {verdict.nodes} edges {verdict.edges} attractor {verdict.attractor_size}"
    if args.emit_strategy:
        strategy = verdict.strategy if players == 2 else solve_two_player(game, args.state_limit).strategy
        _write(args.emit_strategy, gio.serialize_strategy(game, strategy))
    if args.emit_certificate and players != 1:
        print("note: certificates exist only for one-player games; none written", file=sys.stderr)
    print(f"time {time.perf_counter() - began:.3f}s", file=sys.stderr)
    payload["winner"] = winner.value
    lines = [f"WINNER {winner.value}", stats]
    _emit(args, lines, payload)
    return EXIT_OK if winner is Player.REACHABILITY else EXIT_NO


def cmd_certify(args) -> int:
    game = _load(args.game, gio.parse_game)
    flow = _load(args.flow, gio.parse_flow, game)
    violations = check_flow(game, flow)
    payload = {"valid": not violations, "violations": [str(v) for v in violations], "total": flow.total()}
    if violations:
        _emit(args, [f"INVALID: {v}" for v in violations], payload)
        return EXIT_NO
    lines = ["VALID"]
    code = EXIT_OK
    if args.replay:
        try:
            play = run_marginal(game, flow)
        except NotOnePlayer as exc:
            raise UsageError(str(exc)) from exc
        except StrategyStuck as exc:
            lines.append(f"replay: stuck: {exc}")
            payload["replay"] = {"stuck": str(exc)}
            code = EXIT_NO
        else:
            payload["replay"] = _play_json(game, play)
            if play.outcome is Outcome.REACHED_TARGET:
                lines.append(f"replay: reached target in {play.transitions} transitions")
            else:
                lines.append(f"replay: {play.describe(game)}")
                code = EXIT_NO
    _emit(args, lines, payload)
    return code


def cmd_verify(args) -> int:
    game = _load(args.game, gio.parse_game)
    strategy = _load(args.strategy, gio.parse_strategy, game)
    try:
        check = verify_strategy(game, strategy, args.state_limit)
    except UndefinedMove as exc:
        _emit(args, [f"NOT WINNING: {exc}"], {"winning": False, "undefined_move": str(exc)})
        return EXIT_NO
    payload = {"winning": check.winning, "explored": check.explored, "player": strategy.player.value,
               "longest_play": check.longest_play}
    if check.winning:
        lines = [f"WINNING for {strategy.player.value}", f"explored {check.explored}"]
        _emit(args, lines, payload)
        return EXIT_OK
    payload["counterexample"] = _play_json(game, check.counterexample)
    lines = [f"NOT WINNING for {strategy.player.value}", "counterexample:"]
    lines += ["  " + line for line in _transcript(game, check.counterexample)]
    _emit(args, lines, payload)
    return EXIT_NO


def cmd_reduce(args) -> int:
    if args.kind == "memory":
        try:
            n = int(args.source)
        except ValueError:
            raise UsageError(f"memory expects a positive integer, got {args.source!r}") from None
        if n < 1:
            raise UsageError("memory expects a positive integer")
        game = memory_game(n, swapped=args.swapped)
    else:
        parser = {"sat": gio.parse_dimacs_cnf, "qbf": gio.parse_qdimacs, "stcon": gio.parse_digraph}[args.kind]
        build = {"sat": from_3sat, "qbf": from_qbf, "stcon": from_stcon}[args.kind]
        source = _load(args.source, parser)
        try:
            game = build(source)
        except MalformedFormula as exc:
            raise UsageError(str(exc)) from exc
    _write(args.output, gio.serialize_game(game))
    positions = sum(len(game.succ[v]) for v in game.switches)
    _emit(args, [f"vertices {len(game)} switch-positions {positions}"],
          {"vertices": len(game), "switch_positions": positions})
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.vertices < 1 or args.max_order < 1:
        raise UsageError("--vertices and --max-order must be positive")
    game = random_game(args.vertices, args.players, args.max_order, args.seed)
    _write(args.output, gio.serialize_game(game))
    _emit(args, [f"vertices {len(game)}"], {"vertices": len(game)})
    return EXIT_OK


def cmd_export(args) -> int:
    game = _load(args.game, gio.parse_game)
    flow = _load(args.flow, gio.parse_flow, game) if args.flow else None
    strategy = _load(args.strategy, gio.parse_strategy, game) if args.strategy else None
    text = gio.export_dot(game, flow=flow, strategy=strategy)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    p = argparse.ArgumentParser(prog="switchgames", description="Reachability switching game solver")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="run the deterministic zero-player walk")
    s.add_argument("game")
    s.add_argument("--limit", type=_positive)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("solve", parents=[common], help="decide the winner")
    s.add_argument("game")
    s.add_argument("--players", choices=["auto", "0", "1", "2"], default="auto")
    s.add_argument("--state-limit", type=_positive)
    s.add_argument("--emit-certificate", metavar="PATH")
    s.add_argument("--emit-strategy", metavar="PATH")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("certify", parents=[common], help="check a controlled switching flow")
    s.add_argument("game")
    s.add_argument("flow")
    s.add_argument("--replay", action="store_true")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("verify", parents=[common], help="check a strategy against all opponent moves")
    s.add_argument("game")
    s.add_argument("strategy")
    s.add_argument("--state-limit", type=_positive)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("reduce", parents=[common], help="build a game from a problem instance")
    s.add_argument("kind", choices=["sat", "qbf", "stcon", "memory"])
    s.add_argument("source", help="input file, or n for memory")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--swapped", action="store_true", help="memory: exchange the players' roles")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("generate", parents=[common], help="write a seeded random game")
    s.add_argument("family", choices=["random"])
    s.add_argument("--vertices", type=int, required=True)
    s.add_argument("--players", type=int, choices=[0, 1, 2], required=True)
    s.add_argument("--max-order", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("export", parents=[common], help="render a game as Graphviz DOT")
    s.add_argument("format", choices=["dot"])
    s.add_argument("game")
    s.add_argument("--flow")
    s.add_argument("--strategy")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StateLimitExceeded as exc:
        print(f"LIMIT: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except SwitchGameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
