import json

import pytest

from gamelib import SAMPLE_CLAUSES
from switchgames import io as gio
from switchgames.cli import main
from switchgames.core import Owner
from switchgames.reductions import CnfFormula


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return path
    return write


MINIMAL = "vertex s W\norder s t\nvertex t R\nstart s\ntarget t\n"
WRAP_CYCLE = "vertex s W\norder s a a\nvertex a W\norder a s\nvertex t R\nstart s\ntarget t\n"
DETOUR = "vertex s W\norder s a t\nvertex a W\norder a s\nvertex t R\nstart s\ntarget t\n"


class TestSimulate:
    def test_reached(self, capsys, files):
        code, out, _ = run(capsys, "simulate", files("g", MINIMAL))
        assert code == 0
        assert out == "step 0: s [0]\nstep 1: t [0]\nREACHED\n"

    def test_cycle(self, capsys, files):
        code, out, _ = run(capsys, "simulate", files("g", WRAP_CYCLE))
        assert code == 1
        assert out.splitlines()[-1] == "CYCLE at step 4 (repeats step 0)"

    def test_truncated(self, capsys, files):
        code, out, _ = run(capsys, "simulate", files("g", DETOUR), "--limit", 1)
        assert code == 3 and out.splitlines()[-1] == "TRUNCATED"

    def test_choice_required(self, capsys, files):
        g = files("g", "vertex s R\nvertex t R\nsucc s t s\nstart s\ntarget t\n")
        code, _, err = run(capsys, "simulate", g)
        assert code == 2 and "vertex s needs a player choice" in err

    def test_json(self, capsys, files):
        code, out, _ = run(capsys, "simulate", files("g", MINIMAL), "--json")
        data = json.loads(out)
        assert code == 0 and data["outcome"] == "reached-target" and len(data["states"]) == 2


class TestSolveCertify:
    def test_sat_pipeline(self, capsys, files, tmp_path):
        cnf = files("f.cnf", gio.serialize_dimacs_cnf(CnfFormula(4, SAMPLE_CLAUSES)))
        game = tmp_path / "g.game"
        code, out, _ = run(capsys, "reduce", "sat", cnf, "-o", game)
        assert code == 0 and out.startswith("vertices 27 ")
        cert = tmp_path / "c.flow"
        code, out, err = run(capsys, "solve", game, "--emit-certificate", cert)
        assert code == 0 and out.splitlines()[0] == "WINNER reachability"
        assert err.startswith("time ")
        code, out, _ = run(capsys, "certify", game, cert, "--replay")
        assert code == 0
        assert out == "VALID\nreplay: reached target in 72 transitions\n"

    def test_invalid_flow(self, capsys, files):
        game = files("g", MINIMAL)
        code, out, _ = run(capsys, "certify", game, files("f", "switch s 2\n"))
        assert code == 1 and "INVALID: balance(t) = -2, expected -1" in out.splitlines()

    def test_memory_game(self, capsys, tmp_path):
        game, strat = tmp_path / "m.game", tmp_path / "m.strat"
        assert run(capsys, "reduce", "memory", 1, "-o", game)[0] == 0
        code, out, _ = run(capsys, "solve", game, "--emit-strategy", strat)
        assert code == 0 and out.startswith("WINNER reachability\nplayers 2 nodes 14 ")
        code, out, _ = run(capsys, "verify", game, strat)
        assert code == 0 and out.startswith("WINNING for reachability")

    def test_verify_counterexample(self, capsys, files, tmp_path):
        game = tmp_path / "m.game"
        run(capsys, "reduce", "memory", 1, "-o", game)
        strat = files("s", "player reachability\nmove g1.y * g1.a\n")
        code, out, _ = run(capsys, "verify", game, strat)
        assert code == 1
        assert out.splitlines()[:3] == ["NOT WINNING for reachability", "counterexample:", "  step 0: g1.x [0,0,0]"]

    def test_forall_safety(self, capsys, files, tmp_path):
        q = files("q", "p cnf 1 1\na 1 0\n1 0\n")
        game = tmp_path / "q.game"
        assert run(capsys, "reduce", "qbf", q, "-o", game)[0] == 0
        code, out, _ = run(capsys, "solve", game)
        assert code == 1 and out.startswith("WINNER safety")

    def test_state_limit(self, capsys, tmp_path):
        game = tmp_path / "m.game"
        run(capsys, "reduce", "memory", 2, "-o", game)
        code, _, err = run(capsys, "solve", game, "--state-limit", 3)
        assert code == 3 and err.startswith("LIMIT")

    def test_players_zero_choice(self, capsys, files):
        g = files("g", "vertex s R\nvertex t R\nsucc s t s\nstart s\ntarget t\n")
        code, _, err = run(capsys, "solve", g, "--players", 0)
        assert code == 2 and "vertex s" in err


class TestReduce:
    def test_stcon_size(self, capsys, files, tmp_path):
        out_path = tmp_path / "s.game"
        code, out, _ = run(capsys, "reduce", "stcon", files("d", "2 1 0 1\n0 1\n"), "-o", out_path)
        assert code == 0 and out.startswith("vertices 7 ")
        assert run(capsys, "simulate", out_path)[0] == 0

    def test_not_three_bounded(self, capsys, files, tmp_path):
        cnf = files("f", "p cnf 2 4\n2 0\n2 1 0\n-2 0\n2 -1 0\n")
        code, _, err = run(capsys, "reduce", "sat", cnf, "-o", tmp_path / "x")
        assert code == 2 and "variable x2 occurs 4 times (max 3)" in err

    def test_parse_error_names_line(self, capsys, files, tmp_path):
        code, _, err = run(capsys, "reduce", "sat", files("f", "p cnf 1 1\nx 0\n"), "-o", tmp_path / "x")
        assert code == 2 and ":2:1: error:" in err

    def test_bad_memory_arg(self, capsys, tmp_path):
        assert run(capsys, "reduce", "memory", "zero", "-o", tmp_path / "x")[0] == 2


class TestGenerate:
    def test_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for path in (a, b):
            run(capsys, "generate", "random", "--vertices", 7, "--players", 2, "--max-order", 3,
                "--seed", 9, "-o", path)
        assert a.read_bytes() == b.read_bytes()

    @pytest.mark.parametrize("seed", range(20))
    def test_shapes(self, capsys, tmp_path, seed):
        for players in (0, 1):
            path = tmp_path / f"g{players}"
            run(capsys, "generate", "random", "--vertices", 6, "--players", players, "--max-order", 3,
                "--seed", seed, "-o", path)
            game = gio.parse_game(path.read_text())
            if players == 0:
                assert all(len(game.succ[v]) < 2 for v, o in enumerate(game.owners) if o is not Owner.SWITCH)
            assert Owner.SAFETY not in game.owners

    def test_usage(self, capsys, tmp_path):
        code = run(capsys, "generate", "random", "--vertices", 0, "--players", 1, "--max-order", 2,
                   "--seed", 1, "-o", tmp_path / "x")[0]
        assert code == 2
        assert run(capsys, "solve")[0] == 2


def test_export_dot(capsys, tmp_path):
    game = tmp_path / "m.game"
    run(capsys, "reduce", "memory", 1, "-o", game)
    code, out, _ = run(capsys, "export", "dot", game)
    assert code == 0 and out.startswith("digraph game {") and out.count("shape=circle") == 3


def test_missing_file(capsys):
    code, _, err = run(capsys, "simulate", "/nonexistent/game")
    assert code == 2 and "cannot read" in err
