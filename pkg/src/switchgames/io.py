"""Text formats: native games, DIMACS, QDIMACS, digraphs, flows, strategies, DOT.

Every parser either returns a complete value or raises :class:`ParseError`
carrying all diagnostics it found, each with a 1-based line and column.
Warnings are appended to the optional ``warnings`` list.
"""
from __future__ import annotations

import enum
import re
from collections import defaultdict
from dataclasses import dataclass

from .core import Game, Owner, Player
from .errors import SwitchGameError
from .flows import ControlledSwitchingFlow, position_flows
from .reductions import And, CnfFormula, Digraph, Lit, Or, QbfFormula, Quantifier
from .twoplayer import PositionalStrategy, Strategy, SwitchConfigStrategy

NAME_RE = re.compile(r"[A-Za-z0-9_.]+\Z")
INT_RE = re.compile(r"-?[0-9]+\Z")


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: Severity = Severity.ERROR

    def __str__(self):
        return f"{self.line}:{self.column}: {self.severity.value}: {self.message}"


class ParseError(SwitchGameError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


def _tokenize(text: str, comment: str = "#"):
    """Yield (line number, [(column, token), ...]) for non-blank lines."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        cut = raw.find(comment) if comment else -1
        if cut >= 0:
            raw = raw[:cut]
        tokens = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", raw)]
        if tokens:
            yield lineno, tokens


def _end_position(text: str) -> tuple[int, int]:
    return max(1, len(text.splitlines())), 1


class _Diagnostics:
    def __init__(self, warnings):
        self.errors = []
        self.warnings = warnings

    def error(self, line, col, msg):
        self.errors.append(ParseDiagnostic(line, col, msg))

    def warn(self, line, col, msg):
        if self.warnings is not None:
            self.warnings.append(ParseDiagnostic(line, col, msg, Severity.WARNING))

    def raise_if_any(self):
        if self.errors:
            raise ParseError(sorted(self.errors, key=lambda d: (d.line, d.column)))


def _parse_int(diag, line, col, token, what, minimum=None):
    if not INT_RE.match(token):
        diag.error(line, col, f"{what} must be an integer, got {token!r}")
        return None
    value = int(token)
    if minimum is not None and value < minimum:
        diag.error(line, col, f"{what} must be at least {minimum}, got {value}")
        return None
    return value


# -- native game format -------------------------------------------------------

_OWNER_CODES = {o.value: o for o in Owner}


def parse_game(text: str, warnings: list | None = None) -> Game:
    diag = _Diagnostics(warnings)
    names: list[str] = []
    owners: list[Owner] = []
    declared: dict[str, tuple[int, int]] = {}
    edges: dict[str, tuple[str, int, int, list]] = {}
    endpoints: dict[str, tuple[str, int, int]] = {}
    for line, tokens in _tokenize(text):
        (col, kw), args = tokens[0], tokens[1:]
        if kw == "vertex":
            if len(args) != 2:
                diag.error(line, col, "expected: vertex <name> R|S|W")
                continue
            (ncol, name), (ocol, code) = args
            if not NAME_RE.match(name):
                diag.error(line, ncol, f"invalid vertex name {name!r}")
                continue
            if name in declared:
                diag.error(line, ncol, f"vertex {name} redefined (first at line {declared[name][0]})")
                continue
            if code not in _OWNER_CODES:
                diag.error(line, ocol, f"unknown owner {code!r} (expected R, S or W)")
                continue
            declared[name] = (line, ncol)
            names.append(name)
            owners.append(_OWNER_CODES[code])
        elif kw in ("order", "succ"):
            if not args:
                diag.error(line, col, f"expected: {kw} <name> <successor>...")
                continue
            ncol, name = args[0]
            if name in edges:
                diag.error(line, ncol, f"{edges[name][0]} of {name} redefined")
                continue
            edges[name] = (kw, line, ncol, args[1:])
        elif kw in ("start", "target"):
            if len(args) != 1:
                diag.error(line, col, f"expected: {kw} <name>")
                continue
            if kw in endpoints:
                diag.error(line, col, f"{kw} redefined")
                continue
            endpoints[kw] = (args[0][1], line, args[0][0])
        else:
            diag.error(line, col, f"unknown directive {kw!r}")
    index = {n: i for i, n in enumerate(names)}
    succ: list[tuple[int, ...]] = [()] * len(names)
    for name, (kw, line, ncol, refs) in edges.items():
        if name not in index:
            diag.error(line, ncol, f"undeclared vertex {name}")
            continue
        v = index[name]
        is_switch = owners[v] is Owner.SWITCH
        if kw == "order" and not is_switch:
            diag.error(line, ncol, f"{name} is a player vertex; use 'succ'")
        elif kw == "succ" and is_switch:
            diag.error(line, ncol, f"{name} is a switching vertex; use 'order'")
        out = []
        for rcol, ref in refs:
            if ref not in index:
                diag.error(line, rcol, f"undeclared vertex {ref}")
            else:
                out.append(index[ref])
        succ[v] = tuple(out)
    for v, name in enumerate(names):
        if owners[v] is Owner.SWITCH and not (name in edges and edges[name][3]):
            line, col = declared[name]
            diag.error(line, col, f"switching vertex {name} has an empty order")
    ends = {}
    for kw in ("start", "target"):
        if kw not in endpoints:
            line, col = _end_position(text)
            diag.error(line, col, f"missing {kw}")
            continue
        name, line, col = endpoints[kw]
        if name not in index:
            diag.error(line, col, f"undeclared vertex {name}")
        else:
            ends[kw] = index[name]
    diag.raise_if_any()
    return Game(tuple(owners), tuple(succ), ends["start"], ends["target"], tuple(names))


def serialize_game(game: Game) -> str:
    lines = []
    for v, (name, owner) in enumerate(zip(game.names, game.owners)):
        if not NAME_RE.match(name):
            raise ValueError(f"vertex name {name!r} cannot be serialized")
        lines.append(f"vertex {name} {owner.value}")
        if game.succ[v]:
            kw = "order" if owner is Owner.SWITCH else "succ"
            lines.append(f"{kw} {name} " + " ".join(game.names[u] for u in game.succ[v]))
    lines.append(f"start {game.names[game.start]}")
    lines.append(f"target {game.names[game.target]}")
    return "\n".join(lines) + "\n"


# -- DIMACS CNF and QDIMACS -----------------------------------------------------

def _parse_header(diag, line, tokens):
    if len(tokens) != 4 or tokens[1][1] != "cnf":
        diag.error(line, tokens[0][0], "expected header: p cnf <variables> <clauses>")
        return None
    nv = _parse_int(diag, line, tokens[2][0], tokens[2][1], "variable count", 0)
    nc = _parse_int(diag, line, tokens[3][0], tokens[3][1], "clause count", 0)
    if nv is None or nc is None:
        return None
    return nv, nc


def _parse_cnf_body(text, diag, allow_prefix):
    header = None
    prefix: list[tuple[Quantifier, int, int, int]] = []
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    started_clauses = False
    last = (1, 1)
    for line, tokens in _tokenize(text, comment=""):
        col, first = tokens[0]
        if first == "c":
            continue
        if first == "%":
            break
        if first == "p":
            if header is not None:
                diag.error(line, col, "header redefined")
            else:
                header = _parse_header(diag, line, tokens) or (0, 0)
                header = (header[0], header[1], line)
            continue
        if header is None:
            diag.error(line, col, "data before the 'p cnf' header")
            return None
        if first in ("e", "a"):
            if not allow_prefix:
                diag.error(line, col, "quantifier line in a plain CNF file")
                continue
            if started_clauses:
                diag.error(line, col, "quantifier line after the first clause")
                continue
            if tokens[-1][1] != "0":
                diag.error(line, tokens[-1][0], "quantifier line must end with 0")
            for vcol, tok in tokens[1:]:
                if tok == "0":
                    break
                var = _parse_int(diag, line, vcol, tok, "variable", 1)
                if var is None:
                    continue
                if var > header[0]:
                    diag.error(line, vcol, f"variable {var} exceeds declared count {header[0]}")
                prefix.append((Quantifier(first), var, line, vcol))
            continue
        started_clauses = True
        for lcol, tok in tokens:
            last = (line, lcol)
            lit = _parse_int(diag, line, lcol, tok, "literal")
            if lit is None:
                continue
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > header[0]:
                diag.error(line, lcol, f"literal {lit} exceeds declared variable count {header[0]}")
            else:
                current.append(lit)
    if header is None:
        line, col = _end_position(text)
        diag.error(line, col, "missing 'p cnf' header")
        return None
    if current:
        diag.warn(*last, "last clause is not terminated by 0")
        clauses.append(tuple(current))
    if len(clauses) != header[1]:
        diag.warn(header[2], 1, f"header declares {header[1]} clauses, found {len(clauses)}")
    return header[0], clauses, prefix


def parse_dimacs_cnf(text: str, warnings: list | None = None) -> CnfFormula:
    diag = _Diagnostics(warnings)
    body = _parse_cnf_body(text, diag, allow_prefix=False)
    diag.raise_if_any()
    nv, clauses, _ = body
    return CnfFormula(nv, tuple(clauses))


def serialize_dimacs_cnf(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines += [" ".join(map(str, c + (0,))) for c in f.clauses]
    return "\n".join(lines) + "\n"


def parse_qdimacs(text: str, warnings: list | None = None) -> QbfFormula:
    """QDIMACS to a closed QBF whose matrix is an And of Ors of literals."""
    diag = _Diagnostics(warnings)
    body = _parse_cnf_body(text, diag, allow_prefix=True)
    if body is not None:
        nv, clauses, prefix = body
        seen = {}
        for _, var, line, col in prefix:
            if var in seen:
                diag.error(line, col, f"variable {var} quantified twice (first at line {seen[var]})")
            seen.setdefault(var, line)
        free = sorted({abs(l) for c in clauses for l in c} - set(seen))
        for var in free:
            line, col = _end_position(text)
            diag.error(line, col, f"variable {var} is free (not quantified)")
    diag.raise_if_any()
    ordered = []
    for q, var, _, _ in prefix:
        if var not in {v for _, v in ordered}:
            ordered.append((q, var))
    matrix = And(tuple(Or(tuple(Lit(l) for l in c)) for c in clauses))
    return QbfFormula(tuple(ordered), matrix)


def qbf_num_vars(q: QbfFormula) -> int:
    vars_ = [v for _, v in q.prefix]
    return max(vars_, default=0)


def serialize_qdimacs(q: QbfFormula, num_vars: int | None = None) -> str:
    """Inverse of :func:`parse_qdimacs`; the matrix must be an And of Ors of literals."""
    m = q.matrix
    if not (isinstance(m, And) and all(isinstance(c, Or) and all(isinstance(l, Lit) for l in c.children)
                                       for c in m.children)):
        raise ValueError("only CNF matrices can be written as QDIMACS")
    nv = qbf_num_vars(q) if num_vars is None else num_vars
    lines = [f"p cnf {nv} {len(m.children)}"]
    blocks: list[tuple[Quantifier, list[int]]] = []
    for quant, var in q.prefix:
        if blocks and blocks[-1][0] is quant:
            blocks[-1][1].append(var)
        else:
            blocks.append((quant, [var]))
    lines += [f"{quant.value} " + " ".join(map(str, vs)) + " 0" for quant, vs in blocks]
    lines += [" ".join(str(l.literal) for l in c.children) + " 0" for c in m.children]
    return "\n".join(lines) + "\n"


# -- digraphs ------------------------------------------------------------------

def parse_digraph(text: str, warnings: list | None = None) -> Digraph:
    """First line ``n m s t``, then ``m`` lines ``u v`` (0-based vertices)."""
    diag = _Diagnostics(warnings)
    rows = list(_tokenize(text))
    if not rows:
        diag.error(1, 1, "missing header line 'n m s t'")
        diag.raise_if_any()
    line, header = rows[0]
    values = None
    if len(header) != 4:
        diag.error(line, header[0][0], "expected header line 'n m s t'")
    else:
        what = ("vertex count", "edge count", "s", "t")
        values = [_parse_int(diag, line, c, tok, w, 0) for (c, tok), w in zip(header, what)]
    diag.raise_if_any()
    n, m, s, t = values
    for (c, _), label, x in ((header[2], "s", s), (header[3], "t", t)):
        if x >= n:
            diag.error(line, c, f"{label}={x} is not a vertex (n={n})")
    edges = []
    for line, toks in rows[1:]:
        if len(toks) != 2:
            diag.error(line, toks[0][0], "expected edge line 'u v'")
            continue
        pair = [_parse_int(diag, line, c, tok, "vertex", 0) for c, tok in toks]
        if None in pair:
            continue
        for (c, _), x in zip(toks, pair):
            if x >= n:
                diag.error(line, c, f"vertex {x} out of range (n={n})")
        edges.append(tuple(pair))
    if len(edges) != m and not diag.errors:
        line, col = _end_position(text)
        diag.error(line, col, f"header declares {m} edges, found {len(edges)}")
    diag.raise_if_any()
    return Digraph(n, tuple(edges), s, t)


def serialize_digraph(g: Digraph) -> str:
    lines = [f"{g.num_vertices} {len(g.edges)} {g.s} {g.t}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


# -- flows ---------------------------------------------------------------------

def parse_flow(text: str, game: Game, warnings: list | None = None) -> ControlledSwitchingFlow:
    """Lines ``switch <v> <T>`` and ``reach <v> <succ> <count>``; missing entries are 0."""
    diag = _Diagnostics(warnings)
    reach: dict[tuple[int, int], int] = {}
    switch: dict[int, int] = {}

    def vertex(line, col, name):
        if name not in game.name_index:
            diag.error(line, col, f"unknown vertex {name}")
            return None
        return game.name_index[name]

    for line, tokens in _tokenize(text):
        (col, kw), args = tokens[0], tokens[1:]
        if kw == "switch" and len(args) == 2:
            v = vertex(line, *args[0])
            count = _parse_int(diag, line, args[1][0], args[1][1], "throughput", 0)
            if v is None or count is None:
                continue
            if game.owners[v] is not Owner.SWITCH:
                diag.error(line, args[0][0], f"{args[0][1]} is not a switching vertex")
            elif v in switch:
                diag.error(line, col, f"throughput of {args[0][1]} redefined")
            else:
                switch[v] = count
        elif kw == "reach" and len(args) == 3:
            v = vertex(line, *args[0])
            u = vertex(line, *args[1])
            count = _parse_int(diag, line, args[2][0], args[2][1], "count", 0)
            if v is None or u is None or count is None:
                continue
            if game.owners[v] is not Owner.REACH:
                diag.error(line, args[0][0], f"{args[0][1]} is not a reachability vertex")
            elif u not in game.succ[v]:
                diag.error(line, args[1][0], f"{args[1][1]} is not a successor of {args[0][1]}")
            elif (v, u) in reach:
                diag.error(line, col, f"flow on {args[0][1]} -> {args[1][1]} redefined")
            else:
                reach[(v, u)] = count
        else:
            diag.error(line, col, "expected 'switch <vertex> <T>' or 'reach <vertex> <successor> <count>'")
    diag.raise_if_any()
    return ControlledSwitchingFlow(reach, switch)


def serialize_flow(game: Game, flow: ControlledSwitchingFlow) -> str:
    lines = []
    for v, name in enumerate(game.names):
        if game.owners[v] is Owner.SWITCH:
            if flow.throughput(v):
                lines.append(f"switch {name} {flow.throughput(v)}")
        else:
            for u in game.succ[v]:
                if flow.reach_flow.get((v, u), 0):
                    lines.append(f"reach {name} {game.names[u]} {flow.reach_flow[(v, u)]}")
    return "".join(line + "\n" for line in lines)


# -- strategies ------------------------------------------------------------------

def parse_strategy(text: str, game: Game, warnings: list | None = None) -> Strategy:
    """``player reachability|safety`` then ``move <v> <counters>|* <succ>`` lines.

    Counter vectors are comma-separated, one entry per switching vertex in
    vertex order; ``-`` is the empty vector of a game without switches.
    """
    diag = _Diagnostics(warnings)
    player = None
    kinds = set()
    moves = {}
    k = len(game.switches)
    for line, tokens in _tokenize(text):
        (col, kw), args = tokens[0], tokens[1:]
        if kw == "player" and len(args) == 1:
            if player is not None:
                diag.error(line, col, "player redefined")
            elif args[0][1] not in ("reachability", "safety"):
                diag.error(line, args[0][0], "player must be 'reachability' or 'safety'")
            else:
                player = Player(args[0][1])
            continue
        if kw != "move" or len(args) != 3:
            diag.error(line, col, "expected 'move <vertex> <counters>|* <successor>'")
            continue
        (vcol, vname), (ccol, ctext), (scol, sname) = args
        v = game.name_index.get(vname)
        u = game.name_index.get(sname)
        if v is None:
            diag.error(line, vcol, f"unknown vertex {vname}")
        if u is None:
            diag.error(line, scol, f"unknown vertex {sname}")
        if v is None or u is None:
            continue
        if u not in game.succ[v]:
            diag.error(line, scol, f"{sname} is not a successor of {vname}")
            continue
        if ctext == "*":
            kinds.add("positional")
            key = v
        else:
            kinds.add("config")
            parts = [] if ctext == "-" else ctext.split(",")
            if len(parts) != k or not all(re.fullmatch(r"[0-9]+", p) for p in parts):
                diag.error(line, ccol, f"counter vector must have {k} comma-separated entries")
                continue
            counters = tuple(int(p) for p in parts)
            if any(c >= len(game.succ[w]) for c, w in zip(counters, game.switches)):
                diag.error(line, ccol, "counter value exceeds its order length")
                continue
            key = (v, counters)
        if key in moves:
            diag.error(line, vcol, "move redefined")
            continue
        moves[key] = u
    if player is None:
        line, col = _end_position(text)
        diag.error(line, col, "missing 'player' line")
    if len(kinds) > 1:
        line, col = _end_position(text)
        diag.error(line, col, "positional and switch-configuration moves are mixed")
    diag.raise_if_any()
    if kinds == {"positional"}:
        return PositionalStrategy(player, moves)
    return SwitchConfigStrategy(player, moves)


def _vector(counters) -> str:
    return ",".join(map(str, counters)) if counters else "-"


def serialize_strategy(game: Game, strategy: Strategy) -> str:
    lines = [f"player {strategy.player.value}"]
    if isinstance(strategy, PositionalStrategy):
        for v in sorted(strategy.moves):
            lines.append(f"move {game.names[v]} * {game.names[strategy.moves[v]]}")
    else:
        for v, counters in sorted(strategy.moves):
            u = strategy.moves[(v, counters)]
            lines.append(f"move {game.names[v]} {_vector(counters)} {game.names[u]}")
    return "\n".join(lines) + "\n"


# -- DOT -------------------------------------------------------------------------

_SHAPES = {Owner.REACH: "box", Owner.SAFETY: "triangle", Owner.SWITCH: "circle"}


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(game: Game, flow: ControlledSwitchingFlow | None = None,
               strategy: Strategy | None = None) -> str:
    """Graphviz rendering: boxes for reachability, triangles for safety,
    circles for switching vertices with 1-based order positions on their edges."""
    chosen: dict[tuple[int, int], int] = defaultdict(int)
    if strategy is not None:
        for key, u in strategy.moves.items():
            v = key if isinstance(strategy, PositionalStrategy) else key[0]
            chosen[(v, u)] += 1
    out = ["digraph game {", "  rankdir=TB;", '  __start [shape=point, label=""];']
    for v, (name, owner) in enumerate(zip(game.names, game.owners)):
        attrs = [f"shape={_SHAPES[owner]}", f"label={_quote(name)}"]
        if v == game.target:
            attrs.append("peripheries=2")
        out.append(f"  {_quote(name)} [{', '.join(attrs)}];")
    out.append(f"  __start -> {_quote(game.names[game.start])};")
    for v, name in enumerate(game.names):
        if game.owners[v] is Owner.SWITCH:
            order = game.succ[v]
            per_pos = position_flows(flow.throughput(v), len(order)) if flow is not None else None
            for j, u in enumerate(order):
                label = str(j + 1)
                if per_pos is not None:
                    label += f" [{per_pos[j]}]"
                out.append(f"  {_quote(name)} -> {_quote(game.names[u])} [label={_quote(label)}];")
        else:
            for u in game.succ[v]:
                attrs = []
                if flow is not None:
                    attrs.append(f"label={_quote(str(flow.reach_flow.get((v, u), 0)))}")
                if chosen.get((v, u)):
                    attrs.append("penwidth=2.5")
                    attrs.append("color=blue")
                    if isinstance(strategy, SwitchConfigStrategy):
                        attrs.append(f"xlabel={_quote(f'x{chosen[(v, u)]}')}")
                suffix = f" [{', '.join(attrs)}]" if attrs else ""
                out.append(f"  {_quote(name)} -> {_quote(game.names[u])}{suffix};")
    out.append("}")
    return "\n".join(out) + "\n"
