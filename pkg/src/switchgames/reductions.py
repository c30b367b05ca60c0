"""Gadget compilers from 3SAT, QBF and s-t connectivity into switching games.

All constructions name their vertices readably (``var3.true.count``,
``clause2.gate``, ``stcon.v4.k2``) so dumps and counterexamples can be
traced back to the gadget that produced them.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Union

from .core import Game, GameBuilder, Owner
from .errors import MalformedFormula, NotThreeBounded


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))

    def evaluate(self, assignment) -> bool:
        """``assignment[i]`` is the value of variable ``i + 1``."""
        return all(any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in c) for c in self.clauses)

    def check_well_formed(self) -> None:
        for j, clause in enumerate(self.clauses, 1):
            if not clause:
                raise MalformedFormula(f"clause {j} is empty")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise MalformedFormula(f"clause {j} mentions unknown variable {lit}")
            if len(set(clause)) != len(clause):
                raise MalformedFormula(f"clause {j} repeats a literal")
            if any(-lit in clause for lit in clause):
                raise MalformedFormula(f"clause {j} contains a variable and its negation")

    def check_three_bounded(self) -> None:
        self.check_well_formed()
        for j, clause in enumerate(self.clauses, 1):
            if len(clause) > 3:
                raise NotThreeBounded(f"clause {j} has {len(clause)} literals (max 3)")
        occurrences = Counter(abs(lit) for clause in self.clauses for lit in clause)
        for var in sorted(occurrences):
            if occurrences[var] > 3:
                raise NotThreeBounded(f"variable x{var} occurs {occurrences[var]} times (max 3)")


class Quantifier(enum.Enum):
    EXISTS = "e"
    FORALL = "a"


@dataclass(frozen=True)
class Lit:
    literal: int

    @property
    def var(self):
        return abs(self.literal)


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


Matrix = Union[And, Or, Lit]


def evaluate_matrix(node: Matrix, values: dict[int, bool]) -> bool:
    if isinstance(node, Lit):
        return values[node.var] == (node.literal > 0)
    if isinstance(node, And):
        return all(evaluate_matrix(c, values) for c in node.children)
    return any(evaluate_matrix(c, values) for c in node.children)


def matrix_nodes(node: Matrix):
    """Pre-order traversal."""
    yield node
    if not isinstance(node, Lit):
        for c in node.children:
            yield from matrix_nodes(c)


def matrix_depth(node: Matrix) -> int:
    if isinstance(node, Lit):
        return 0
    return 1 + max((matrix_depth(c) for c in node.children), default=0)


@dataclass(frozen=True)
class QbfFormula:
    prefix: tuple[tuple[Quantifier, int], ...]
    matrix: Matrix

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple((Quantifier(q), int(v)) for q, v in self.prefix))

    def check_well_formed(self) -> None:
        bound = [v for _, v in self.prefix]
        if len(set(bound)) != len(bound):
            raise MalformedFormula("a variable is quantified twice")
        if any(v <= 0 for v in bound):
            raise MalformedFormula("variables must be positive integers")
        for node in matrix_nodes(self.matrix):
            if isinstance(node, Lit) and node.var not in bound:
                raise MalformedFormula(f"variable {node.var} is free")

    @property
    def size(self) -> int:
        """Variables plus matrix parse-tree nodes."""
        return len(self.prefix) + sum(1 for _ in matrix_nodes(self.matrix))


@dataclass(frozen=True)
class Digraph:
    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    s: int
    t: int

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))


def counting_gadget(k: int, a_target, b_target) -> tuple:
    """Switching order that exits via ``a`` on visits 1..k and via ``b`` on visit k+1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return (a_target,) * k + (b_target,)


def from_3sat(f: CnfFormula) -> Game:
    """One-player game won by the reachability player iff ``f`` is satisfiable.

    Layout: ``start`` is the control counting gadget a^{3n+1}b; its a-exit
    feeds ``control.dist`` which cycles x1..xn, its b-exit is ``fail``.
    Variable ``i`` is the reachability vertex ``var{i}`` with a true and a
    false branch; each branch is an a^3b counter whose a-exit goes to a
    three-position router over the clauses that branch falsifies (padded with
    ``start``) and whose b-exit moves on to ``var{i+1}``.  ``var{n+1}`` is the
    target.  Clause ``j`` with l literals is the counter a^{l-1}b from
    ``start`` to ``fail``.
    """
    f.check_three_bounded()
    n = f.num_vars
    b = GameBuilder()
    var = [f"var{i}" for i in range(1, n + 1)] + ["target"]
    b.add("start", Owner.SWITCH, counting_gadget(3 * n + 1, "control.dist" if n else "target", "fail"))
    if n:
        b.add("control.dist", Owner.SWITCH, var[:n])
    b.add("fail", Owner.REACH)
    falsified_by = {}
    for i in range(1, n + 1):
        falsified_by[(i, True)] = [j for j, c in enumerate(f.clauses, 1) if -i in c]
        falsified_by[(i, False)] = [j for j, c in enumerate(f.clauses, 1) if i in c]
    for i in range(1, n + 1):
        branches = []
        for value, label in ((True, "true"), (False, "false")):
            count, route = f"var{i}.{label}.count", f"var{i}.{label}.route"
            branches.append(count)
            clauses = [f"clause{j}.gate" for j in falsified_by[(i, value)]]
            b.add(count, Owner.SWITCH, counting_gadget(3, route, var[i]))
            b.add(route, Owner.SWITCH, clauses + ["start"] * (3 - len(clauses)))
        b.add(var[i - 1], Owner.REACH, branches)
    for j, clause in enumerate(f.clauses, 1):
        b.add(f"clause{j}.gate", Owner.SWITCH, counting_gadget(len(clause) - 1, "start", "fail"))
    b.add("target", Owner.REACH)
    return b.build("start", "target")


def from_3sat_size(n: int, m: int) -> int:
    return 4 + 5 * n + m if n else 3


def _lit_name(lit: int) -> str:
    return f"lit.x{lit}" if lit > 0 else f"lit.not.x{-lit}"


def from_qbf(q: QbfFormula) -> Game:
    """Two-player game won by the reachability player iff ``q`` is true.

    Quantifier phase: per prefix variable ``x``, ``d.x`` (reachability if
    existential, safety if universal) chooses ``lit.x`` or ``lit.not.x``;
    both literal switches have order <f.x, target> and ``f.x`` has order
    <next, fail>.  Formula phase: Or nodes belong to the reachability player,
    And nodes to the safety player, and leaves are edges into the literal
    switches.  An empty conjunction routes to the target, an empty
    disjunction to ``fail``.
    """
    q.check_well_formed()
    b = GameBuilder()
    names: dict[int, str] = {}
    counters = {And: 0, Or: 0}
    nodes = []

    def name_of(node):
        if isinstance(node, Lit):
            return _lit_name(node.literal)
        if id(node) not in names:
            counters[type(node)] += 1
            label = "and" if isinstance(node, And) else "or"
            names[id(node)] = f"{label}{counters[type(node)]}"
            nodes.append(node)
        return names[id(node)]

    for node in matrix_nodes(q.matrix):
        if not isinstance(node, Lit):
            name_of(node)
    root = name_of(q.matrix)
    prefix = list(q.prefix)
    for i, (quant, v) in enumerate(prefix):
        after = f"d.x{prefix[i + 1][1]}" if i + 1 < len(prefix) else root
        owner = Owner.REACH if quant is Quantifier.EXISTS else Owner.SAFETY
        b.add(f"d.x{v}", owner, [f"lit.x{v}", f"lit.not.x{v}"])
        b.add(f"lit.x{v}", Owner.SWITCH, [f"f.x{v}", "target"])
        b.add(f"lit.not.x{v}", Owner.SWITCH, [f"f.x{v}", "target"])
        b.add(f"f.x{v}", Owner.SWITCH, [after, "fail"])
    for node in nodes:
        if isinstance(node, And):
            succ = [name_of(c) for c in node.children] or ["target"]
            b.add(names[id(node)], Owner.SAFETY, succ)
        else:
            succ = [name_of(c) for c in node.children] or ["fail"]
            b.add(names[id(node)], Owner.REACH, succ)
    b.add("fail", Owner.REACH)
    b.add("target", Owner.REACH)
    start = f"d.x{prefix[0][1]}" if prefix else root
    return b.build(start, "target")


def from_stcon(g: Digraph) -> Game:
    """Zero-player game whose walk reaches ``fin`` iff t is reachable from s.

    Vertex (v, k) counts the steps taken since the last restart at (s, 0).
    A vertex without out-edges in ``g`` restarts as well, so the walk never
    gets stuck before exhausting its step budget.
    """
    n = g.num_vertices
    if not (0 <= g.s < n and 0 <= g.t < n):
        raise MalformedFormula("s and t must be vertices of the graph")
    out: list[list[int]] = [[] for _ in range(n)]
    for u, v in g.edges:
        if not (0 <= u < n and 0 <= v < n):
            raise MalformedFormula(f"edge ({u}, {v}) leaves the vertex range")
        out[u].append(v)

    def name(v, k):
        return f"stcon.v{v}.k{k}"

    b = GameBuilder()
    restart = name(g.s, 0)
    for v in range(n):
        for k in range(n + 1):
            if v == g.t:
                order = ["fin"]
            elif k < n and out[v]:
                order = [name(u, k + 1) for u in out[v]]
            else:
                order = [restart]
            b.add(name(v, k), Owner.SWITCH, order)
    b.add("fin", Owner.REACH)
    return b.build(restart, "fin")


def memory_game(n: int, swapped: bool = False) -> Game:
    """n copies of the memory gadget in sequence.

    Gadget ``i``: chooser ``g{i}.x`` picks ``g{i}.a`` or ``g{i}.b``; both have
    order <g{i}.c, target>; ``g{i}.c`` has order <next, fail>, where next is
    the chooser of gadget i+1, or after the last gadget the dispatcher, which
    sends the token to some ``g{i}.y``.  ``g{i}.y`` picks ``a`` or ``b`` again:
    the previously chosen one leads to the target, the other one to the
    second visit of ``c`` and so to ``fail``.  Choosers and the dispatcher
    belong to the safety player and the ``y`` vertices to the reachability
    player; ``swapped`` exchanges the two.  With n == 1 the dispatcher is
    omitted and the game is exactly the single gadget.
    """
    if n < 1:
        raise ValueError("n must be positive")
    chooser, responder = (Owner.REACH, Owner.SAFETY) if swapped else (Owner.SAFETY, Owner.REACH)
    b = GameBuilder()
    for i in range(1, n + 1):
        g = f"g{i}"
        if i < n:
            after = f"g{i + 1}.x"
        else:
            after = "dispatch" if n > 1 else "g1.y"
        b.add(f"{g}.x", chooser, [f"{g}.a", f"{g}.b"])
        b.add(f"{g}.a", Owner.SWITCH, [f"{g}.c", "target"])
        b.add(f"{g}.b", Owner.SWITCH, [f"{g}.c", "target"])
        b.add(f"{g}.c", Owner.SWITCH, [after, "fail"])
        b.add(f"{g}.y", responder, [f"{g}.a", f"{g}.b"])
    if n > 1:
        b.add("dispatch", chooser, [f"g{i}.y" for i in range(1, n + 1)])
    b.add("fail", Owner.REACH)
    b.add("target", Owner.REACH)
    return b.build("g1.x", "target")
