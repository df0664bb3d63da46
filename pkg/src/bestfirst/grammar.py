"""Weighted deterministic tree grammars.

Non-terminals and rules carry dense integer ids so that every piece of
per-non-terminal enumerator state can live in a plain list.
"""
from __future__ import annotations

import json
import math
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .errors import GrammarError, InvalidK, ParseError, Unproductive
from .terms import Program


@dataclass(frozen=True)
class PrimitiveSymbol:
    name: str
    arity: int


@dataclass(frozen=True)
class NonTerminal:
    id: int
    name: str


@dataclass(frozen=True)
class DerivationRule:
    id: int
    lhs: int
    primitive: PrimitiveSymbol
    rhs: tuple[int, ...]
    cost: Union[int, float]

    @property
    def arity(self) -> int:
        return len(self.rhs)


@dataclass(frozen=True)
class Violation:
    kind: str  # determinism | cost | unproductive | arity | empty | start
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


RuleSpec = tuple  # (lhs name, primitive name, rhs names, cost)


class Grammar:
    """A deterministic tree grammar with one cost per derivation rule.

    Build with :meth:`from_rules`; non-terminal ids follow first appearance,
    starting with the start symbol, which makes the id assignment canonical.
    """

    def __init__(self, nonterminals, rules, start: int):
        self.nonterminals: list[NonTerminal] = list(nonterminals)
        self.rules: list[DerivationRule] = list(rules)
        self.start = start
        self.rules_by_lhs: list[list[int]] = [[] for _ in self.nonterminals]
        for r in self.rules:
            self.rules_by_lhs[r.lhs].append(r.id)
        self._nt_index = {nt.name: nt.id for nt in self.nonterminals}

    @classmethod
    def from_rules(cls, start: str, rules: Iterable[RuleSpec]) -> Grammar:
        rules = [(lhs, prim, tuple(rhs), cost) for lhs, prim, rhs, cost in rules]
        ids: dict[str, int] = {start: 0}
        for lhs, _, rhs, _ in rules:
            for name in (lhs, *rhs):
                if name not in ids:
                    ids[name] = len(ids)
        nts = [NonTerminal(i, name) for name, i in ids.items()]
        built = [
            DerivationRule(
                id=i,
                lhs=ids[lhs],
                primitive=PrimitiveSymbol(prim, len(rhs)),
                rhs=tuple(ids[x] for x in rhs),
                cost=cost,
            )
            for i, (lhs, prim, rhs, cost) in enumerate(rules)
        ]
        return cls(nts, built, 0)

    def nonterminal(self, name: str) -> int:
        return self._nt_index[name]

    def name_of(self, x: int) -> str:
        return self.nonterminals[x].name

    def rule_for(self, lhs: str, primitive: str) -> DerivationRule:
        x = self.nonterminal(lhs)
        for rid in self.rules_by_lhs[x]:
            if self.rules[rid].primitive.name == primitive:
                return self.rules[rid]
        raise KeyError((lhs, primitive))

    def program(self, lhs: str, primitive: str, *children: Program) -> Program:
        """Convenience constructor used mostly by tests and task files."""
        r = self.rule_for(lhs, primitive)
        if len(children) != r.arity:
            raise ValueError(f"{primitive} expects {r.arity} arguments")
        for x, c in zip(r.rhs, children):
            if self.rules[c.rule].lhs != x:
                raise ValueError(f"{primitive} expects a {self.name_of(x)} argument")
        return Program(r.id, tuple(children))

    def lhs_of(self, p: Program) -> int:
        return self.rules[p.rule].lhs

    @property
    def costs(self) -> list:
        return [r.cost for r in self.rules]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Grammar):
            return NotImplemented
        return (
            self.nonterminals == other.nonterminals
            and self.rules == other.rules
            and self.start == other.start
        )

    def __repr__(self) -> str:
        return (
            f"Grammar(start={self.name_of(self.start)!r}, "
            f"{len(self.nonterminals)} non-terminals, {len(self.rules)} rules)"
        )


def compute_min_programs(g: Grammar, costs: Sequence | None = None):
    """Return ``(min_programs, min_costs)`` indexed by non-terminal id.

    Propagates minimal costs through the rules until a fixpoint; the loop runs
    at most ``|nonterminals|`` times.  Raises :class:`Unproductive` if some
    non-terminal still has no finite program.
    """
    if costs is None:
        costs = g.costs
    n = len(g.nonterminals)
    min_cost = [math.inf] * n
    min_p: list[Program | None] = [None] * n
    for r in g.rules:
        if not r.rhs and costs[r.id] < min_cost[r.lhs]:
            min_cost[r.lhs] = costs[r.id]
            min_p[r.lhs] = Program(r.id)
    updated = True
    rounds = 0
    while updated and rounds <= n:
        updated = False
        rounds += 1
        for r in g.rules:
            if not r.rhs:
                continue
            c = costs[r.id]
            for x in r.rhs:
                c += min_cost[x]
            if c < min_cost[r.lhs]:
                min_cost[r.lhs] = c
                min_p[r.lhs] = Program(r.id, tuple(min_p[x] for x in r.rhs))
                updated = True
    missing = [g.name_of(x) for x in range(n) if min_p[x] is None]
    if missing:
        raise Unproductive(missing)
    return min_p, min_cost


def max_cost_if_finite(g: Grammar, costs: Sequence, x: int) -> int | None:
    """Largest program cost of ``x`` when its language is finite, else None."""
    memo: dict[int, int | None] = {}
    on_stack: set[int] = set()

    def visit(y: int) -> int | None:
        if y in memo:
            return memo[y]
        if y in on_stack:
            return None  # cycle through productive non-terminals: infinite
        on_stack.add(y)
        best = 0
        for rid in g.rules_by_lhs[y]:
            r = g.rules[rid]
            total = costs[rid]
            for z in r.rhs:
                sub = visit(z)
                if sub is None:
                    on_stack.discard(y)
                    memo[y] = None
                    return None
                total += sub
            best = max(best, total)
        on_stack.discard(y)
        memo[y] = best
        return best

    return visit(x)


def validate(g: Grammar) -> list[Violation]:
    """Collect every violation; an empty list means the grammar is usable."""
    out: list[Violation] = []
    if not g.rules:
        out.append(Violation("empty", "grammar has no rules"))
        return out
    seen: set[tuple[int, str]] = set()
    prim_arity: dict[str, int] = {}
    for r in g.rules:
        key = (r.lhs, r.primitive.name)
        if key in seen:
            out.append(
                Violation(
                    "determinism",
                    f"two rules {g.name_of(r.lhs)} -> {r.primitive.name}",
                )
            )
        seen.add(key)
        if prim_arity.setdefault(r.primitive.name, r.arity) != r.arity:
            out.append(
                Violation(
                    "arity",
                    f"primitive {r.primitive.name} used with arities "
                    f"{prim_arity[r.primitive.name]} and {r.arity}",
                )
            )
        if len(r.rhs) != r.primitive.arity:
            out.append(Violation("arity", f"rule {r.id} rhs/arity mismatch"))
        if not (isinstance(r.cost, (int, float)) and math.isfinite(r.cost) and r.cost > 0):
            out.append(Violation("cost", f"rule {r.id} has non-positive cost {r.cost}"))
    if out:
        return out
    try:
        compute_min_programs(g)
    except Unproductive as e:
        for name in e.names:
            out.append(Violation("unproductive", f"{name} derives no finite program"))
    return out


def check(g: Grammar) -> Grammar:
    violations = validate(g)
    if violations:
        raise GrammarError(violations)
    return g


# -- parametric families -----------------------------------------------------


@dataclass(frozen=True)
class Uniform:
    cost: int = 1


@dataclass(frozen=True)
class SeededRandom:
    lo: int = 1
    hi: int = 100
    seed: int = 0


CostAssignment = Union[Uniform, SeededRandom]


def make_family(family: str, k: int, costs: CostAssignment | None = None) -> Grammar:
    """Build one of the scaling grammars ``D_k``, ``N_k`` or ``R_k``.

    Indices in ``R_k`` wrap around cyclically, so ``S_0`` is ``S_k`` and
    ``S_{k+1}`` is ``S_1``.
    """
    if costs is None:
        costs = SeededRandom()
    family = family.upper()
    minimum = {"D": 1, "N": 1, "R": 2}
    if family not in minimum:
        raise ValueError(f"unknown family {family!r}")
    if k < minimum[family]:
        raise InvalidK(f"{family}_k needs k >= {minimum[family]}, got {k}")

    shapes: list[tuple[str, str, tuple[str, ...]]] = []
    if family == "D":
        for i in range(1, k + 1):
            shapes += [
                ("S", f"f{i}", ("S", "S")),
                ("S", f"g{i}", ("S",)),
                ("S", f"h{i}", ()),
            ]
        start = "S"
    elif family == "N":
        for i in range(1, k + 1):
            s = f"S{i}"
            shapes += [("S1", f"f{i}", (s,)), (s, f"g{i}", ("S1",)), (s, f"h{i}", ())]
        start = "S1"
    else:

        def nt(i: int) -> str:
            return f"S{(i - 1) % k + 1}"

        for i in range(1, k + 1):
            s = nt(i)
            shapes += [
                (s, f"f{i}", (nt(i - 1), s, nt(i + 1))),
                (s, f"g{i}", ("S1", s)),
                ("S1", f"h{i}", (s,)),
                (s, f"k{i}", ()),
            ]
        start = "S1"

    if isinstance(costs, Uniform):
        values = [costs.cost] * len(shapes)
    else:
        rng = random.Random(costs.seed)
        values = [rng.randint(costs.lo, costs.hi) for _ in shapes]
    return Grammar.from_rules(
        start, [(lhs, f, rhs, c) for (lhs, f, rhs), c in zip(shapes, values)]
    )


# -- text format --------------------------------------------------------------

_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_PRIM = r'"(?:[^"\\]|\\.)*"|[^\s(),"#]+'
_RULE = re.compile(
    rf"rule\s+(?P<lhs>{_NAME})\s*->\s*(?P<prim>{_PRIM})\s*"
    rf"(?:\((?P<args>[^)]*)\))?\s+cost\s+(?P<cost>\S+)\s*$"
)
_START = re.compile(rf"start\s+(?P<nt>{_NAME})\s*$")


def _parse_number(text: str, line: int, col: int) -> Union[int, float]:
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"bad cost {text!r}", line, col) from None
    if not math.isfinite(value):
        raise ParseError(f"bad cost {text!r}", line, col)
    return value


def _strip_comment(raw: str) -> str:
    # '#' inside a quoted primitive is not a comment
    in_quote = False
    escaped = False
    for i, ch in enumerate(raw):
        if escaped:
            escaped = False
        elif ch == "\\" and in_quote:
            escaped = True
        elif ch == '"':
            in_quote = not in_quote
        elif ch == "#" and not in_quote:
            return raw[:i]
    return raw


def load_grammar(text: str, validate_grammar: bool = True) -> Grammar:
    start = None
    specs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("start"):
            m = _START.match(stripped)
            if not m:
                raise ParseError("expected 'start <nonterminal>'", lineno, col)
            if start is not None:
                raise ParseError("duplicate start line", lineno, col)
            start = m["nt"]
        elif stripped.startswith("rule"):
            m = _RULE.match(stripped)
            if not m:
                raise ParseError(
                    "expected 'rule <lhs> -> <primitive>(<args>) cost <number>'",
                    lineno,
                    col,
                )
            args: tuple[str, ...] = ()
            if m["args"] is not None:
                args = tuple(a.strip() for a in m["args"].split(","))
                for a in args:
                    if not re.fullmatch(_NAME, a):
                        raise ParseError(
                            f"bad non-terminal {a!r}", lineno, col + m.start("args")
                        )
            cost = _parse_number(m["cost"], lineno, col + m.start("cost"))
            specs.append((m["lhs"], m["prim"], args, cost))
        else:
            raise ParseError(f"unexpected line {stripped!r}", lineno, col)
    if start is None:
        raise ParseError("missing 'start' line", 1, 1)
    if not specs:
        raise ParseError("grammar has no rules", 1, 1)
    g = Grammar.from_rules(start, specs)
    if validate_grammar:
        check(g)
    return g


def save_grammar(g: Grammar) -> str:
    lines = [f"start {g.name_of(g.start)}"]
    for r in g.rules:
        head = f"rule {g.name_of(r.lhs)} -> {r.primitive.name}"
        if r.rhs:
            head += "(" + ",".join(g.name_of(x) for x in r.rhs) + ")"
        lines.append(f"{head} cost {r.cost!r}")
    return "\n".join(lines) + "\n"


def quote(s: str) -> str:
    """Quote a string constant the way primitive names expect."""
    return json.dumps(s)


FIG1_TEXT = """\
# string/int toy DSL with a single int variable
start str
rule str -> "Hello" cost 1.1
rule str -> "World" cost 2.0
rule str -> cast(int) cost 4.4
rule str -> concat(str,str) cost 5.3
rule int -> var cost 1.8
rule int -> 1 cost 3.3
rule int -> add(int,int) cost 5.3
"""


def fig1(scale: int | None = None) -> Grammar:
    """The seven-rule string/int example grammar.

    With ``scale`` the costs are multiplied and made integral (``scale=10``
    gives 11, 20, 44, 53, 18, 33, 53).
    """
    g = load_grammar(FIG1_TEXT)
    if scale is None:
        return g
    return Grammar.from_rules(
        g.name_of(g.start),
        [
            (
                g.name_of(r.lhs),
                r.primitive.name,
                [g.name_of(x) for x in r.rhs],
                round(r.cost * scale),
            )
            for r in g.rules
        ],
    )
