"""Bundled DSLs: semantics tables and grammar construction.

Values are plain Python objects: ``int`` (kept within 64 bits), ``tuple`` of
ints for integer lists, ``str``, ``bool``, and :class:`Error` for any failed
evaluation.  Every primitive is total: bad inputs produce an ``Error``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .costs import CostModel, from_probabilities, real_model
from .grammar import Grammar, fig1, quote

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1
MAX_LIST = 512
MAX_STR = 4096


@dataclass(frozen=True)
class Error:
    reason: str


def _int(n: int):
    if INT_MIN <= n <= INT_MAX:
        return n
    return Error("overflow")


def _lst(xs) -> tuple | Error:
    xs = tuple(xs)
    if len(xs) > MAX_LIST:
        return Error("list too long")
    for x in xs:
        if not INT_MIN <= x <= INT_MAX:
            return Error("overflow")
    return xs


def _str(s: str):
    if len(s) > MAX_STR:
        return Error("string too long")
    return s


def _nonempty(f):
    def g(xs):
        return f(xs) if xs else Error("empty")

    return g


def _access(n, xs):
    if 0 <= n < len(xs):
        return xs[n]
    return Error("index out of range")


def _substr(s, i, j):
    if 0 <= i <= j <= len(s):
        return s[i:j]
    return Error("substring out of range")


def _str_to_int(s):
    t = s[1:] if s.startswith("-") else s
    if t.isdigit() and t.isascii():
        return _int(int(s))
    return Error("not an integer")


LAMBDAS: dict[str, Callable[[int], int]] = {
    "inc": lambda x: x + 1,
    "dec": lambda x: x - 1,
    "dbl": lambda x: x * 2,
    "half": lambda x: x // 2,
    "neg": lambda x: -x,
    "sq": lambda x: x * x,
}
PREDICATES: dict[str, Callable[[int], bool]] = {
    "pos": lambda x: x > 0,
    "neg": lambda x: x < 0,
    "odd": lambda x: x % 2 == 1,
    "even": lambda x: x % 2 == 0,
}
ZIPPERS: dict[str, Callable[[int, int], int]] = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "min": min,
    "max": max,
}


@dataclass
class DSL:
    """Rules as ``(lhs, primitive, rhs, weight)`` plus one semantic function
    per primitive.  Variables are added per task."""

    name: str
    rules: list[tuple[str, str, tuple[str, ...], float]]
    semantics: dict[str, Callable]
    types: dict[type, str]  # Python value type -> non-terminal
    delta: float = 0.1
    var_weight: float = 2.0

    def nonterminal_for(self, value) -> str | None:
        if isinstance(value, bool):
            return self.types.get(bool)
        return self.types.get(type(value))

    def grammar(self, input_types: list[str], output_type: str) -> Grammar:
        specs = [(lhs, prim, rhs, weight) for lhs, prim, rhs, weight in self.rules]
        for i, nt in enumerate(input_types):
            specs.append((nt, f"var{i}", (), self.var_weight))
        return Grammar.from_rules(output_type, specs)

    def cost_model(self, g: Grammar, delta: float | None = None) -> CostModel:
        """Rule weights normalized per non-terminal, then discretized."""
        totals: dict[int, float] = {}
        for r in g.rules:
            totals[r.lhs] = totals.get(r.lhs, 0.0) + r.cost
        probs = [r.cost / totals[r.lhs] for r in g.rules]
        return from_probabilities(g, probs, self.delta if delta is None else delta)


def _list_dsl() -> DSL:
    rules: list = []
    sem: dict[str, Callable] = {}

    def add(lhs, name, rhs, fn, weight=1.0):
        rules.append((lhs, name, tuple(rhs), weight))
        sem[name] = fn

    add("int", "head", ["list"], _nonempty(lambda xs: xs[0]))
    add("int", "last", ["list"], _nonempty(lambda xs: xs[-1]))
    add("int", "access", ["int", "list"], _access)
    add("int", "minimum", ["list"], _nonempty(min))
    add("int", "maximum", ["list"], _nonempty(max))
    add("int", "sum", ["list"], lambda xs: _int(sum(xs)))
    for pname, pred in PREDICATES.items():
        add("int", f"count_{pname}", ["list"], lambda xs, p=pred: sum(1 for x in xs if p(x)))
    add("list", "take", ["int", "list"], lambda n, xs: xs[: max(n, 0)])
    add("list", "drop", ["int", "list"], lambda n, xs: xs[max(n, 0):])
    add("list", "reverse", ["list"], lambda xs: xs[::-1])
    add("list", "sort", ["list"], lambda xs: tuple(sorted(xs)))
    for lname, f in LAMBDAS.items():
        add("list", f"map_{lname}", ["list"], lambda xs, f=f: _lst(map(f, xs)))
    for pname, pred in PREDICATES.items():
        add("list", f"filter_{pname}", ["list"], lambda xs, p=pred: tuple(x for x in xs if p(x)))
    for zname, f in ZIPPERS.items():
        add("list", f"zipwith_{zname}", ["list", "list"], lambda a, b, f=f: _lst(map(f, a, b)))
    return DSL("list", rules, sem, {int: "int", tuple: "list", list: "list"})


def _string_dsl() -> DSL:
    rules: list = []
    sem: dict[str, Callable] = {}

    def add(lhs, name, rhs, fn, weight=1.0):
        rules.append((lhs, name, tuple(rhs), weight))
        sem[name] = fn

    add("str", "concat", ["str", "str"], lambda a, b: _str(a + b))
    add("str", "substr", ["str", "int", "int"], _substr)
    add("str", "to_upper", ["str"], str.upper)
    add("str", "to_lower", ["str"], str.lower)
    add("str", "int_to_str", ["int"], str)
    for const in ["", " ", ",", ".", "-", "@"]:
        add("str", quote(const), [], lambda c=const: c)
    add("int", "str_to_int", ["str"], _str_to_int)
    add("int", "index_of", ["str", "str"], lambda s, t: s.find(t))
    add("int", "length", ["str"], len)
    add("int", "add", ["int", "int"], lambda a, b: _int(a + b))
    for n in (0, 1, 2):
        add("int", str(n), [], lambda n=n: n)
    return DSL("string", rules, sem, {str: "str", int: "int"})


class _Fig1(DSL):
    """The seven-rule string/int toy DSL; keeps its own rule costs."""

    def grammar(self, input_types, output_type):
        if input_types != ["int"] or output_type != "str":
            raise ValueError("the fig1 DSL maps one int input to a string")
        return fig1()

    def cost_model(self, g, delta=None):
        return real_model(g)


def _fig1_dsl() -> DSL:
    sem = {
        '"Hello"': lambda: "Hello",
        '"World"': lambda: "World",
        "cast": str,
        "concat": lambda a, b: _str(a + b),
        "1": lambda: 1,
        "add": lambda a, b: _int(a + b),
    }
    return _Fig1("fig1", [], sem, {int: "int", str: "str"})


DSLS: dict[str, DSL] = {d.name: d for d in (_list_dsl(), _string_dsl(), _fig1_dsl())}
