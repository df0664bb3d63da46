"""Programming by example on top of the enumerators.

Start-symbol programs are evaluated on all example inputs; a program whose
output vector was already seen is skipped (observational equivalence), and
the first program reproducing every output is returned.
"""
from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Sequence

from .costs import CostModel
from .dsl import DSLS, DSL, Error
from .engines import ALGORITHMS, batches, make_enumerator
from .errors import ParseError, UnknownAlgorithm, UnknownGrammar
from .grammar import Grammar
from .terms import Program

DEFAULT_FUEL = 10**4
# stands for every Error in signatures, whatever the reason
ERROR = Error("error")


@dataclass
class Task:
    name: str
    grammar_name: str
    examples: list[tuple[tuple, Any]]

    def __post_init__(self):
        if not self.examples:
            raise ValueError(f"task {self.name!r} has no examples")
        arity = {len(inp) for inp, _ in self.examples}
        if len(arity) != 1:
            raise ValueError(f"task {self.name!r} mixes input arities {sorted(arity)}")

    @property
    def outputs(self) -> tuple:
        return tuple(out for _, out in self.examples)


def _normalize(v):
    if isinstance(v, list):
        return tuple(_normalize(x) for x in v)
    return v


_decoder = json.JSONDecoder()


def _values(text: str, lineno: int, start: int) -> tuple[list, int]:
    """Comma-separated JSON values from ``start``; stops at ``out:`` or the end."""
    vals = []
    i = start
    while True:
        while i < len(text) and text[i] in " \t,":
            i += 1
        if i >= len(text) or text.startswith("out:", i):
            return vals, i
        try:
            v, i = _decoder.raw_decode(text, i)
        except json.JSONDecodeError:
            raise ParseError("expected an integer, [list] or quoted string", lineno, i + 1)
        vals.append(_normalize(v))


def parse_tasks(text: str) -> list[Task]:
    """Parse one or more tasks.  Each starts with a ``task <name>`` line."""
    tasks: list[Task] = []
    cur: dict | None = None

    def close():
        if cur is not None:
            if cur["grammar"] is None:
                raise ParseError(f"task {cur['name']!r} has no grammar line", cur["line"], 1)
            if not cur["examples"]:
                raise ParseError(f"task {cur['name']!r} has no examples", cur["line"], 1)
            tasks.append(Task(cur["name"], cur["grammar"], cur["examples"]))

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "task":
            close()
            cur = {"name": rest, "grammar": None, "examples": [], "line": lineno}
            continue
        if cur is None:
            raise ParseError("expected 'task <name>' first", lineno, 1)
        if word == "grammar":
            cur["grammar"] = rest
        elif word == "example":
            m = re.match(r"\s*in:", rest)
            if not m:
                raise ParseError("expected 'in:'", lineno, len(word) + 2)
            offset = raw.index(rest)
            inputs, i = _values(raw, lineno, offset + m.end())
            if not raw.startswith("out:", i):
                raise ParseError("expected 'out:'", lineno, i + 1)
            outs, j = _values(raw, lineno, i + 4)
            if len(outs) != 1 or raw[j:].strip():
                raise ParseError("expected exactly one output value", lineno, i + 5)
            cur["examples"].append((tuple(inputs), outs[0]))
        else:
            raise ParseError(f"unknown directive {word!r}", lineno, 1)
    close()
    return tasks


def load_tasks(path) -> list[Task]:
    with open(path) as f:
        return parse_tasks(f.read())


def bundled_tasks() -> list[Task]:
    text = resources.files("bestfirst").joinpath("data/tasks.txt").read_text()
    return parse_tasks(text)


def _dsl_for(task: Task) -> DSL:
    try:
        return DSLS[task.grammar_name]
    except KeyError:
        raise UnknownGrammar(
            f"unknown grammar {task.grammar_name!r}; bundled: {', '.join(sorted(DSLS))}"
        ) from None


class Interpreter:
    """Evaluates programs of one task grammar."""

    def __init__(self, g: Grammar, dsl: DSL):
        self.grammar = g
        fns = []
        for r in g.rules:
            name = r.primitive.name
            if name == "var":
                fns.append(("var", 0))
            elif name.startswith("var") and name[3:].isdigit():
                fns.append(("var", int(name[3:])))
            else:
                fns.append(("fn", dsl.semantics[name]))
        self._fns = fns

    def evaluate(self, p: Program, inputs: Sequence, fuel: int = DEFAULT_FUEL):
        """Bottom-up evaluation; never raises.  One fuel per application."""
        budget = [fuel]

        def ev(q: Program):
            if budget[0] <= 0:
                return Error("out of fuel")
            budget[0] -= 1
            args = []
            for c in q.children:
                v = ev(c)
                if isinstance(v, Error):
                    return v
                args.append(v)
            return self._apply(q.rule, args, inputs)

        return ev(p)

    def _apply(self, rule: int, args, inputs):
        kind, f = self._fns[rule]
        if kind == "var":
            return inputs[f] if f < len(inputs) else Error("no such input")
        try:
            return f(*args)
        except (TypeError, ValueError, IndexError, OverflowError, ZeroDivisionError) as exc:
            return Error(type(exc).__name__)


def build(task: Task, delta: float | None = None) -> tuple[Grammar, CostModel, Interpreter]:
    """Task grammar (DSL rules plus one rule per input), costs and interpreter."""
    dsl = _dsl_for(task)
    inputs, output = task.examples[0]
    types = []
    for v in inputs:
        nt = dsl.nonterminal_for(v)
        if nt is None:
            raise UnknownGrammar(f"{dsl.name} DSL has no type for input {v!r}")
        types.append(nt)
    out_nt = dsl.nonterminal_for(output)
    if out_nt is None:
        raise UnknownGrammar(f"{dsl.name} DSL has no type for output {output!r}")
    try:
        g = dsl.grammar(types, out_nt)
    except ValueError as exc:
        raise UnknownGrammar(str(exc)) from None
    return g, dsl.cost_model(g, delta), Interpreter(g, dsl)


def obs_signature(p: Program, task: Task, interp: Interpreter, fuel: int = DEFAULT_FUEL) -> tuple:
    out = []
    for inputs, _ in task.examples:
        v = interp.evaluate(p, inputs, fuel)
        out.append(ERROR if isinstance(v, Error) else v)
    return tuple(out)


def satisfies(p: Program, task: Task, interp: Interpreter, fuel: int = DEFAULT_FUEL) -> bool:
    return obs_signature(p, task, interp, fuel) == task.outputs


class _CachedEvaluator:
    """Signatures built from memoized child signatures.

    Fuel consumption equals program size under strict bottom-up evaluation,
    so the fuel check reduces to a size check.
    """

    def __init__(self, task: Task, interp: Interpreter, fuel: int):
        self.inputs = [inp for inp, _ in task.examples]
        self.interp = interp
        self.fuel = fuel
        self.memo: dict[Program, tuple] = {}

    def signature(self, p: Program) -> tuple:
        memo = self.memo
        sig = memo.get(p)
        if sig is not None:
            return sig
        if p.size > self.fuel:
            sig = (ERROR,) * len(self.inputs)
        else:
            kids = [self.signature(c) for c in p.children]
            out = []
            for e, inputs in enumerate(self.inputs):
                args = [k[e] for k in kids]
                if any(isinstance(a, Error) for a in args):
                    out.append(ERROR)
                    continue
                v = self.interp._apply(p.rule, args, inputs)
                out.append(ERROR if isinstance(v, Error) else v)
            sig = tuple(out)
        memo[p] = sig
        return sig


@dataclass
class SolveStats:
    enumerated: int = 0
    pruned: int = 0
    seconds: float = 0.0
    algorithm: str = ""
    bucket_size: int | None = None


@dataclass
class SolveResult:
    """``program`` is None when the budget ran out first."""

    task: str
    program: Program | None
    cost: int | None
    stats: SolveStats = field(default_factory=SolveStats)
    grammar: Grammar | None = None
    model: CostModel | None = None

    @property
    def solved(self) -> bool:
        return self.program is not None


def solve(
    task: Task,
    algorithm: str = "eco",
    max_programs: int | None = None,
    max_seconds: float | None = None,
    delta: float | None = None,
    bucket_size: int | None = None,
    fuel: int = DEFAULT_FUEL,
) -> SolveResult:
    if algorithm not in ALGORITHMS:
        raise UnknownAlgorithm(
            f"unknown algorithm {algorithm!r}; expected one of {', '.join(ALGORITHMS)}"
        )
    g, m, interp = build(task, delta)
    stats = SolveStats(algorithm=algorithm)
    result = SolveResult(task.name, None, None, stats, g, m)
    t0 = time.perf_counter()
    if max_programs is not None and max_programs <= 0:
        return result
    e = make_enumerator(algorithm, g, m, bucket_size)
    stats.bucket_size = getattr(e, "bucket_size", None)
    cache = _CachedEvaluator(task, interp, fuel)
    want = tuple(ERROR if isinstance(v, Error) else v for v in task.outputs)
    seen: set[tuple] = set()
    deadline = None if max_seconds is None else t0 + max_seconds
    for cost, progs in batches(e):
        for p in progs:
            if max_programs is not None and stats.enumerated >= max_programs:
                stats.seconds = time.perf_counter() - t0
                return result
            stats.enumerated += 1
            sig = cache.signature(p)
            if sig in seen:
                stats.pruned += 1
                continue
            seen.add(sig)
            if sig == want:
                result.program = p
                result.cost = cost
                stats.seconds = time.perf_counter() - t0
                return result
        if deadline is not None and time.perf_counter() > deadline:
            break
    stats.seconds = time.perf_counter() - t0
    return result
