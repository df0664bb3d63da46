"""Seeded random grammars checked against the brute-force oracle.

Shared by the equivalence tests and the acceptance script; results are cached
per process so the corpus is enumerated once per test session.
"""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

from bestfirst.costs import estimate_successor_gap, integer_model
from bestfirst.enum_eco import EcoSearch
from bestfirst.engines import ALGORITHMS, batches, make_enumerator
from bestfirst.errors import MemoryCapExceeded
from bestfirst.oracle import first_programs, level_costs
from bestfirst.randgram import random_grammar

SEEDS = range(130)
PREFIX = 500
ORACLE_CAP = 100_000
# Bee can need exponentially many empty calls on some arity-3 grammars
BEE_CALL_BUDGET = 50_000


@dataclass
class Run:
    levels: dict[int, Counter] | None  # None: call budget exhausted
    costs: list[int] = field(default_factory=list)
    seconds: float = 0.0
    enumerator: object = None


@dataclass
class Entry:
    seed: int
    grammar: object
    model: object
    table: object
    top: int
    want: dict[int, Counter]
    runs: dict[str, Run] = field(default_factory=dict)
    gap: object = None


def collect(e, top: int, call_budget: int | None = None) -> Run:
    """Start programs of every cost level ``<= top``, grouped by cost."""
    run = Run({}, enumerator=e)
    t0 = time.perf_counter()
    for cost, progs in batches(e):
        if call_budget is not None and e.calls > call_budget:
            run.levels = None
            break
        if cost > top:
            break
        for p in progs:
            run.costs.append(cost)
            run.levels.setdefault(cost, Counter())[p] += 1
    run.seconds = time.perf_counter() - t0
    return run


def build_entry(seed: int) -> Entry | None:
    g = random_grammar(seed)
    m = integer_model(g)
    try:
        table, nlev = first_programs(g, m, PREFIX, max_programs=ORACLE_CAP)
    except MemoryCapExceeded:
        return None
    costs = level_costs(table, g.start)[:nlev]
    want = {c: Counter(table.tables[g.start][c]) for c in costs}
    return Entry(seed, g, m, table, costs[-1], want)


@lru_cache(maxsize=None)
def corpus() -> tuple[list[Entry], float]:
    """Oracle-complete grammars with all four enumerators run on each.

    Returns the entries and the wall time of the whole check, oracle and
    gap estimates included.
    """
    entries = []
    t0 = time.perf_counter()
    for seed in SEEDS:
        entry = build_entry(seed)
        if entry is None:
            continue
        entry.gap = estimate_successor_gap(entry.grammar, entry.model)
        for algo in ALGORITHMS:
            if algo == "eco":
                e = EcoSearch(entry.grammar, entry.model, track_spread=True)
            else:
                e = make_enumerator(algo, entry.grammar, entry.model)
            budget = BEE_CALL_BUDGET if algo == "bee" else None
            run = collect(e, entry.top, budget)
            entry.runs[algo] = run
        entries.append(entry)
    return entries, time.perf_counter() - t0
