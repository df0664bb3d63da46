"""Brute-force reference enumeration by dynamic programming over costs.

Deliberately simple and independent of the fast enumerators: for every cost
value in increasing order and every rule, all ways of splitting the remaining
cost between the arguments are tried.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .costs import COST_LIMIT, CostModel
from .errors import LevelBeyondBound, MemoryCapExceeded
from .grammar import Grammar, max_cost_if_finite
from .terms import Program

# about 2 GiB at a conservative ~200 bytes per stored program
DEFAULT_MAX_PROGRAMS = 10_000_000


@dataclass
class CostTable:
    bound: int
    # tables[X][c] = every program derivable from X with cost exactly c
    tables: list[dict[int, list[Program]]]

    def programs(self, x: int, cost: int) -> list[Program]:
        return self.tables[x].get(cost, [])

    def total(self) -> int:
        return sum(len(v) for t in self.tables for v in t.values())


def _splits(rest: int, rhs: tuple[int, ...], tables, costs_so_far):
    """Cost vectors for ``rhs`` summing to ``rest``, over realized costs only."""
    if len(rhs) == 1:
        if rest in tables[rhs[0]]:
            yield (rest,)
        return
    for first in costs_so_far[rhs[0]]:
        if first >= rest:
            break
        for tail in _splits(rest - first, rhs[1:], tables, costs_so_far):
            yield (first, *tail)


def enumerate_upto_cost(
    g: Grammar,
    m: CostModel,
    bound: int,
    max_programs: int = DEFAULT_MAX_PROGRAMS,
    stop_after: int | None = None,
) -> CostTable:
    """Every program of cost ``<= bound``, grouped by non-terminal and cost.

    With ``stop_after`` the sweep ends early, after the first cost at which
    the start symbol has accumulated that many programs; ``bound`` of the
    returned table is then the last cost swept.
    """
    n = len(g.nonterminals)
    tables: list[dict[int, list[Program]]] = [{} for _ in range(n)]
    realized: list[list[int]] = [[] for _ in range(n)]
    stored = 0
    start_count = 0
    for c in range(1, bound + 1):
        for r in g.rules:
            rest = c - m.rule_costs[r.id]
            if rest < 0:
                continue
            found: list[Program] = []
            if not r.rhs:
                if rest == 0:
                    found.append(Program(r.id))
            else:
                for split in _splits(rest, r.rhs, tables, realized):
                    pools = [tables[x][ci] for x, ci in zip(r.rhs, split)]
                    found.extend(Program(r.id, combo) for combo in product(*pools))
            if found:
                tables[r.lhs].setdefault(c, []).extend(found)
                stored += len(found)
                if stored > max_programs:
                    raise MemoryCapExceeded(
                        f"more than {max_programs} programs below cost {c}"
                    )
        for x in range(n):
            if c in tables[x]:
                realized[x].append(c)
        if stop_after is not None:
            start_count += len(tables[g.start].get(c, ()))
            if start_count >= stop_after:
                return CostTable(c, tables)
    return CostTable(bound, tables)


def level_costs(table: CostTable, x: int) -> list[int]:
    return sorted(table.tables[x])


def kth_level(table: CostTable, x: int, level: int) -> list[Program]:
    costs = level_costs(table, x)
    if level >= len(costs):
        raise LevelBeyondBound(
            f"level {level} not realized below cost {table.bound}"
        )
    return table.tables[x][costs[level]]


def first_programs(
    g: Grammar, m: CostModel, count: int, max_programs: int = DEFAULT_MAX_PROGRAMS
) -> tuple[CostTable, int]:
    """Table covering the cost levels of the first ``count`` start programs.

    Returns ``(table, levels)``: ``levels`` complete cost levels of the start
    symbol hold at least ``count`` programs, or all of them when the start
    language is finite and smaller.
    """
    cap = max_cost_if_finite(g, m.rule_costs, g.start)
    bound = cap if cap is not None else COST_LIMIT
    table = enumerate_upto_cost(g, m, bound, max_programs, stop_after=count)
    return table, len(level_costs(table, g.start))
