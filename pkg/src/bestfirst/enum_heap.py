"""Heap Search: per non-terminal heaps of explicit programs plus a memoized
successor map.  Logarithmic delay; kept as a baseline and as a reference for
golden traces."""
from __future__ import annotations

import sys

from .costs import CostModel
from .errors import Exhausted
from .grammar import Grammar, compute_min_programs
from .queues import KeyedQueue
from .terms import BOTTOM, Program

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))


class HeapSearch:
    def __init__(self, g: Grammar, m: CostModel):
        self.grammar = g
        self.model = m
        min_p, min_cost = compute_min_programs(g, m.rule_costs)
        self.min_programs = min_p
        n = len(g.nonterminals)
        self.heaps = [KeyedQueue() for _ in range(n)]
        self.succ: list[dict[Program, Program]] = [{} for _ in range(n)]
        # Program identity includes its root rule, hence its non-terminal, so
        # one set covers every (non-terminal, program) pair.
        self.seen: set[Program] = set()
        self.cost: dict[Program, int] = {p: c for p, c in zip(min_p, min_cost)}
        self.generated = 0
        self._prev = BOTTOM

        rc = m.rule_costs
        # minimal programs go in first so FIFO tie-breaking pops exactly them
        first = set(min_p)
        init = [Program(r.id, tuple(min_p[x] for x in r.rhs)) for r in g.rules]
        for r, p in sorted(zip(g.rules, init), key=lambda rp: rp[1] not in first):
            self._insert(p, r.lhs, rc[r.id] + sum(min_cost[x] for x in r.rhs))
        for x in range(n):
            self.compute_successor(BOTTOM, x)

    def _insert(self, p: Program, x: int, cost: int) -> None:
        self.heaps[x].push(p, cost)
        self.seen.add(p)
        self.cost[p] = cost

    def compute_successor(self, p: Program, x: int) -> Program:
        """The program generated from ``x`` right after ``p`` (memoized).

        ``p`` is expanded here, just before its successor is popped, rather
        than when ``p`` itself was popped: on recursive grammars the eager
        order can ask for the successor of a program whose candidates are
        still being built higher up the call stack.
        """
        known = self.succ[x].get(p)
        if known is not None:
            return known
        self._expand(p, x)
        heap = self.heaps[x]
        if not heap:
            raise Exhausted(self.grammar.name_of(x))
        nxt, _ = heap.pop()
        self.succ[x][p] = nxt
        return nxt

    def _expand(self, nxt: Program, x: int) -> None:
        """Insert the programs obtained by advancing one argument of ``nxt``."""
        children = nxt.children
        if not children:
            return
        rhs = self.grammar.rules[nxt.rule].rhs
        costs = self.cost
        cost = costs[nxt]
        for i, child in enumerate(children):
            try:
                child_succ = self.compute_successor(child, rhs[i])
            except Exhausted:
                continue
            cand = Program(nxt.rule, children[:i] + (child_succ,) + children[i + 1:])
            if cand not in self.seen:
                self._insert(cand, x, cost - costs[child] + costs[child_succ])

    def next(self) -> tuple[int, Program]:
        """Next program from the start symbol, in non-decreasing cost order."""
        p = self.compute_successor(self._prev, self.grammar.start)
        self._prev = p
        self.generated += 1
        return self.cost[p], p

    def __iter__(self):
        while True:
            try:
                yield self.next()
            except Exhausted:
                return

    @property
    def queue_steps(self) -> int:
        return sum(h.steps for h in self.heaps)
