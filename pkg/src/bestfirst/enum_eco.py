"""Eco Search: per non-terminal cost-tuple queues, generation by recursive
level lookups, and frugal expansion.  With bucket queues and integer costs the
work between two emitted programs is bounded by a grammar constant.
"""
from __future__ import annotations

import sys
from itertools import product

from .costs import CostModel, estimate_successor_gap
from .errors import Exhausted, InvariantViolation
from .grammar import Grammar, compute_min_programs
from .queues import make_queue
from .terms import Program

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))

DEFAULT_BUCKET_SIZE = 20
MAX_EXACT_BUCKETS = 1000


def choose_bucket_size(g: Grammar, m: CostModel, fallback: int = DEFAULT_BUCKET_SIZE) -> int:
    """Ring size for the bucket queues.

    Uses the estimated spread bound plus one when that is below 1000 buckets,
    the ``fallback`` size otherwise.
    """
    est = estimate_successor_gap(g, m)
    bound = est.spread_bound
    return bound + 1 if bound < MAX_EXACT_BUCKETS else fallback


class EcoSearch:
    def __init__(
        self,
        g: Grammar,
        m: CostModel,
        bucketing: bool = True,
        bucket_size: int | None = None,
        track_spread: bool = False,
    ):
        self.grammar = g
        self.model = m
        self.bucketing = bucketing
        if bucketing and bucket_size is None:
            bucket_size = choose_bucket_size(g, m)
        self.bucket_size = bucket_size if bucketing else None
        n = len(g.nonterminals)
        _, min_cost = compute_min_programs(g, m.rule_costs)
        self.min_cost = min_cost
        self.queues = [make_queue(bucketing, bucket_size or DEFAULT_BUCKET_SIZE) for _ in range(n)]
        self.members: list[set] = [set() for _ in range(n)]
        self.index2cost: list[list[int]] = [[] for _ in range(n)]
        # generated[X][l]: all programs of X with the l-smallest cost
        self.generated: list[list[list[Program]]] = [[] for _ in range(n)]
        self.level = 0
        self._rhs = [r.rhs for r in g.rules]
        self._lhs = [r.lhs for r in g.rules]

        # instrumentation
        self.output_calls = 0
        self.mutating_calls = 0
        self.max_mutating_per_step = 0
        self.frugal_violations = 0
        self._mutated: set[int] = set()
        self.track_spread = track_spread
        self.max_spread = [0] * n

        rc = m.rule_costs
        for r in g.rules:
            t = (r.id, (0,) * r.arity)
            self._push(r.lhs, t, rc[r.id] + sum(min_cost[x] for x in r.rhs))
        self.initial_spread = [
            (max(q.keys()) - min(q.keys())) if q else 0 for q in self.queues
        ]

    def _push(self, x: int, t, key: int) -> None:
        q = self.queues[x]
        q.push(t, key)
        self.members[x].add(t)
        if self.track_spread:
            spread = key - q.peek_key()
            if spread > self.max_spread[x]:
                self.max_spread[x] = spread

    def levels_done(self, x: int) -> int:
        return len(self.generated[x])

    def output(self, x: int, level: int) -> list[Program]:
        """All programs generated from ``x`` with the ``level``-smallest cost."""
        self.output_calls += 1
        gen = self.generated[x]
        if level < len(gen):
            return gen[level]
        while len(gen) < level:
            self.output(x, len(gen))

        q = self.queues[x]
        if not q:
            raise Exhausted(self.grammar.name_of(x))
        self.mutating_calls += 1
        if x in self._mutated:
            self.frugal_violations += 1
        self._mutated.add(x)

        c = q.peek_key()
        i2c = self.index2cost[x]
        if level < len(i2c):
            if i2c[level] != c:
                raise InvariantViolation(
                    f"level {level} of {self.grammar.name_of(x)} announced at "
                    f"cost {i2c[level]} but the queue holds {c}"
                )
        else:
            i2c.append(c)
        out: list[Program] = []
        gen.append(out)

        members = self.members[x]
        rhs_of = self._rhs
        index2cost = self.index2cost
        queues = self.queues
        while True:
            t, _ = q.pop()
            members.discard(t)
            rid, n = t
            if not n:
                out.append(Program(rid))
            else:
                rhs = rhs_of[rid]
                if len(n) == 1:
                    for p in self.output(rhs[0], n[0]):
                        out.append(Program(rid, (p,)))
                else:
                    args = [self.output(xi, ni) for xi, ni in zip(rhs, n)]
                    for combo in product(*args):
                        out.append(Program(rid, combo))
                # frugal expansion
                for i, ni in enumerate(n):
                    nxt = n[:i] + (ni + 1,) + n[i + 1:]
                    t2 = (rid, nxt)
                    if t2 in members:
                        continue
                    xi = rhs[i]
                    ci = index2cost[xi]
                    if ni + 1 >= len(ci):
                        qi = queues[xi]
                        if not qi:
                            continue  # finite sub-language: no successor level
                        ci.append(qi.peek_key())
                    self._push(x, t2, c + ci[ni + 1] - ci[ni])
            if not q or q.peek_key() != c:
                break
        return out

    def next_level(self) -> tuple[int, list[Program]]:
        """Cost and programs of the next cost level of the start symbol."""
        self._mutated.clear()
        before = self.mutating_calls
        progs = self.output(self.grammar.start, self.level)
        step = self.mutating_calls - before
        if step > self.max_mutating_per_step:
            self.max_mutating_per_step = step
        cost = self.index2cost[self.grammar.start][self.level]
        self.level += 1
        return cost, progs

    def __iter__(self):
        while True:
            try:
                c, progs = self.next_level()
            except Exhausted:
                return
            for p in progs:
                yield c, p

    @property
    def queue_steps(self) -> int:
        return sum(q.steps for q in self.queues)

    @property
    def overflow_pushes(self) -> int:
        return sum(q.overflow_pushes for q in self.queues)
