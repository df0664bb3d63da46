"""Bee Search: one global queue of cost tuples over globally indexed cost
levels.  Generation filters candidate arguments by the non-terminal that
produced them, so some calls emit nothing."""
from __future__ import annotations

from itertools import product

from .costs import CostModel
from .errors import Exhausted
from .grammar import Grammar, compute_min_programs
from .queues import KeyedQueue
from .terms import Program


class BeeSearch:
    def __init__(self, g: Grammar, m: CostModel):
        self.grammar = g
        self.model = m
        _, min_cost = compute_min_programs(g, m.rule_costs)
        c = min(min_cost)
        self.index2cost: list[int] = [c]
        # generated[i] holds the programs of cost index2cost[i]
        self.generated: list[list[Program]] = [[]]
        self.queue = KeyedQueue()
        self.members: set[tuple[int, tuple[int, ...]]] = set()
        # successor tuples whose new index has no cost yet, keyed by that index;
        # each entry carries cost(t) - index2cost[n_i]
        self.pending: dict[int, list[tuple[tuple, int]]] = {}
        self.calls = 0
        self.empty_calls = 0
        self._lhs = [r.lhs for r in g.rules]
        self._rhs = [r.rhs for r in g.rules]
        for r in g.rules:
            t = (r.id, (0,) * r.arity)
            self.queue.push(t, m.rule_costs[r.id] + r.arity * c)
            self.members.add(t)

    def output(self) -> list[Program]:
        """Pop one cost tuple and return every program it represents."""
        queue = self.queue
        if not queue:
            raise Exhausted(self.grammar.name_of(self.grammar.start))
        t, c = queue.pop()
        self.members.discard(t)
        self.calls += 1
        i2c = self.index2cost
        if c != i2c[-1]:
            i2c.append(c)
            self.generated.append([])
            self._flush(len(i2c) - 1)
        bucket = self.generated[-1]
        rid, n = t
        if not n:
            p = Program(rid)
            bucket.append(p)
            return [p]

        rhs = self._rhs[rid]
        lhs = self._lhs
        gen = self.generated
        args = []
        for x, ni in zip(rhs, n):
            args.append([p for p in gen[ni] if lhs[p.rule] == x])
        out = [Program(rid, combo) for combo in product(*args)]
        bucket.extend(out)
        if not out:
            self.empty_calls += 1

        members = self.members
        for i, ni in enumerate(n):
            nxt = n[:i] + (ni + 1,) + n[i + 1:]
            t2 = (rid, nxt)
            if t2 in members:
                continue
            members.add(t2)
            base = c - i2c[ni]
            if ni + 1 < len(i2c):
                queue.push(t2, base + i2c[ni + 1])
            else:
                self.pending.setdefault(ni + 1, []).append((t2, base))
        return out

    def _flush(self, index: int) -> None:
        waiting = self.pending.pop(index, None)
        if waiting:
            cost = self.index2cost[index]
            for t2, base in waiting:
                self.queue.push(t2, base + cost)

    def next_batch(self) -> tuple[int, list[Program]]:
        """One call to :meth:`output`, keeping only start-symbol programs."""
        out = self.output()
        start = self.grammar.start
        lhs = self._lhs
        if out and lhs[out[0].rule] != start:
            out = []
        return self.index2cost[-1], out

    def __iter__(self):
        while True:
            try:
                c, progs = self.next_batch()
            except Exhausted:
                return
            for p in progs:
                yield c, p

    @property
    def queue_steps(self) -> int:
        return self.queue.steps
