"""Cost models: rule costs as exact integers, plus successor-gap estimation.

Both modes store integer costs so that all cost comparisons are exact:

* ``int`` mode uses the grammar's integer costs directly (``unit = 1``), or
  discretized log-probabilities in steps of ``delta``;
* ``real`` mode rounds real costs to multiples of ``rho`` and stores the
  multiplier, so 1.1 with ``rho = 0.01`` is stored as 110.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import CostOverflow, InvalidProbability
from .grammar import Grammar, compute_min_programs, max_cost_if_finite
from .terms import Program

DEFAULT_DELTA = 1e-5
DEFAULT_RHO = 1e-2
COST_LIMIT = 2**63 - 1


@dataclass(frozen=True)
class CostModel:
    mode: str  # "int" or "real"
    unit: float
    rule_costs: tuple[int, ...]

    def __post_init__(self):
        if self.mode not in ("int", "real"):
            raise ValueError(f"unknown cost mode {self.mode!r}")
        for c in self.rule_costs:
            if c < 1:
                raise ValueError("rule costs must be positive integers")

    def display(self, cost: int):
        """Cost in the user's units (float in real mode)."""
        if self.mode == "real":
            return round(cost * self.unit, 10)
        return cost

    def describe(self) -> str:
        if self.mode == "real":
            return f"real(rho={self.unit:g})"
        if self.unit != 1:
            return f"int(delta={self.unit:g})"
        return "int"


def integer_model(g: Grammar) -> CostModel:
    """Use the grammar's costs as-is; all must be positive integers."""
    out = []
    for r in g.rules:
        c = r.cost
        if isinstance(c, float):
            if not c.is_integer():
                raise ValueError(
                    f"rule {r.id} has non-integer cost {c}; use real cost mode"
                )
            c = int(c)
        out.append(c)
    return CostModel("int", 1, tuple(out))


def real_model(g: Grammar, rho: float = DEFAULT_RHO) -> CostModel:
    """Round every rule cost to a multiple of ``rho`` (clamped to one step)."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    return CostModel(
        "real", rho, tuple(max(1, round(r.cost / rho)) for r in g.rules)
    )


def model_for(g: Grammar, mode: str = "int", rho: float = DEFAULT_RHO) -> CostModel:
    if mode == "int":
        return integer_model(g)
    if mode == "real":
        return real_model(g, rho)
    raise ValueError(f"unknown cost mode {mode!r}")


def discretize(p: float, delta: float = DEFAULT_DELTA) -> int:
    if not (0 < p <= 1):
        raise InvalidProbability(f"probability {p} outside (0, 1]")
    return max(1, round(-math.log(p) / delta))


def from_probabilities(
    g: Grammar, rule_probs: Mapping[int, float] | Sequence[float], delta: float = DEFAULT_DELTA
) -> CostModel:
    """Integer costs ``max(1, round(-ln p / delta))`` from rule probabilities."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    if isinstance(rule_probs, Mapping):
        probs = [rule_probs[r.id] for r in g.rules]
    else:
        probs = list(rule_probs)
    if len(probs) != len(g.rules):
        raise ValueError("need exactly one probability per rule")
    return CostModel("int", delta, tuple(discretize(p, delta) for p in probs))


def load_probabilities(text: str, g: Grammar, delta: float = DEFAULT_DELTA) -> CostModel:
    """Parse ``prob <lhs> <primitive> <p>`` lines into an integer cost model."""
    probs: dict[int, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith("prob") else raw.strip()
        if not line:
            continue
        parts = line.rsplit(None, 1)
        head = parts[0].split(None, 2)
        if len(parts) != 2 or len(head) != 3 or head[0] != "prob":
            raise ValueError(f"line {lineno}: expected 'prob <lhs> <primitive> <p>'")
        _, lhs, prim = head
        rule = g.rule_for(lhs, prim)
        probs[rule.id] = float(parts[1])
    missing = [r.id for r in g.rules if r.id not in probs]
    if missing:
        raise ValueError(f"no probability for rule(s) {missing}")
    return from_probabilities(g, probs, delta)


def program_cost(p: Program, m: CostModel) -> int:
    rc = m.rule_costs
    total = 0
    stack = [p]
    while stack:
        q = stack.pop()
        total += rc[q.rule]
        stack.extend(q.children)
    if total > COST_LIMIT:
        raise CostOverflow(f"program cost {total} exceeds 64-bit range")
    return total


# -- successor gaps -----------------------------------------------------------


@dataclass
class GapEstimate:
    m_hat: int
    method: str  # "ExactOracle" | "EmpiricalSample"
    sample_size: int
    per_nonterminal: list[int] = field(default_factory=list)
    # max over X of the initial key spread of X's cost-tuple queue; the queue
    # spread is bounded by max(m_hat, initial_spread) at all times
    initial_spread: int = 0

    @property
    def spread_bound(self) -> int:
        return max(self.m_hat, self.initial_spread)


def realized_costs(
    g: Grammar,
    m: CostModel,
    bound: int,
    enough: Sequence[int] | None = None,
    sweep_to: int = 0,
) -> list[list[int]]:
    """Sorted distinct program costs ``<= bound`` per non-terminal.

    With ``enough`` the sweep stops once every non-terminal ``x`` has at least
    ``enough[x]`` costs and ``sweep_to`` has been passed; the lists are then
    exact only up to the last cost swept.

    Only cost sets are tracked, as big-integer bitsets.  A rule
    ``X -> f(X1, ..., Xk)`` with ``k >= 2`` is checked against the sumset of
    ``X1`` and a composite node standing for ``X2 + ... + Xk``.  A value ``v``
    of any node is final once the sweep reaches ``v``, because every part of a
    sum is strictly cheaper than the sum.
    """
    n = len(g.nonterminals)
    full = (1 << (bound + 1)) - 1
    fwd = [0] * n  # bit v: value v realized
    rev = [0] * n  # bit bound - v: value v realized
    composites: list[tuple[int, int]] = []  # (head node, tail node)
    chain: dict[tuple[int, ...], int] = {}

    def node(xs: tuple[int, ...]) -> int:
        if len(xs) == 1:
            return xs[0]
        if xs not in chain:
            tail = node(xs[1:])
            fwd.append(0)
            rev.append(0)
            composites.append((xs[0], tail))
            chain[xs] = len(fwd) - 1
        return chain[xs]

    checks = []
    for r in g.rules:
        cost = m.rule_costs[r.id]
        if not r.rhs:
            checks.append((r.lhs, cost, None, None))
        elif len(r.rhs) == 1:
            checks.append((r.lhs, cost, r.rhs[0], None))
        else:
            checks.append((r.lhs, cost, r.rhs[0], node(r.rhs[1:])))
    parents: dict[int, list[tuple[int, int]]] = {}
    for i, (a, b) in enumerate(composites):
        q = n + i
        parents.setdefault(a, []).append((q, b))
        parents.setdefault(b, []).append((q, a))

    lists: list[list[int]] = [[] for _ in range(n)]
    for c in range(1, bound + 1):
        bit = 1 << c
        events = []
        for x, cost, a, b in checks:
            if fwd[x] & bit:
                continue
            rest = c - cost
            if rest < 0:
                continue
            if a is None:
                ok = rest == 0
            elif b is None:
                ok = rest >= 1 and (fwd[a] >> rest) & 1
            else:
                ok = rest >= 2 and fwd[a] & (rev[b] >> (bound - rest))
            if ok:
                fwd[x] |= bit
                rev[x] |= 1 << (bound - c)
                events.append(x)
        for x in events:
            lists[x].append(c)
        if enough is not None and c >= sweep_to and all(
            len(l) >= e for l, e in zip(lists, enough)
        ):
            break
        # composites created later never feed earlier ones, so one pass in
        # creation order finalizes all values at c
        events += [n + i for i in range(len(composites)) if fwd[n + i] & bit]
        for v in events:
            for q, other in parents.get(v, ()):
                fwd[q] |= (fwd[other] << c) & full
                rev[q] |= rev[other] >> c
    return lists


def _initial_spread(g: Grammar, m: CostModel, min_cost) -> int:
    keys: list[list[int]] = [[] for _ in g.nonterminals]
    for r in g.rules:
        keys[r.lhs].append(m.rule_costs[r.id] + sum(min_cost[x] for x in r.rhs))
    return max(max(k) - min(k) for k in keys)


def estimate_successor_gap(
    g: Grammar, m: CostModel, probe_budget: int = 50, max_bound: int = 20_000
) -> GapEstimate:
    """Largest gap between adjacent realized costs over a probed prefix.

    The first ``probe_budget`` distinct costs of every non-terminal are
    examined.  When a cost bound below ``max_bound`` covers them, the sets are
    computed exactly by dynamic programming (``ExactOracle``); otherwise the
    levels are read off an Eco enumeration run (``EmpiricalSample``).  Either
    way the result only covers the prefix and is a sizing hint, not a proof.
    """
    _, min_cost = compute_min_programs(g, m.rule_costs)
    init = _initial_spread(g, m, min_cost)
    # A finite sub-language is covered once the sweep passes its largest cost.
    caps = [max_cost_if_finite(g, m.rule_costs, x) for x in range(len(g.nonterminals))]
    enough = [probe_budget if cap is None else 0 for cap in caps]
    sweep_to = max((cap for cap in caps if cap is not None), default=0)
    per_x: list[list[int]] | None = None
    if sweep_to <= max_bound:
        lists = realized_costs(g, m, max_bound, enough, sweep_to)
        if all(len(l) >= e for l, e in zip(lists, enough)):
            per_x = lists
    if per_x is not None:
        method = "ExactOracle"
    else:
        per_x = _levels_from_eco(g, m, probe_budget)
        method = "EmpiricalSample"
    gaps = []
    for costs in per_x:
        prefix = costs[:probe_budget]
        gaps.append(max((b - a for a, b in zip(prefix, prefix[1:])), default=0))
    return GapEstimate(
        m_hat=max(gaps, default=0),
        method=method,
        sample_size=sum(min(len(c), probe_budget) for c in per_x),
        per_nonterminal=gaps,
        initial_spread=init,
    )


def _levels_from_eco(g: Grammar, m: CostModel, probe_budget: int) -> list[list[int]]:
    from .enum_eco import EcoSearch
    from .errors import Exhausted

    eco = EcoSearch(g, m, bucketing=False)
    out = []
    for x in range(len(g.nonterminals)):
        for level in range(probe_budget):
            try:
                eco.output(x, level)
            except Exhausted:
                break
        out.append(list(eco.index2cost[x][: eco.levels_done(x)]))
    return out
