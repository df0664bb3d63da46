"""Seeded random small grammars for cross-checking the enumerators."""
from __future__ import annotations

import random

from .grammar import Grammar, validate


def random_grammar(
    seed: int,
    max_rules: int = 12,
    max_nonterminals: int = 4,
    max_arity: int = 3,
    cost_range: tuple[int, int] = (1, 50),
) -> Grammar:
    """A valid deterministic grammar; every non-terminal gets a constant rule
    so the result is always productive."""
    rng = random.Random(seed)
    while True:
        n = rng.randint(1, max_nonterminals)
        names = [f"X{i}" for i in range(n)]
        n_rules = rng.randint(max(n + 1, 2), max(max_rules, n + 1))
        specs = []
        used: set[tuple[str, str]] = set()
        for i, x in enumerate(names):
            specs.append((x, f"c{i}", (), rng.randint(*cost_range)))
            used.add((x, f"c{i}"))
        attempts = 0
        while len(specs) < n_rules and attempts < 100:
            attempts += 1
            lhs = rng.choice(names)
            arity = rng.choices(range(0, max_arity + 1), weights=[2, 4, 3, 1][: max_arity + 1])[0]
            prim = f"p{len(specs)}"
            if (lhs, prim) in used:
                continue
            used.add((lhs, prim))
            rhs = tuple(rng.choice(names) for _ in range(arity))
            specs.append((lhs, prim, rhs, rng.randint(*cost_range)))
        g = Grammar.from_rules(rng.choice(names), specs)
        if not validate(g):
            return g
