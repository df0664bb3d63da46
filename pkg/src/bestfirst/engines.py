"""Uniform driver over the four enumerators."""
from __future__ import annotations

from typing import Iterator

from .costs import CostModel
from .enum_bee import BeeSearch
from .enum_eco import EcoSearch
from .enum_heap import HeapSearch
from .errors import Exhausted, UnknownAlgorithm
from .grammar import Grammar
from .terms import Program

ALGORITHMS = ("heap", "bee", "eco", "eco-nobucket")


def make_enumerator(name: str, g: Grammar, m: CostModel, bucket_size: int | None = None):
    if name == "heap":
        return HeapSearch(g, m)
    if name == "bee":
        return BeeSearch(g, m)
    if name == "eco":
        return EcoSearch(g, m, bucketing=True, bucket_size=bucket_size)
    if name == "eco-nobucket":
        return EcoSearch(g, m, bucketing=False)
    raise UnknownAlgorithm(f"unknown algorithm {name!r}; expected one of {', '.join(ALGORITHMS)}")


def batches(e) -> Iterator[tuple[int, list[Program]]]:
    """One ``(cost, programs)`` pair per enumerator step.

    Steps may be empty (Bee calls that generate nothing for the start symbol),
    which lets callers check clocks and budgets while nothing is emitted.
    """
    if isinstance(e, HeapSearch):
        step = lambda: (lambda cp: (cp[0], [cp[1]]))(e.next())
    elif isinstance(e, BeeSearch):
        step = e.next_batch
    else:
        step = e.next_level
    while True:
        try:
            yield step()
        except Exhausted:
            return


def first_n(e, n: int) -> list[tuple[int, Program]]:
    """The first ``n`` start programs with their costs."""
    out: list[tuple[int, Program]] = []
    if n <= 0:
        return out
    for cost, progs in batches(e):
        for p in progs:
            out.append((cost, p))
            if len(out) == n:
                return out
    return out


def queue_steps(e) -> int:
    return e.queue_steps


def bucket_size_of(e) -> int | None:
    return getattr(e, "bucket_size", None)
