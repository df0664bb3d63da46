"""Immutable program trees.

A program is identified by the derivation rule applied at its root and its
ordered children.  Since grammars are deterministic, the rule id alone fixes
both the primitive and the non-terminal the program is generated from.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Iterator

if TYPE_CHECKING:
    from .grammar import Grammar


class Program:
    __slots__ = ("rule", "children", "size", "_hash")

    def __init__(self, rule: int, children: tuple[Program, ...] = ()):
        self.rule = rule
        self.children = children
        size = 1
        for c in children:
            size += c.size
        self.size = size
        self._hash = hash((rule, children))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Program):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.rule == other.rule
            and self.children == other.children
        )

    def __repr__(self) -> str:
        if not self.children:
            return f"Program({self.rule})"
        return f"Program({self.rule}, {self.children!r})"

    def walk(self) -> Iterator[Program]:
        """Pre-order traversal."""
        stack = [self]
        while stack:
            p = stack.pop()
            yield p
            stack.extend(reversed(p.children))


# Stands for the "no program yet" argument of successor computations.
BOTTOM = Program(-1)


def size(p: Program) -> int:
    return p.size


def depth(p: Program) -> int:
    """Longest root-to-leaf path, counting nodes (a leaf has depth 1)."""
    best = 0
    stack = [(p, 1)]
    while stack:
        q, d = stack.pop()
        if d > best:
            best = d
        for c in q.children:
            stack.append((c, d + 1))
    return best


def render(p: Program, g: Grammar) -> str:
    """Canonical text form: ``f(a, b)``, arity-0 primitives as bare names."""
    if p is BOTTOM:
        raise ValueError("the bottom sentinel has no rendering")
    name = g.rules[p.rule].primitive.name
    if not p.children:
        return name
    return name + "(" + ", ".join(render(c, g) for c in p.children) + ")"
