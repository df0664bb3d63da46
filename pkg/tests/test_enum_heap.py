import pytest

from bestfirst.costs import integer_model, real_model
from bestfirst.enum_heap import HeapSearch
from bestfirst.errors import Exhausted
from bestfirst.grammar import Grammar, fig1
from bestfirst.terms import BOTTOM, render


def heap_contents(h, x, g):
    return sorted((k, render(p, g)) for k, _, p in h.heaps[x]._heap)


def test_init_state_fig1():
    g = fig1()
    h = HeapSearch(g, real_model(g))
    s, i = g.nonterminal("str"), g.nonterminal("int")
    assert render(h.succ[s][BOTTOM], g) == '"Hello"'
    assert render(h.succ[i][BOTTOM], g) == "var"
    assert heap_contents(h, s, g) == [
        (200, '"World"'), (620, "cast(var)"), (750, 'concat("Hello", "Hello")')
    ]
    assert heap_contents(h, i, g) == [(330, "1"), (890, "add(var, var)")]
    assert sorted(render(p, g) for p in h.seen) == sorted(
        ['"Hello"', '"World"', 'concat("Hello", "Hello")', "cast(var)", "var", "1", "add(var, var)"]
    )


def test_first_outputs_fig1():
    g = fig1()
    h = HeapSearch(g, real_model(g))
    got = [h.next() for _ in range(4)]
    assert [(c, render(p, g)) for c, p in got] == [
        (110, '"Hello"'), (200, '"World"'), (620, "cast(var)"), (750, 'concat("Hello", "Hello")')
    ]


def test_cast_one_inserted_while_advancing_cast_var():
    g = fig1()
    h = HeapSearch(g, real_model(g))
    s, i = g.nonterminal("str"), g.nonterminal("int")
    for _ in range(3):
        h.next()
    h.next()  # successor of cast(var): expands it first
    assert render(h.succ[i][g.program("int", "var")], g) == "1"
    cast1 = g.program("str", "cast", g.program("int", "1"))
    assert cast1 in h.seen and h.cost[cast1] == 770


def test_memoized_successor():
    g = fig1()
    h = HeapSearch(g, real_model(g))
    a = h.compute_successor(BOTTOM, 0)
    steps = h.queue_steps
    assert h.compute_successor(BOTTOM, 0) is a
    assert h.queue_steps == steps


def test_single_rule_grammar():
    g = Grammar.from_rules("S", [("S", "a", (), 5)])
    h = HeapSearch(g, integer_model(g))
    assert len(h.heaps[0]) == 0
    assert h.next() == (5, g.program("S", "a"))
    with pytest.raises(Exhausted):
        h.next()
    assert list(h) == []


def test_finite_language_with_arguments():
    g = Grammar.from_rules(
        "S", [("S", "f", ("T", "T"), 1), ("T", "b", (), 1), ("T", "c", (), 2)]
    )
    out = list(HeapSearch(g, integer_model(g)))
    assert [c for c, _ in out] == [3, 4, 4, 5]
    assert len({p for _, p in out}) == 4
