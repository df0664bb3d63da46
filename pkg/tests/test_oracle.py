import pytest

from bestfirst.costs import integer_model
from bestfirst.errors import LevelBeyondBound, MemoryCapExceeded
from bestfirst.grammar import Grammar, fig1, make_family
from bestfirst.oracle import enumerate_upto_cost, first_programs, kth_level, level_costs
from bestfirst.terms import render


def test_fig1_scaled_bound_84():
    g = fig1(10)
    table = enumerate_upto_cost(g, integer_model(g), 84)
    s = g.start
    got = {c: sorted(render(p, g) for p in table.programs(s, c)) for c in level_costs(table, s)}
    assert got == {
        11: ['"Hello"'],
        20: ['"World"'],
        62: ["cast(var)"],
        75: ['concat("Hello", "Hello")'],
        77: ["cast(1)"],
        84: ['concat("Hello", "World")', 'concat("World", "Hello")'],
    }


def test_empty_tables():
    g = fig1(10)
    assert enumerate_upto_cost(g, integer_model(g), 0).total() == 0
    assert enumerate_upto_cost(g, integer_model(g), 10).total() == 0


def test_kth_level():
    g = fig1(10)
    table = enumerate_upto_cost(g, integer_model(g), 84)
    assert [render(p, g) for p in kth_level(table, g.start, 2)] == ["cast(var)"]
    with pytest.raises(LevelBeyondBound):
        kth_level(table, g.start, 6)


def test_memory_cap():
    g = make_family("D", 4)
    with pytest.raises(MemoryCapExceeded):
        enumerate_upto_cost(g, integer_model(g), 10_000, max_programs=1000)


def test_first_programs_finite_language():
    g = Grammar.from_rules("S", [("S", "f", ("T",), 1), ("T", "b", (), 1), ("T", "c", (), 2)])
    table, levels = first_programs(g, integer_model(g), 100)
    assert levels == 2
    assert table.bound == 3


def test_first_programs_stops_early():
    g = make_family("D", 2)
    table, levels = first_programs(g, integer_model(g), 50)
    counts = [len(table.programs(g.start, c)) for c in level_costs(table, g.start)]
    assert sum(counts) >= 50 and sum(counts[:-1]) < 50
    assert levels == len(counts)
