import pytest

from bestfirst.dsl import DSLS, Error
from bestfirst.errors import ParseError, UnknownAlgorithm, UnknownGrammar
from bestfirst.grammar import fig1
from bestfirst.oracle import enumerate_upto_cost, level_costs
from bestfirst.pbe import (
    ERROR,
    Interpreter,
    Task,
    build,
    bundled_tasks,
    obs_signature,
    parse_tasks,
    satisfies,
    solve,
)
from bestfirst.terms import render

HELLO = Task("hello", "fig1", [((2,), "Hello3"), ((10,), "Hello11")])


def list_task(examples, name="t"):
    return Task(name, "list", examples)


def test_evaluate_fig1_example():
    g = fig1()
    interp = Interpreter(g, DSLS["fig1"])
    p = g.program
    prog = p("str", "concat", p("str", '"Hello"'),
             p("str", "cast", p("int", "add", p("int", "var"), p("int", "1"))))
    assert interp.evaluate(prog, (2,)) == "Hello3"


def test_list_semantics():
    g, _, interp = build(list_task([(((3, 1, 2),), (1, 2, 3))]))
    p = g.program
    xs = p("list", "var0")
    assert interp.evaluate(p("list", "sort", p("list", "reverse", xs)), ((3, 1, 2),)) == (1, 2, 3)
    assert interp.evaluate(p("int", "head", xs), ((),)) == Error("empty")
    assert interp.evaluate(p("list", "map_sq", xs), ((2**40,),)) == Error("overflow")


def test_evaluation_is_total_and_fuelled():
    g, _, interp = build(list_task([(((1,),), 1)]))
    p = g.program
    deep = p("list", "var0")
    for _ in range(31):
        deep = p("list", "reverse", deep)
    assert interp.evaluate(deep, ((1, 2),), fuel=32) == (2, 1)
    assert isinstance(interp.evaluate(deep, ((1, 2),), fuel=10), Error)


def test_string_semantics():
    t = Task("s", "string", [(("a b",), "A B")])
    g, _, interp = build(t)
    p = g.program
    s = p("str", "var0")
    assert interp.evaluate(p("str", "to_upper", s), ("a b",)) == "A B"
    assert interp.evaluate(p("int", "index_of", s, p("str", '" "')), ("a b",)) == 1
    assert interp.evaluate(p("int", "str_to_int", s), ("x",)) == Error("not an integer")
    bad = p("str", "substr", s, p("int", "2"), p("int", "1"))
    assert isinstance(interp.evaluate(bad, ("abc",)), Error)


def test_solve_fig1_task():
    r = solve(HELLO, "eco", max_programs=10_000)
    assert r.solved
    assert r.model.display(r.cost) == pytest.approx(21.2)
    assert satisfies(r.program, HELLO, Interpreter(r.grammar, DSLS["fig1"]))
    assert r.stats.enumerated <= 10_000
    assert r.stats.pruned > 0


@pytest.mark.parametrize("algo", ["heap", "bee", "eco", "eco-nobucket"])
def test_all_algorithms_find_the_same_cost(algo):
    r = solve(HELLO, algo, max_programs=10_000)
    assert r.solved and r.cost == 2120


def test_zero_budget():
    r = solve(HELLO, "eco", max_programs=0)
    assert not r.solved and r.program is None
    assert r.stats.enumerated == 0


def test_budget_runs_out():
    r = solve(HELLO, "eco", max_programs=5)
    assert not r.solved and r.stats.enumerated == 5


def test_equal_signatures():
    g, _, interp = build(HELLO)
    p = g.program
    a = p("int", "add", p("int", "var"), p("int", "1"))
    b = p("int", "add", p("int", "1"), p("int", "var"))
    assert obs_signature(a, HELLO, interp) == obs_signature(b, HELLO, interp) == (3, 11)


def test_errors_collapse_in_signatures():
    t = list_task([(((),), 0), (((1,),), 1)])
    g, _, interp = build(t)
    p = g.program
    head = p("int", "head", p("list", "var0"))
    last = p("int", "last", p("list", "var0"))
    assert obs_signature(head, t, interp) == obs_signature(last, t, interp) == (ERROR, 1)


def test_identity_task_is_cheapest_level():
    t = list_task([(((4, 2),), (4, 2)), (((1,),), (1,))])
    r = solve(t, "eco", max_programs=1000)
    assert render(r.program, r.grammar) == "var0"
    table = enumerate_upto_cost(r.grammar, r.model, r.cost)
    first = level_costs(table, r.grammar.start)
    interp = Interpreter(r.grammar, DSLS["list"])
    level = next(c for c in first if any(satisfies(q, t, interp) for q in table.programs(r.grammar.start, c)))
    assert level == r.cost


def test_unknown_grammar_and_algorithm():
    with pytest.raises(UnknownGrammar):
        solve(Task("x", "sygus", [((1,), 1)]))
    with pytest.raises(UnknownAlgorithm):
        solve(HELLO, "dfs")
    with pytest.raises(UnknownGrammar):
        solve(list_task([((1.5,), 1)]))


def test_task_validation():
    with pytest.raises(ValueError):
        Task("x", "list", [])
    with pytest.raises(ValueError):
        Task("x", "list", [((1,), 1), ((1, 2), 1)])


def test_parse_tasks():
    text = """
# comment
task a
grammar string
example in: "x, y", 3 out: "x"
example in: "", 0 out: ""

task b
grammar list
example in: [1, 2] out: [2, 1]
"""
    a, b = parse_tasks(text)
    assert a.name == "a" and a.examples[0] == (("x, y", 3), "x")
    assert b.examples == [(((1, 2),), (2, 1))]


@pytest.mark.parametrize(
    "text,line",
    [
        ("example in: 1 out: 2\n", 1),
        ("task a\ngrammar list\nexample 1 out: 2\n", 3),
        ("task a\ngrammar list\nexample in: [1 out: 2\n", 3),
        ("task a\ngrammar list\nexample in: 1 out: 2 3\n", 3),
        ("task a\ngrammar list\n", 1),
        ("task a\nexample in: 1 out: 2\n", 1),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as err:
        parse_tasks(text)
    assert err.value.line == line


def test_bundled_suite():
    tasks = bundled_tasks()
    assert len(tasks) >= 20
    assert {t.grammar_name for t in tasks} >= {"list", "string"}
    assert len({t.name for t in tasks}) == len(tasks)
