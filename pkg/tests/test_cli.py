import csv
import io
from pathlib import Path

import pytest

from bestfirst.cli import main, parse_ks
from bestfirst.costs import integer_model
from bestfirst.grammar import FIG1_TEXT, fig1
from bestfirst.oracle import enumerate_upto_cost, level_costs
from bestfirst.terms import render

GRAMMARS = Path(__file__).resolve().parent.parent / "grammars"


@pytest.fixture
def fig1_file(tmp_path):
    p = tmp_path / "fig1.gram"
    p.write_text(FIG1_TEXT)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_matches_oracle(capsys, fig1_file):
    code, out, err = run(capsys, "enumerate", "--grammar", fig1_file, "--algo", "eco", "--count", "5")
    assert code == 0
    lines = [l.split("\t") for l in out.splitlines()]
    assert len(lines) == 5
    g = fig1(10)
    table = enumerate_upto_cost(g, integer_model(g), 77)
    want = [(c / 10, render(p, g)) for c in level_costs(table, g.start) for p in table.programs(g.start, c)]
    assert [(float(c), t) for c, t in lines] == want
    assert "# algorithm: eco" in err and "# grammar:" in err


def test_enumerate_canonical_is_identical_across_algorithms(capsys):
    outs = set()
    for algo in ("heap", "bee", "eco", "eco-nobucket"):
        code, out, _ = run(capsys, "enumerate", "--grammar", "fig1", "--algo", algo,
                           "--count", "40", "--canonical")
        assert code == 0
        outs.add(out)
    assert len(outs) == 1


def test_validate_duplicate(capsys):
    code, out, err = run(capsys, "validate", "--grammar", str(GRAMMARS / "dup.gram"))
    assert code == 1
    assert "error: determinism" in err


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", "--grammar", str(GRAMMARS / "fig1.gram"))
    assert code == 0 and out.startswith("ok: 2 non-terminals, 7 rules")


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["enumerate", "--algo", "dfs"])
    assert exc.value.code == 1
    code, _, err = run(capsys, "enumerate")
    assert code == 1 and err.splitlines()[-1].startswith("error:")
    code, _, err = run(capsys, "enumerate", "--grammar", "/no/such/file")
    assert code == 1


def test_bad_grammar_file(capsys, tmp_path):
    p = tmp_path / "bad.gram"
    p.write_text("start S\nrule S -> a cost\n")
    code, _, err = run(capsys, "enumerate", "--grammar", str(p))
    assert code == 1 and "error: 2:" in err


def test_solve_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", "--task", str(GRAMMARS / "hello.task"), "--count", "10000")
    assert code == 0
    assert out.startswith("hello_successor\tsolved\t21.2\t")
    code, out, _ = run(capsys, "solve", "--task", str(GRAMMARS / "hello.task"), "--count", "3")
    assert code == 2 and "\tunsolved\t" in out


def test_bench_scaling_csv(capsys):
    code, out, err = run(capsys, "bench-scaling", "--family", "N", "--k", "4..8:4", "--target", "1000",
                         "--algos", "heap,bee,eco", "--seeds", "2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {(r["k"], r["algorithm"], r["seed"]) for r in rows if r["metric"] == "seconds_to_target"} == {
        (k, a, s) for k in ("4", "8") for a in ("heap", "bee", "eco") for s in ("0", "1")
    }
    assert "# command: bench-scaling" in err


def test_bench_throughput_and_plot_data(capsys, tmp_path):
    path = tmp_path / "t.csv"
    code, _, _ = run(capsys, "bench-throughput", "--family", "D", "--k", "2", "--duration", "1",
                     "--algos", "eco", "--seeds", "1", "--csv", str(path))
    assert code == 0
    code, out, _ = run(capsys, "plot-data", "--csv", str(path), "--metric", "programs")
    assert code == 0 and out.startswith("# D2 eco seed=0\n1 ")


def test_bench_delay(capsys):
    code, out, err = run(capsys, "bench-delay", "--family", "D", "--k", "2", "--algos", "eco",
                         "--count", "200000")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {r["block_or_tick"] for r in rows} == {"0", "1"}
    assert "last/first block queue ops" in err


def test_gen_grammar_round_trips(capsys, tmp_path):
    code, out, _ = run(capsys, "gen-grammar", "--family", "R", "--k", "3", "--seed", "4")
    assert code == 0
    p = tmp_path / "r3.gram"
    p.write_text(out)
    code, again, _ = run(capsys, "gen-grammar", "--grammar", str(p))
    assert again == out


def test_parse_ks():
    assert parse_ks("4") == [4]
    assert parse_ks("4,16") == [4, 16]
    assert parse_ks("4..16:4") == [4, 8, 12, 16]
    assert parse_ks("2..4") == [2, 3, 4]
