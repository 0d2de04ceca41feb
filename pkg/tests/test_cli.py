import io
import json
import sys

import pytest

from onela.cli import main
from onela.conversions import determinize, la_to_ownfa, minimize_dfa
from onela.formats import parse, serialize
from onela.witnesses import gen_jn_damla, gen_kn_omla


def run(argv, stdin="", monkeypatch=None, capsys=None):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cli(monkeypatch, capsys):
    return lambda argv, stdin="": run(argv, stdin, monkeypatch, capsys)


@pytest.fixture
def jn_file(tmp_path):
    path = tmp_path / "jn1.la"
    path.write_text(serialize(gen_jn_damla(1)))
    return str(path)


def test_gen_then_min_dfa(cli):
    code, text, _ = cli(["gen", "kn", "--n", "1"])
    assert code == 0
    code, out, _ = cli(["convert", "--to", "min-dfa"], stdin=text)
    assert code == 0
    dfa = parse(out)
    assert len(dfa.states) >= 4
    assert out.startswith(f"# min-dfa: {len(dfa.states)} states")
    # thin wrapper: same size as the library call
    assert len(dfa.states) == minimize_dfa(determinize(la_to_ownfa(gen_kn_omla(1)))).size


def test_oracle(cli):
    assert cli(["oracle", "jn", "--n", "2", "abab"])[:2] == (0, "Accept\n")
    assert cli(["oracle", "jn", "--n", "2", "abba"])[:2] == (1, "Reject\n")


def test_equiv(cli, jn_file, tmp_path):
    assert cli(["equiv", jn_file, jn_file, "--max-len", "6"])[:2] == (0, "Equal\n")
    assert cli(["equiv", jn_file, jn_file])[:2] == (0, "Equal\n")
    kn = tmp_path / "kn1.la"
    kn.write_text(serialize(gen_kn_omla(1)))
    code, out, _ = cli(["equiv", jn_file, str(kn), "--max-len", "6"])
    assert code == 1 and out == "Counterexample: aab\n"


def test_run_and_trace(cli, jn_file):
    assert cli(["run", jn_file, "aba"])[:2] == (0, "Accept\n")
    assert cli(["run", jn_file, "abb"])[:2] == (1, "Reject\n")
    code, out, _ = cli(["run", jn_file, "aa", "--trace"])
    lines = out.splitlines()
    assert code == 0 and lines[-1] == "Accept"
    assert lines[0].startswith("A0: |- [a] a -|")


def test_validate_and_classify(cli, jn_file):
    assert cli(["validate", jn_file])[:2] == (0, "valid\n")
    code, out, _ = cli(["classify", jn_file])
    assert code == 0 and "always_marking: yes" in out
    code, _, err = cli(["validate"], stdin="LA1\nstates: q\n")
    assert code == 2 and "missing declaration" in err


def test_invalid_machine_exits_2(cli):
    text = "LA1\nstates: q\ninput: a\nwork: a |- -|\ninitial: q\ntransitions:\nq, a -> q, a', +1\n"
    code, _, err = cli(["classify"], stdin=text)
    assert code == 2


def test_twdfa_conversion_of_unsuitable_machine(cli, jn_file):
    code, _, err = cli(["convert", jn_file, "--to", "twdfa"])
    assert code == 2 and "once-marking" in err


def test_usage_errors_exit_2(cli):
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == 2


def test_fooling(cli):
    assert cli(["fooling", "--family", "jn", "--n", "3"])[:2] == (0, "Certified(8)\n")


def test_experiment_report_is_byte_identical(cli, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    code, out, _ = cli(["experiment", "--family", "jn", "--max-n", "2", "--max-len", "5", "--out", str(first)])
    assert code == 0 and "family jn" in out
    cli(["experiment", "--family", "jn", "--max-n", "2", "--max-len", "5", "--out", str(second)])
    assert first.read_bytes() == second.read_bytes()
    report = json.loads(first.read_text())
    assert report["passed"] and [r["min_dfa_states"] for r in report["rows"]] == [4, 17]


def test_export_dot(cli, jn_file):
    code, out, _ = cli(["export-dot", jn_file])
    assert code == 0 and out.startswith('digraph "LA1"')


def test_out_report(cli, jn_file, tmp_path):
    path = tmp_path / "run.json"
    cli(["run", jn_file, "aa", "--out", str(path)])
    assert json.loads(path.read_text())["outcome"] == "Accept"
