import json
import subprocess
import sys

import pytest

from glcharp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ideal_prime(capsys):
    code, out, _ = run(capsys, "ideal", "m[p^1]", "prime", "--p", "2")
    assert code == 0 and out.strip() == "GL-prime: true"


def test_ideal_radical(capsys):
    code, out, _ = run(capsys, "ideal", "m^2", "radical", "--p", "2")
    assert code == 0 and out.strip() == "m"


def test_ideal_member(capsys):
    code, out, _ = run(capsys, "ideal", "m * m[p^1]", "member", "x1", "--p", "2")
    assert code == 0 and out.strip() == "false"


def test_nonprime_prints_witness(capsys):
    code, out, _ = run(capsys, "ideal", "m^2", "prime", "--p", "2")
    assert code == 0 and out.startswith("GL-prime: false") and "witness" in out


def test_ideal_other_subcommands(capsys):
    assert run(capsys, "ideal", "m", "contains", "m^2", "--p", "2")[1].strip() == "true"
    assert run(capsys, "ideal", "m[p^1]", "hilbert", "2", "2", "--p", "2")[1].strip() == "1"
    assert run(capsys, "ideal", "m[p^1]", "eval", "2", "2", "--p", "2")[1].split() == ["x1^2", "x2^2"]
    assert run(capsys, "ideal", "(m + m[p^1])^2", "canon", "--p", "3")[1].strip() == "m^2"


def test_parse_error_exit_code(capsys):
    code, out, err = run(capsys, "ideal", "m^(", "prime", "--p", "2")
    assert code == 2 and out == "" and "position 2" in err


def test_domain_error_exit_code(capsys):
    assert run(capsys, "ideal", "m", "radical", "--p", "4")[0] == 2   # p must be prime
    assert run(capsys, "betti", "S", "--p", "2", "--q", "6", "--n", "2")[0] == 3


def test_betti_free(capsys):
    code, out, _ = run(capsys, "betti", "free:0", "--p", "2", "--n", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data[0]["entries"] == [{"dim": 1, "i": 0, "j": 0, "stable": True}]


def test_betti_frobenius_quotient(capsys):
    code, out, _ = run(capsys, "betti", "S/m[p^1]", "--p", "3", "--n", "9", "--imax", "3", "--jmax", "9",
                       "--format", "json")
    data = json.loads(out)[0]
    assert {(e["i"], e["j"]): e["dim"] for e in data["entries"]} == {(0, 0): 1, (1, 3): 9, (2, 6): 36, (3, 9): 84}
    assert data["lines"] == [["2", "0"]]


def test_betti_frobenius_times_m_text(capsys):
    code, out, _ = run(capsys, "betti", "ideal:m[p^1]*m", "--p", "2", "--n", "8")
    assert code == 0
    assert "lines: r = 0*i + 3, r = 1*i + 2" in out


def test_text_and_json_agree(capsys):
    _, text, _ = run(capsys, "betti", "S/m^2", "--p", "2", "--n", "3", "--imax", "3")
    _, js, _ = run(capsys, "betti", "S/m^2", "--p", "2", "--n", "3", "--imax", "3", "--format", "json")
    _, csv, _ = run(capsys, "betti", "S/m^2", "--p", "2", "--n", "3", "--imax", "3", "--format", "csv")
    entries = json.loads(js)[0]["entries"]
    rows = csv.strip().splitlines()[1:]
    assert len(rows) == len(entries)
    for e, row in zip(entries, rows):
        assert row == f"3,{e['i']},{e['j']},{e['dim']},{str(e['stable']).lower()}"
    total = text.splitlines()[-4]
    assert total.split()[1:] == [str(sum(e["dim"] for e in entries if e["i"] == i)) for i in range(4)]


def test_shift_experiment(capsys):
    code, out, _ = run(capsys, "shift-experiment", "free:0", "--p", "2", "--q", "4", "--n-range", "2..3")
    assert code == 0 and out.strip().endswith("l = 0")
    code, out, _ = run(capsys, "shift-experiment", "ideal:m", "--p", "2", "--q", "2", "--n-range", "4..6")
    assert code == 0 and out.strip().endswith("l = 1")
    code, out, _ = run(capsys, "shift-experiment", "S/m[p^1]", "--p", "2", "--q", "4", "--n", "2")
    assert code == 0


def test_shift_experiment_exhaustion(capsys):
    code, out, _ = run(capsys, "shift-experiment", "ideal:m", "--p", "2", "--q", "2", "--n", "4", "--lmax", "0")
    assert code == 5 and "inconclusive" in out


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "spectrum")
    assert code == 0
    code, out, _ = run(capsys, "verify", "leibniz", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["failed"] == 0
    assert run(capsys, "verify", "nosuchsuite")[0] == 2


def test_orbit(capsys):
    code, out, _ = run(capsys, "orbit", "x1^2", "--p", "2", "--n", "3")
    assert code == 0 and out.splitlines()[0] == "dimension: 3"


def test_environment_overrides(capsys, monkeypatch):
    monkeypatch.setenv("GLCHARP_P", "3")
    assert run(capsys, "ideal", "m^2", "prime")[1].startswith("GL-prime: false")
    monkeypatch.setenv("GLCHARP_P", "4")
    # command-line flag takes precedence over the environment
    assert run(capsys, "ideal", "m[p^1]", "prime", "--p", "2")[1].strip() == "GL-prime: true"


def test_time_limit_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "divided-powers", "--limit-time", "1")
    assert code == 4 and out == ""


def test_reproducible_output():
    cmd = [sys.executable, "-m", "glcharp", "betti", "ideal:m^2", "--p", "3", "--n", "4", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
