import io
import json
import subprocess
import sys

import pytest

from anacomb.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def test_register_json():
    code, out = call("register", "--n", "3", "--format", "json")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert [(r["p"], r["count"]) for r in rows] == [(1, 4), (2, 1)]


def test_fm_mean():
    code, out = call("fm", "--mean", "--n", "1")
    assert code == 0 and json.loads(out)["mean"] == 0.5


def test_rationals_as_strings_and_decimals():
    _, out = call("morris", "--n", "2")
    assert json.loads(out.splitlines()[1])["probability"] == "5/8"
    _, out = call("morris", "--n", "2", "--decimal", "4")
    assert json.loads(out.splitlines()[1])["probability"] == "0.6250"


def test_csv_header_and_quoting():
    _, out = call("fm", "--n", "3", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "n,k,probability"
    assert lines[2] == "3,1,7/8"


def test_usage_errors_exit_2(capsys):
    assert call("nonsense")[0] == 2
    assert call("register", "--n", "-1")[0] == 2
    assert call("register", "--n", "3", "--bogus")[0] == 2
    assert "usage" in capsys.readouterr().err


def test_every_subcommand_runs():
    for argv in (
        ["register", "--n", "5", "--mean"],
        ["morris", "--n", "5", "--trials", "100", "--seed", "1"],
        ["fm", "--n", "5", "--trials", "100"],
        ["dst", "--n", "4"],
        ["dst"],
        ["slices", "--n", "10"],
        ["sums", "--n", "4", "--m", "3"],
        ["sums", "--p", "1", "--q", "2", "--tol", "1e-6"],
        ["ramanujan", "--n", "3"],
        ["digits", "--n", "8"],
    ):
        code, out = call(*argv)
        assert code == 0 and out, argv


def test_verify_failure_exit_code(monkeypatch):
    from anacomb import cli
    from anacomb.report import compare

    monkeypatch.setitem(cli.VERIFIERS, "register", lambda a: [compare("broken", 1, 2)])
    code, out = call("verify", "--suite", "register")
    assert code == 1
    assert json.loads(out)["pass"] is False


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "anacomb", "register", "--n", "2"], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout) == {"n": 2, "p": 1, "count": 2}
