import csv
import io
import json
import math
import subprocess
import sys

import pytest

from afetrace import __version__
from afetrace.cli import ELLIPTIC_COLUMNS, EXIT_INVALID, EXIT_OK, EXIT_TOLERANCE, main, run


def run_json(argv):
    code, out = run(argv)
    return code, (json.loads(out) if code != EXIT_INVALID else out)


def test_lvalue_afe():
    code, doc = run_json(["lvalue", "-D", "-4", "--route", "afe"])
    assert code == EXIT_OK
    assert abs(doc["rows"][0]["value"] - math.pi / 4) < 1e-8
    assert doc["config"]["version"] == __version__
    assert doc["config"]["route"] == "afe"
    assert "jobs" not in doc["config"]


def test_lvalue_trivial_character_rejected():
    code, out = run(["lvalue", "-D", "1"])
    assert code == EXIT_INVALID and "error" in out


def test_lvalue_cnf():
    code, doc = run_json(["lvalue", "-D", "-23", "--route", "cnf"])
    assert code == EXIT_OK
    assert abs(doc["rows"][0]["value"] - 3 * math.pi / math.sqrt(23)) < 1e-12


@pytest.mark.parametrize("argv", [
    ["lvalue", "-D", "3"],
    ["lvalue", "-D", "-16", "--route", "cnf"],
    ["lvalue", "-D", "-4", "--route", "cnf", "-s", "2"],
    ["lvalue", "-D", "-4", "--tol", "-1"],
    ["elliptic", "-p", "4", "-k", "1", "-M", "3"],
    ["elliptic", "-p", "2", "-k", "1", "-M", "-1"],
])
def test_invalid_inputs(argv):
    assert run(argv)[0] == EXIT_INVALID


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        run(["lvalue", "--route", "bogus", "-D", "5"])
    assert exc.value.code == 2


def test_tolerance_failure_exit_3():
    code, doc = run_json(["lvalue", "-D", "-4", "--nmax", "100", "--tol", "1e-12"])
    assert code == EXIT_TOLERANCE
    assert doc["summary"]["passed"] is False


def test_elliptic_csv_table():
    code, out = run(["elliptic", "-p", "2", "-k", "2", "-M", "10", "--format", "csv"])
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].startswith("# config ") and lines[1].startswith("# summary ")
    config = json.loads(lines[0][len("# config "):])
    assert config["p"] == 2 and config["version"] == __version__
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[2:]))))
    assert list(rows[0]) == ELLIPTIC_COLUMNS
    row0 = next(r for r in rows if r["m"] == "0" and r["sign"] == "1")
    assert (row0["delta"], row0["s_gamma"], row0["D_E"], row0["padic_product"]) == ("-16", "2", "-4", "3")


def test_elliptic_include_squares():
    code, doc = run_json(["elliptic", "-p", "2", "-k", "1", "-M", "0", "--include-squares"])
    assert code == EXIT_OK
    assert sorted(r["delta"] for r in doc["rows"]) == [-8, 8]
    code, doc = run_json(["elliptic", "-p", "2", "-k", "1", "-M", "3", "--include-squares"])
    squares = [r for r in doc["rows"] if r["volume"] is None]
    # m = +-3 with det 2 gives delta 1; m = +-1 with det -2 gives delta 9
    assert {r["delta"] for r in squares} == {1, 9}
    assert all(r["term"] is None for r in squares)


def test_elliptic_excludes_squares_by_default():
    code, doc = run_json(["elliptic", "-p", "2", "-k", "1", "-M", "3"])
    assert code == EXIT_OK
    assert {1, 9}.isdisjoint(r["delta"] for r in doc["rows"])
    assert doc["summary"]["n_classes"] == len(doc["rows"])


def test_elliptic_json_mirrors_csv():
    _, doc = run_json(["elliptic", "-p", "3", "-k", "1", "-M", "4"])
    _, out = run(["elliptic", "-p", "3", "-k", "1", "-M", "4", "--format", "csv"])
    rows = list(csv.DictReader(io.StringIO("\n".join(out.splitlines()[2:]))))
    assert len(rows) == len(doc["rows"])
    for a, b in zip(doc["rows"], rows):
        assert list(a) == ELLIPTIC_COLUMNS
        assert float(b["term"]) == a["term"]


def test_verify_small_suites():
    for argv in (["verify", "split", "--cases", "10"], ["verify", "stirling"], ["verify", "decay", "-m", "4"]):
        code, doc = run_json(argv)
        assert code == EXIT_OK, argv
        assert doc["summary"]["failed"] == 0


def test_verify_lfunsum_small():
    code, doc = run_json(["verify", "lfunsum", "--pmax", "3", "--kmax", "2", "--mmax", "10"])
    assert code == EXIT_OK
    assert doc["summary"]["cases"] == len(doc["rows"]) > 20


def test_verify_smooth_negative_control():
    code, doc = run_json(["verify", "smooth", "--negative-control"])
    assert code == EXIT_OK
    controls = [r for r in doc["rows"] if r["kind"] == "control"]
    assert len(controls) == 2 and all(r["passed"] for r in controls)
    assert all(r["deriv_finest"] > 1e-2 for r in controls)


def test_verify_kottwitz_reports_failures():
    code, doc = run_json(["verify", "kottwitz", "--pmax", "3", "--nmax", "1"])
    spot = {(r["p"], r["variant"], r["val_beta"]): r for r in doc["rows"]}
    assert spot[(2, "unramified", None)]["value"] == "85"
    assert spot[(3, "ramified", 1)]["value"] == "157"
    # p = 3 unramified is 483/2: the verbatim formula is not integral there
    assert spot[(3, "unramified", None)]["value"] == "483/2"
    assert code == EXIT_TOLERANCE


def test_seed_changes_split_configs():
    _, a = run_json(["verify", "split", "--cases", "5", "--seed", "1"])
    _, b = run_json(["verify", "split", "--cases", "5", "--seed", "2"])
    assert a["rows"] != b["rows"]
    assert a["config"]["seed"] == 1


def test_jobs_do_not_change_output():
    argv = ["verify", "lfunsum", "--pmax", "3", "--kmax", "2", "--mmax", "12"]
    assert run(argv + ["--jobs", "1"]) == run(argv + ["--jobs", "3"])


def test_jobs_env_default(monkeypatch):
    monkeypatch.setenv("AFETRACE_JOBS", "2")
    code, _ = run(["elliptic", "-p", "2", "-k", "1", "-M", "3"])
    assert code == EXIT_OK


def test_main_writes_stdout(capsys):
    assert main(["lvalue", "-D", "5"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["rows"][0]["value"] - 2 * math.log((1 + math.sqrt(5)) / 2) / math.sqrt(5)) < 1e-10


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "afetrace", "lvalue", "-D", "-4"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["rows"][0]["route"] == "direct"
