import csv
import io
import json

import numpy as np
import pytest

from orderunit.cli import UsageError, main, parse_unit


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


# --- unit parsing ----------------------------------------------------------


def test_parse_unit_forms():
    assert np.array_equal(parse_unit("1,-1,1", 3), [1, -1, 1])
    assert np.array_equal(parse_unit("e2", 3), [0, 1, 0])
    assert np.array_equal(parse_unit("-e3", 3), [0, 0, -1])
    assert np.array_equal(parse_unit("sign:+-+", 3), [1, -1, 1])
    for bad in ("e0", "e4", "sign:+-", "sign:+x+", "1,2", "a,b,c", "1,nan,0"):
        with pytest.raises(UsageError):
            parse_unit(bad, 3)


# --- check-nou ------------------------------------------------------------


def test_check_nou_verified(capsys):
    code, doc, _ = run_json(capsys, "check-nou", "--p", "inf", "--dim", "4", "--unit", "1,-1,1,1")
    assert code == 0
    assert doc["result"]["verdict"]["status"] == "VerifiedExact"
    assert doc["schema"] == 1 and doc["version"]
    assert doc["config"]["seed"] == 0 and doc["config"]["budget"] == 10_000


def test_check_nou_l1_falsified(capsys):
    code, doc, _ = run_json(capsys, "check-nou", "--p", "1", "--dim", "3", "--unit", "0.5,0.5,0")
    assert code == 1
    w = doc["result"]["verdict"]["witness"]
    assert float(w["lambda_star"]) == 4.0
    assert [float(t) for t in w["x"]] == [1.0, 0.0, 0.0]


def test_check_nou_l2_falsified(capsys):
    code, doc, _ = run_json(capsys, "check-nou", "--p", "2", "--dim", "2", "--unit", "1,0")
    assert code == 1
    assert doc["result"]["verdict"]["status"] == "Falsified"


def test_check_nou_normalises_with_warning(capsys):
    code, doc, err = run_json(capsys, "check-nou", "--p", "inf", "--dim", "2", "--unit", "2,-2")
    assert code == 0 and "warning" in err
    assert [float(t) for t in doc["result"]["verdict"]["candidate"]] == [1.0, -1.0]


def test_check_nou_shorthands(capsys):
    assert main(["check-nou", "--p", "1", "--dim", "4", "--unit=-e3"]) == 0
    assert main(["check-nou", "--p", "inf", "--dim", "3", "--unit=sign:-+-"]) == 0
    capsys.readouterr()


@pytest.mark.parametrize(
    "argv",
    [
        ["check-nou", "--p", "0.5", "--dim", "2", "--unit", "1,0"],
        ["check-nou", "--p", "2", "--dim", "2", "--unit", "0,0"],
        ["check-nou", "--p", "2", "--dim", "2", "--unit", "1,0,0"],
        ["check-nou", "--p", "2", "--dim", "2"],
        ["no-such-command"],
    ],
)
def test_bad_input_exit_2(argv, capsys):
    assert main(argv) == 2
    capsys.readouterr()


def test_check_nou_csv(capsys):
    code, out, _ = run(capsys, "check-nou", "--p", "1", "--dim", "3", "--unit", "0.5,0.5,0", "--format", "csv")
    assert code == 1
    assert out.count("\r\n") == 2
    (row,) = list(csv.DictReader(io.StringIO(out, newline="")))
    assert row["status"] == "Falsified" and float(row["lambda_star"]) == 4.0


# --- sweep ----------------------------------------------------------------


def test_sweep_zero_survivors(capsys):
    code, doc, _ = run_json(capsys, "sweep", "--p", "2", "--dim", "2", "--candidates", "5", "--budget", "1000", "--workers", "1")
    assert code == 0
    (row,) = doc["result"]["report"]["data"]["per_p"]
    assert row["survivors"] == 0
    assert any("conjecture evidence" in n for n in doc["result"]["report"]["notes"])


def test_sweep_csv(capsys):
    code, out, _ = run(
        capsys, "sweep", "--p", "1.5,3", "--dim", "3", "--candidates", "3",
        "--budget", "500", "--workers", "1", "--format", "csv",
    )
    rows = list(csv.DictReader(io.StringIO(out, newline="")))
    assert code == 0 and [float(r["p"]) for r in rows] == [1.5, 3.0]
    assert all(r["survivors"] == "0" for r in rows)


def test_sweep_empty_and_bad_grid(capsys):
    code, doc, _ = run_json(capsys, "sweep", "--p", "", "--workers", "1")
    assert code == 0 and doc["result"]["report"]["data"]["per_p"] == []
    assert main(["sweep", "--p", "1,2"]) == 2
    assert main(["sweep", "--p", "2,inf"]) == 2
    assert main(["sweep", "--p", "x"]) == 2
    capsys.readouterr()


# --- adjoin ---------------------------------------------------------------


def test_adjoin_spin_factor(capsys):
    code, doc, _ = run_json(capsys, "adjoin", "--v", "r1", "--x", "l2:3")
    assert code == 0
    names = {r["name"]: r["passed"] for r in doc["result"]["reports"]}
    assert names["lorentz_equivalence"]


def test_adjoin_iterate(capsys):
    code, doc, _ = run_json(capsys, "adjoin", "--v", "r1", "--x", "l1:2", "--iterate")
    assert code == 0
    names = {r["name"]: r["passed"] for r in doc["result"]["reports"]}
    assert names["iterate_vs_single_shot"]


def test_adjoin_pure_states(capsys):
    code, doc, _ = run_json(capsys, "adjoin", "--v", "linf:2", "--x", "linf:2", "--pure-states")
    assert code == 0
    (rep,) = [r for r in doc["result"]["reports"] if r["name"] == "pure_states_product"]
    assert len(rep["data"]["pure_states"]) == 8


@pytest.mark.parametrize(
    "argv",
    [
        ["adjoin", "--v", "l2:2", "--x", "r"],
        ["adjoin", "--v", "r1", "--x", "l3:2"],
        ["adjoin", "--v", "linf:2", "--x", "l1:2", "--iterate"],
        ["adjoin", "--v", "r1", "--x", "l2:2", "--pure-states"],
    ],
)
def test_adjoin_unsupported(argv, capsys):
    assert main(argv) == 2
    capsys.readouterr()


# --- order-norm -----------------------------------------------------------


def test_order_norm(capsys):
    code, doc, _ = run_json(
        capsys, "order-norm", "--p", "1", "--dim", "4", "--unit", "e1",
        "--x", "0.3,-0.2,0.1,0", "--x", "0,0,0,0", "--x", "1,0,0,0",
    )
    assert code == 0
    vals = [float(r["order_unit_norm"]) for r in doc["result"]["queries"]]
    assert vals == pytest.approx([0.6, 0.0, 1.0], abs=1e-9)


def test_order_norm_csv_and_file(tmp_path, capsys):
    f = tmp_path / "q.txt"
    f.write_text("# queries\n0.3,-0.2,0.1,0\n1,1,1,1\n", encoding="utf-8")
    code, out, _ = run(capsys, "order-norm", "--p", "1", "--dim", "4", "--unit", "e1", "--file", str(f), "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out, newline="")))
    assert code == 0
    assert [float(r["order_unit_norm"]) for r in rows] == pytest.approx([0.6, 4.0], abs=1e-9)


def test_order_norm_rejects_unverified_unit(capsys):
    assert main(["order-norm", "--p", "2", "--dim", "2", "--unit", "e1", "--x", "1,0"]) == 2
    assert main(["order-norm", "--p", "1", "--dim", "2", "--unit", "e1"]) == 2
    capsys.readouterr()


def test_order_norm_tolerance_breach(capsys, monkeypatch):
    from orderunit import cli

    monkeypatch.setattr(cli, "order_unit_norm", lambda ous, x, tol: 0.5)
    assert main(["order-norm", "--p", "inf", "--dim", "2", "--unit", "1,1", "--x", "0.3,0.1"]) == 1
    assert main(["order-norm", "--p", "inf", "--dim", "2", "--unit", "1,1", "--x", "0.3,0.1", "--tol", "0"]) == 2
    capsys.readouterr()


# --- determinism and output -----------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["check-nou", "--p", "2", "--dim", "3", "--unit", "0.3,0.4,0.5", "--seed", "7"],
        ["sweep", "--p", "1.5,2.5", "--dim", "3", "--candidates", "4", "--budget", "800", "--seed", "3", "--workers", "2"],
        ["adjoin", "--v", "linf:2", "--x", "r", "--seed", "5"],
    ],
)
def test_verdict_only_is_byte_identical(argv, capsys):
    code1, a, _ = run(capsys, *argv, "--verdict-only")
    code2, b, _ = run(capsys, *argv, "--verdict-only")
    assert code1 == code2 and a == b
    assert "runtime" not in json.loads(a)


def test_runtime_block_present_by_default(capsys):
    _, doc, _ = run_json(capsys, "check-nou", "--p", "inf", "--dim", "2", "--unit", "1,1")
    assert "wall_clock_s" in doc["runtime"]


def test_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["check-nou", "--p", "1", "--dim", "2", "--unit", "e2", "--out", str(out)])
    assert code == 0 and capsys.readouterr().out == ""
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["result"]["verdict"]["status"] == "VerifiedExact"


def test_vectors_round_trip(capsys):
    _, doc, _ = run_json(capsys, "check-nou", "--p", "3", "--dim", "3", "--unit", "0.3,0.4,0.5")
    x = doc["result"]["verdict"]["witness"]["x"]
    assert all(isinstance(t, str) for t in x)
    assert all(float(repr(float(t))) == float(t) for t in x)
