import json

import pytest

from salagean import records
from salagean.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    rows = [records.loads(line) for line in out.splitlines()]
    return code, rows


def test_bounds_reduce_to_classical_values(capsys):
    code, rows = run(capsys, "bounds", "--n", "1", "--alpha", "1")
    assert code == 0
    assert rows[0]["record"] == "config"
    derived = {r["functional"]: r["bound"] for r in rows[1:] if r["variant"] == "derived"}
    assert derived == pytest.approx({"a2": 1.0, "a3": 2 / 3, "a4": 0.5})


def test_expand_koebe(capsys):
    code, rows = run(capsys, "expand", "--f", "koebe", "--alpha", "2", "--order", "4")
    assert code == 0
    pw = [r["re"] for r in rows if r.get("series") == "f_over_z_pow"]
    assert pw == pytest.approx([1, 4, 10, 20])


def test_member_roundtrip_and_membership(capsys):
    code, rows = run(capsys, "member", "--alpha", "2", "--beta", "0.3", "--n", "1", "--phi", "mono:0.5j:2")
    assert code == 0
    member = next(r for r in rows if r["record"] == "member")
    assert member["roundtrip_error"] < 1e-10
    assert rows[-1]["verdict"] == "member"


def test_member_from_atoms(capsys):
    code, rows = run(capsys, "member", "--atoms", "1@0,1@3.14159", "--n", "2")
    assert code == 0
    assert rows[1]["spec"]["kind"] == "atoms"


def test_check_violation_exits_one(capsys):
    code, rows = run(capsys, "check", "--f", "poly:5", "--n", "1")
    assert code == 1
    assert rows[-1]["verdict"] == "violation"


def test_fekete_counterexample_exits_one(capsys):
    code, rows = run(capsys, "fekete", "--alpha", "1", "--n", "1", "--mu", "2", "--trials", "500")
    assert code == 1
    audit = [r for r in rows if r["record"] == "audit"]
    assert {r["variant"]: r["verdict"] for r in audit}["printed"] == "counterexample"


def test_distortion_records(capsys):
    code, rows = run(capsys, "distortion", "--alpha", "2", "--n", "1", "--r", "0.5", "--trials", "200", "--variant", "derived")
    assert code == 0
    audits = [r for r in rows if r["record"] == "audit"]
    assert {r["functional"] for r in audits} == {"distortion_lower(r=0.5)", "distortion_upper(r=0.5)"}
    assert all(r["margin"] >= -1e-6 for r in audits)


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "--alpha", "-1"],
        ["bounds", "--beta", "1"],
        ["distortion", "--r", "1.5", "--trials", "0"],
        ["expand", "--f", "nonsense"],
        ["member", "--atoms", "oops"],
        ["check", "--f", "poly:1", "--config", "/nonexistent/cfg"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["bounds", "--variant", "neither"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_every_line_validates_and_round_trips(capsys):
    for argv in (
        ["bounds", "--alpha", "0.5", "--n", "2"],
        ["expand", "--f", "rotkoebe:0.7", "--order", "5"],
        ["member", "--phi", "poly:0.1,0.2,0.3"],
        ["fekete", "--mu", "-1", "--trials", "50"],
    ):
        main(argv)
        for line in capsys.readouterr().out.splitlines():
            row = records.loads(line)
            records.validate(row)
            assert records.loads(records.dumps(row)) == row
            assert json.loads(line) == row


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("alpha = 2  # comment\nn = 3\nbeta = 0.25\n")
    code, rows = run(capsys, "bounds", "--config", str(cfg), "--n", "1")
    assert code == 0
    echoed = rows[0]["config"]
    assert (echoed["alpha"], echoed["beta"], echoed["n"]) == (2.0, 0.25, 1)
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n")
    assert main(["bounds", "--config", str(bad)]) == 2


def test_audit_with_grid_file_and_out(tmp_path, capsys):
    grid = tmp_path / "grid.txt"
    grid.write_text("n = 0, 1\nalpha = 2\nbeta = 0\nfunctionals = a2, a3\n")
    out = tmp_path / "audit.jsonl"
    code = main(["audit", "--grid", str(grid), "--trials", "100", "--out", str(out)])
    assert code == 0
    assert capsys.readouterr().out == ""
    rows = [records.loads(line) for line in out.read_text().splitlines()]
    assert rows[0]["config"]["grid_spec"]["functionals"] == ["a2", "a3"]
    assert len([r for r in rows if r["record"] == "audit"]) == 2 * 2 * 2
    assert rows[-1]["record"] == "summary"


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "salagean", "bounds"], capture_output=True, text=True, check=True)
    assert res.stdout.startswith("{")
