import csv
import io
import json
import subprocess
import sys

import pytest

from corrcopies.cli import (
    RunConfig,
    SweepRow,
    compute_sweep,
    main,
    render_shrink,
    render_sweep,
)
from corrcopies.errors import DomainError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_endpoint_and_midpoint_rows(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "6", "--steps", "3")
    assert code == 0
    assert out.splitlines()[0] == "r,f_sym,f_prod,f_unknown,f_known"
    rows = [{k: float(v) for k, v in row.items()} for row in parse_csv(out)]
    assert rows[0] == pytest.approx({"r": 0, "f_sym": 0.5, "f_prod": 0.5, "f_unknown": 0.59375, "f_known": 0.85})
    mid = rows[1]
    assert mid["f_sym"] == pytest.approx(0.6875)
    assert mid["f_prod"] == pytest.approx(753 / 1024, abs=1e-12)
    assert mid["f_unknown"] == pytest.approx(0.791666666667, abs=1e-12)
    assert mid["f_known"] == pytest.approx(0.8625)
    assert mid["f_sym"] < mid["f_prod"] < mid["f_unknown"]
    assert rows[2] == pytest.approx({"r": 1, "f_sym": 0.875, "f_prod": 0.875, "f_unknown": 0.875, "f_known": 0.875})


def test_sweep_is_deterministic(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["sweep", "--n", "7", "--out", str(p)]) == 0
    first, second = (p.read_bytes() for p in paths)
    assert first == second
    assert b"\r" not in first
    assert len(first.splitlines()) == 102


def test_sweep_json_mirrors_csv(capsys):
    _, text_csv, _ = run(capsys, "sweep", "--n", "4", "--steps", "11")
    _, text_json, _ = run(capsys, "sweep", "--n", "4", "--steps", "11", "--format", "json")
    from_csv = [{k: float(v) for k, v in row.items()} for row in parse_csv(text_csv)]
    assert json.loads(text_json) == from_csv


def test_sweep_rows_are_ordered():
    for n in (2, 3, 6, 9):
        for row in compute_sweep(RunConfig(n)):
            assert row.problems() == []


def test_sweep_row_flags_violations():
    bad = SweepRow(0.5, 0.7, 0.6, 0.8, 0.9)
    assert any("ordering" in p for p in bad.problems())
    assert any("outside" in p for p in SweepRow(0.5, 0.4, 0.6, 0.8, 0.9).problems())


@pytest.mark.parametrize(
    "kwargs",
    [dict(n=0), dict(n=4, r_min=0.5, r_max=0.5), dict(n=4, steps=1), dict(n=4, fmt="xml")],
)
def test_run_config_validation(kwargs):
    with pytest.raises(DomainError):
        RunConfig(**kwargs)


def test_optimal_state_unknown_small_r(capsys):
    code, out, _ = run(capsys, "optimal-state", "--n", "6", "--r", "0.1", "--structure", "unknown")
    assert code == 0
    body = [line for line in out.splitlines() if not line.startswith("#")]
    rows = parse_csv("\n".join(body))
    got = {(row["j"], row["orientation"]): float(row["weight"]) for row in rows}
    assert got == pytest.approx({("1", "parallel"): 0.825, ("3", "antiparallel"): 0.175})


def test_optimal_state_pure(capsys):
    _, out, _ = run(capsys, "optimal-state", "--n", "6", "--r", "1", "--format", "json")
    desc = json.loads(out)
    assert [(s["two_j"], s["weight"]) for s in desc["sectors"]] == [(6, 1.0)]
    assert desc["fidelity"] == pytest.approx(0.875)


def test_optimal_state_known_odd(capsys):
    _, out, _ = run(capsys, "optimal-state", "--n", "5", "--r", "0.5", "--structure", "known", "--format", "json")
    desc = json.loads(out)
    weights = {s["two_j"]: s["weight"] for s in desc["sectors"]}
    assert weights == pytest.approx({5: 5.5 / 8, 3: 2.5 / 8})
    assert desc["residuals"]["weight_sum"] < 1e-12
    assert desc["residuals"]["local_bloch"] < 1e-12


@pytest.mark.parametrize(
    "n, m, expected",
    [(1, "2", "shrink=0.666667\n"), (3, "inf", "shrink=0.6\nfidelity=0.8\n"), (4, "4", "shrink=1.0\n")],
)
def test_shrink(capsys, n, m, expected):
    code, out, _ = run(capsys, "shrink", "--n", str(n), "--m", m)
    assert code == 0
    assert out == expected


def test_render_helpers():
    assert render_shrink(2, float("inf")) == "shrink=0.5\nfidelity=0.75\n"
    rows = compute_sweep(RunConfig(3, steps=2))
    assert render_sweep(rows, "csv").endswith("1,0.8,0.8,0.8,0.8\n")


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--n", "1"],
        ["sweep", "--n", "6", "--r-min", "0.8", "--r-max", "0.2"],
        ["optimal-state", "--n", "1", "--r", "0.5"],
        ["optimal-state", "--n", "6", "--r", "1.5"],
        ["shrink", "--n", "4", "--m", "2"],
        ["verify", "--n", "9"],
        ["verify", "--n", "4", "--quadrature-order", "3"],
        ["sweep", "--n", "six"],
        ["frobnicate"],
    ],
)
def test_domain_errors_exit_one(capsys, argv):
    with pytest.raises(SystemExit) as info:
        raise SystemExit(main(argv))
    assert info.value.code == 1


def test_unwritable_output_exits_three(tmp_path, capsys):
    target = tmp_path / "missing" / "out.csv"
    code, _, err = run(capsys, "sweep", "--n", "4", "--out", str(target))
    assert code == 3
    assert "I/O error" in err


def test_ordering_failure_exits_two(monkeypatch, capsys):
    from corrcopies import cli

    monkeypatch.setattr(cli.fid, "f_prod", lambda n, r: 0.4)
    code, _, err = run(capsys, "sweep", "--n", "4", "--steps", "3")
    assert code == 2
    assert "verification failed" in err


@pytest.mark.parametrize("n", [2, 4, 6])
def test_verify_passes(capsys, n):
    code, out, _ = run(capsys, "verify", "--n", str(n))
    assert code == 0
    assert out.splitlines()[-1].endswith("failed=0")
    assert "status=FAIL" not in out


def test_verify_two_qubit_singlet_weight():
    from corrcopies.oracle.dense import sector_weights_of_product

    assert sector_weights_of_product(2, 0.0).weights[0] == pytest.approx(0.25, abs=1e-12)


def test_verify_failure_exits_two(monkeypatch, capsys):
    from corrcopies import fidelity

    monkeypatch.setattr(fidelity, "f_sym", lambda n, r: 0.0)
    code, out, _ = run(capsys, "verify", "--n", "2")
    assert code == 2
    assert "status=FAIL" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "corrcopies", "shrink", "--n", "1", "--m", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == "shrink=0.666667\n"
