from __future__ import annotations

import json
import math

import numpy as np
import pytest

from entsuper import cli
from entsuper.harness import (
    CSV_HEADER,
    SweepConfig,
    coefficients,
    fmt,
    ratio_range,
    rows_to_csv,
    sample_pair,
    sweep_rows,
    upper_over_actual,
    verify,
)
from entsuper.measures import measures_of
from entsuper.oracle import DecompositionSearch
from entsuper.states import ghz, load_fixture, product_ab, sample_random, write_state


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_kv(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines())


def test_measure_ghz(tmp_path, capsys):
    path = tmp_path / "ghz.txt"
    write_state(path, ghz())
    code, out, _ = run(capsys, "measure", str(path))
    assert code == 0
    kv = parse_kv(out)
    assert float(kv["C"]) == 0.0 and float(kv["E"]) == 0.0
    assert abs(float(kv["Ca"]) - 1.0) < 1e-11


def test_measure_fixture_equals_library(capsys):
    code, out, _ = run(capsys, "measure", "fixture:phi33")
    m = measures_of(load_fixture("phi33"))
    assert code == 0
    assert out == f"C: {fmt(m.concurrence_C)}\nCa: {fmt(m.coa_Ca)}\nE: {fmt(m.entropy_E)}\n"


def test_measure_malformed(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("dims 2 2 1\n1 0\n0 zero\n0 0\n0 0\n")
    code, out, err = run(capsys, "measure", str(path))
    assert code == 2
    assert out == ""
    assert "line 3" in err


def test_measure_missing_file(capsys):
    code, out, err = run(capsys, "measure", "/nonexistent/state.txt")
    assert code == 2 and out == "" and "no such file" in err


def test_measure_wrong_dims(tmp_path, capsys):
    path = tmp_path / "s.txt"
    write_state(path, sample_random((2, 3, 2), 0))
    assert run(capsys, "measure", str(path))[0] == 2


def test_bad_arguments(capsys):
    assert run(capsys, "verify", "--pairs", "zero")[0] == 2
    assert run(capsys, "verify", "--pairs", "0")[0] == 2
    assert run(capsys, "verify", "--dims", "3", "2", "2")[0] == 2
    assert run(capsys, "sweep", "fixture:phi33", "fixture:psi34", "--grid", "1")[0] == 2
    assert run(capsys, "oracle", "fixture:nope")[0] == 2
    assert run(capsys)[0] == 2


def test_sweep_fixture_rows(capsys):
    code, out, _ = run(capsys, "sweep", "fixture:phi33", "fixture:psi34")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 102
    first = lines[1].split(",")
    last = lines[-1].split(",")
    assert first[0] == "0" and last[0] == "1"
    # Ca bound is tight at both ends
    assert first[6] == first[7] and last[6] == last[7]


def test_sweep_writes_files(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, stdout, _ = run(capsys, "sweep", "fixture:phi33", "fixture:psi34", "--grid", "11",
                          "--out", str(out))
    assert code == 0 and stdout == ""
    text = out.read_text(encoding="utf-8")
    assert text.splitlines()[0] == CSV_HEADER and len(text.splitlines()) == 12
    gp = (tmp_path / "sweep.csv.gp").read_text()
    assert "'sweep.csv'" in gp


def test_sweep_seed_independent(capsys):
    a = run(capsys, "sweep", "fixture:phi33", "fixture:psi34", "--grid", "7", "--seed", "1")[1]
    b = run(capsys, "sweep", "fixture:phi33", "fixture:psi34", "--grid", "7", "--seed", "2")[1]
    assert a == b


def test_sweep_identical_states_tight():
    phi = sample_random((2, 2, 4), 5)
    rows = sweep_rows(phi, phi, SweepConfig(grid_points=5))
    for r in (rows[0], rows[-1]):
        assert abs(r.Ca_upper - r.norm_sq_gamma * r.Ca_actual) < 1e-12


def test_sweep_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(grid_points=1)
    xs = SweepConfig(grid_points=2).abs_alphas()
    assert list(xs) == [0.0, 1.0]


def test_phase_invariance_of_bounds():
    phi, psi = load_fixture("phi33"), load_fixture("psi34")
    plain = sweep_rows(phi, psi, SweepConfig(grid_points=9))
    phased = sweep_rows(phi, psi, SweepConfig(grid_points=9, phase_alpha=0.7, phase_beta=-1.3))
    for a, b in zip(plain, phased):
        assert abs(a.C_upper_best - b.C_upper_best) < 1e-12
        assert abs(a.Ca_upper - b.Ca_upper) < 1e-12
        assert b.Ca_upper >= b.norm_sq_gamma * b.Ca_actual - 1e-9
        assert b.C_upper_best >= b.norm_sq_gamma * b.C_actual - 1e-9


def test_coefficients_normalized():
    for x in np.linspace(0, 1, 11):
        a, b = coefficients(x, 0.3, 2.0)
        assert abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) < 1e-15


def test_ratio_helpers():
    assert upper_over_actual(1.0, 1.0, 0.0) is None
    assert upper_over_actual(2.0, 2.0, 0.5) == 2.0
    assert ratio_range([]) is None


def test_csv_empty_ratio_cell():
    g = ghz()
    rows = sweep_rows(g, g, SweepConfig(grid_points=3))
    assert all(line.endswith(",") for line in rows_to_csv(rows).splitlines()[1:])


def test_verify_endpoint_tight():
    phi = sample_random((2, 2, 4), 3)
    s = verify(n_pairs=1, pairs=[(phi, phi, 1.0, 0.0)], n_triples=0, thm1_fraction=0)
    assert abs(s.min_slack["Ca"]) < 1e-12
    assert s.total_violations == 0


def test_verify_deterministic(capsys):
    args = ("verify", "--pairs", "40", "--thm1-fraction", "0", "--seed", "9")
    a = run(capsys, *args)
    b = run(capsys, *args)
    assert a[0] == 0 and a[1] == b[1]
    kv = parse_kv(a[1])
    assert kv["violations.total"] == "0" and kv["triples"] == "4"


def test_verify_json(tmp_path, capsys):
    out = tmp_path / "s.json"
    run(capsys, "verify", "--pairs", "5", "--thm1-fraction", "0", "--out", str(out))
    d = json.loads(out.read_text())
    assert d["pairs"] == 5 and d["total_violations"] == 0


def test_verify_modes_and_grid():
    s = verify(n_pairs=30, mode="real-uniform", alpha_mode="grid", thm1_fraction=0)
    assert s.total_violations == 0
    s = verify(n_pairs=20, dims=(2, 2, 2), thm1_fraction=0)
    assert s.total_violations == 0


def test_sample_pair_stream_independent():
    a = sample_pair(42, 7, (2, 2, 4), "complex-gaussian", "random")
    b = sample_pair(42, 7, (2, 2, 4), "complex-gaussian", "random")
    np.testing.assert_array_equal(a[0].amps, b[0].amps)
    assert a[2] == b[2]
    assert abs(abs(a[2]) ** 2 + abs(a[3]) ** 2 - 1) < 1e-12


def test_verify_entropy_check_runs():
    search = DecompositionSearch(restarts=2, step_budget=50)
    s = verify(n_pairs=2, thm1_fraction=0.5, search=search, n_triples=0)
    assert s.thm1_checked == 1
    assert s.violations["E_sym"] == 0 and "E_sym" in s.min_slack


def test_oracle_bell_product(tmp_path, capsys):
    path = tmp_path / "bell.txt"
    write_state(path, product_ab(np.array([1, 0, 0, 1]) / math.sqrt(2), [1, 0]))
    code, out, _ = run(capsys, "oracle", str(path), "--budget", "2", "50")
    kv = parse_kv(out)
    assert code == 0
    for key in ("C", "Ca", "oracle_min", "oracle_max"):
        assert abs(float(kv[key]) - 1.0) < 1e-11


def test_oracle_ghz(tmp_path, capsys):
    path = tmp_path / "ghz.txt"
    write_state(path, ghz())
    code, out, _ = run(capsys, "oracle", str(path))
    kv = parse_kv(out)
    assert code == 0
    assert abs(float(kv["gap_min"])) <= 1e-3 and abs(float(kv["gap_max"])) <= 1e-3


def test_oracle_fixture_default_budget(capsys):
    code, out, _ = run(capsys, "oracle", "fixture:phi33")
    assert code == 0
    assert abs(float(parse_kv(out)["gap_max"])) <= 1e-3


def test_module_entry_point():
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-m", "entsuper", "measure", "fixture:psi34"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("C: 0.442752")
