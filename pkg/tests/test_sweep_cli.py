import json
import subprocess
import sys

import numpy as np
import pytest

from zzladder.cli import main as cli_main
from zzladder.observables import chi_from_fluxes
from zzladder.sweep import (ConfigError, RunConfig, finite_size_scan,
                            grid_points, loglog_slope, peak_positions,
                            read_csv, run_cut, run_point, write_csv)


def test_grid_points_forms():
    assert np.allclose(grid_points((0.0, 1.0, 0.25)), [0, 0.25, 0.5, 0.75, 1.0])
    assert np.allclose(grid_points([0.1, 0.4]), [0.1, 0.4])
    with pytest.raises(ConfigError):
        grid_points((1.0, 0.0, 0.1))
    with pytest.raises(ConfigError):
        grid_points([])


def test_run_point_and_flat_rows(tmp_path):
    cfg = RunConfig(L=8, N=-1, g=0.6, eta=1.0, out=str(tmp_path))
    report, spec = run_point(cfg)
    assert report.multiplet_dim >= 1
    from zzladder.sweep import report_csv_rows
    rows = report_csv_rows(report, cfg.run_id())
    names = {r["observable"] for r in rows}
    assert {"density", "g2", "current_nn_paper", "current_nnn_continuity",
            "flux_mean", "energy"} <= names
    dens_rows = [r for r in rows if r["observable"] == "density"]
    assert len(dens_rows) == 8 and all(r["L"] == 8 for r in dens_rows)


def test_csv_round_trip_and_chi_recompute(tmp_path):
    cfg = RunConfig(L=10, N=-1, boundary="obc", g=0.9, eta=1.2, out=str(tmp_path))
    report, _ = run_point(cfg)
    from zzladder.sweep import report_csv_rows
    rows = report_csv_rows(report, cfg.run_id())
    path = tmp_path / "point.csv"
    write_csv(path, rows, cfg.header())
    meta, back = read_csv(path)
    assert meta["run_id"] == cfg.run_id()
    vals = {(r["observable"], r["index"]): r["value"] for r in back}
    # recompute the derived column from its constituents
    fluxes = {j: vals[("flux_mean", j)] for j in report.plaquettes}
    included = {j: fluxes[j] for j in report.plaquettes[1:-1]}
    assert abs(chi_from_fluxes(included, 10) - vals[("chi", 0)]) < 1e-12
    # numeric round trip is exact: cells are written with repr
    for j in report.plaquettes:
        assert vals[("flux_mean", j)] == report.flux_mean[report.plaquettes.index(j)]


def test_single_point_grid_no_fidelity():
    cfg = RunConfig(L=8, N=-1, eta=1.0, g_grid=[0.5], seed=0)
    cut = run_cut(cfg, axis="g")
    assert cut["fidelity"] == []


def test_peak_positions_synthetic():
    lam = np.linspace(0, 1, 101)
    f = np.exp(-((lam - 0.3) / 0.02) ** 2) + 2 * np.exp(-((lam - 0.7) / 0.03) ** 2)
    rows = [{"lambda_mid": x, "fidelity": y} for x, y in zip(lam, f)]
    peaks = peak_positions(rows, 0.05)
    assert len(peaks) == 2
    assert abs(peaks[0]["position"] - 0.3) < 5e-3
    assert abs(peaks[1]["position"] - 0.7) < 5e-3


def test_finite_size_scan_two_point_fit():
    cfg = RunConfig(boundary="pbc", eta=8.0, g=2.0, g_grid=(1.6, 2.4, 0.1),
                    L_list=(8, 12), seed=0)
    data = finite_size_scan(cfg)
    for fit in data["fits"]:
        # a two-point fit passes through both positions exactly
        for L, pos in fit["positions"].items():
            assert abs(fit["intercept"] + fit["slope"] / L - pos) < 1e-10
        assert fit["residual"] < 1e-20
    # least-squares oracle for the same numbers
    if data["fits"]:
        fit = data["fits"][0]
        xs = np.array([1 / L for L in fit["positions"]])
        ys = np.array(list(fit["positions"].values()))
        a = np.vstack([xs, np.ones_like(xs)]).T
        coeff, *_ = np.linalg.lstsq(a, ys, rcond=None)
        assert abs(coeff[0] - fit["slope"]) < 1e-9


def test_loglog_slope():
    x = np.array([1.0, 2.0, 4.0, 8.0])
    assert abs(loglog_slope(x, 5 / x)[0] + 1) < 1e-12
    with pytest.raises(ValueError):
        loglog_slope(x, np.zeros(4))


def test_config_rejects_unknown_keys(tmp_path):
    toml = tmp_path / "run.toml"
    toml.write_text("[model]\nL = 8\nbogus_key = 3\n")
    rc = cli_main(["ed", "--config", str(toml), "--out", str(tmp_path)])
    assert rc == 2


def test_cli_ed_runs_and_is_deterministic(tmp_path):
    out = tmp_path / "a"
    args = ["ed", "--L", "8", "--g", "0.5", "--eta", "1.0",
            "--out", str(out), "--format", "both"]
    assert cli_main(args) == 0
    first = (out / "point.csv").read_bytes()
    assert cli_main(args) == 0
    assert (out / "point.csv").read_bytes() == first
    payload = json.loads((out / "point.json").read_text())
    assert payload["params"]["L"] == 8


def test_cli_config_file_with_override(tmp_path):
    toml = tmp_path / "run.toml"
    toml.write_text("[model]\nL = 8\ng = 0.4\neta = 1.0\n[output]\n"
                    f"out = '{tmp_path}'\n")
    rc = cli_main(["ed", "--config", str(toml), "--g", "0.6"])
    assert rc == 0
    meta, _ = read_csv(tmp_path / "point.csv")
    assert float(meta["g"]) == 0.6


def test_cli_dump_operator(tmp_path):
    rc = cli_main(["dump-operator", "--L", "8", "--g", "0.7", "--eta", "0.5",
                   "--out", str(tmp_path)])
    assert rc == 0
    from zzladder.hamiltonian import load_operator
    files = list(tmp_path.glob("operator_*.npz"))
    assert len(files) == 1
    op = load_operator(files[0])
    assert op.meta["L"] == 8 and op.dim == 70


def test_cli_meanfield_crossing(tmp_path):
    rc = cli_main(["meanfield", "--L", "12", "--g", "1.0",
                   "--g-list", "0.2", "0.5", "--nk", "128", "--out", str(tmp_path)])
    assert rc == 0
    meta, rows = read_csv(tmp_path / "mf_crossing.csv")
    assert rows[0]["found"] == "True"
    assert abs(rows[0]["g_star"] - 0.366) < 5e-3


def test_cli_micro(tmp_path):
    rc = cli_main(["micro", "--n-delta", "5", "--out", str(tmp_path)])
    assert rc == 0
    payload = json.loads((tmp_path / "micro.json").read_text())
    assert abs(payload["h_1_2_3"]["abs_over_J2"] - 27.0) < 1e-9
    assert abs(payload["elimination_slope"] + 2) < 0.1
    meta, rows = read_csv(tmp_path / "micro_dipoles.csv")
    assert len(rows) == 4


def test_cli_gutzwiller(tmp_path):
    rc = cli_main(["gutzwiller", "--L", "16", "--g", "1.0", "--eta", "0.0",
                   "--restarts", "3", "--out", str(tmp_path)])
    assert rc == 0
    meta, rows = read_csv(tmp_path / "gutzwiller.csv")
    assert rows[0]["variant"] == "symmetric"


def test_cli_fidelity_cut_small(tmp_path):
    rc = cli_main(["fidelity-cut", "--L", "8", "--eta", "1.0",
                   "--g-grid", "0.2", "0.4", "0.1", "--out", str(tmp_path)])
    assert rc == 0
    meta, rows = read_csv(tmp_path / "cut_fidelity.csv")
    assert len(rows) == 2
    assert all(r["fidelity"] >= 0 for r in rows)


def test_cli_solver_failure_exit_code(monkeypatch, tmp_path):
    from zzladder import cli
    from zzladder.eigensolver import ConvergenceError

    def boom(config):
        raise ConvergenceError("no convergence", 0.5)

    monkeypatch.setattr(cli, "run_point", boom)
    rc = cli_main(["ed", "--L", "8", "--out", str(tmp_path)])
    assert rc == 3


def test_cli_entry_point_subprocess(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "zzladder.cli", "ed", "--L", "4", "--N", "2",
         "--g", "0.3", "--eta", "0.5", "--out", str(tmp_path)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "E0" in proc.stdout
