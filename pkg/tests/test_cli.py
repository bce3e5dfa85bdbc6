import numpy as np
import pytest

from radial_eigen import cli


def run_cli(args):
    return cli.main(args)


def test_eigen_single_row(capsys):
    code = run_cli(["eigen", "--op", "mplus", "--alpha", "0", "--gamma", "1",
                    "--N", "3", "--lam", "1", "--Lam", "1", "--method", "shoot"])
    out = capsys.readouterr().out.strip().splitlines()
    assert code == 0
    assert out[0] == "method,eigenvalue,first_zero,residual,iterations"
    fields = out[1].split(",")
    assert fields[0] == "shoot"
    assert float(fields[1]) == pytest.approx(3.670492, rel=1e-5)
    assert float(fields[2]) == pytest.approx(3.670492, rel=1e-5)


def test_eigen_method_all_has_deviation_column(capsys):
    code = run_cli(["eigen", "--alpha", "0", "--gamma", "1.25", "--N", "3",
                    "--method", "all", "--tol", "1e-9", "--bracket-tol", "1e-8"])
    out = capsys.readouterr().out.strip().splitlines()
    assert code == 0
    assert out[0].endswith("pairwise_dev")
    rows = [line.split(",") for line in out[1:]]
    methods = {r[0] for r in rows}
    assert methods == {"shoot", "bisect", "invpow", "variational"}
    devs = [float(r[-1]) for r in rows]
    assert max(devs) < 1e-2


def test_eigen_invalid_params_exit_2(capsys):
    code = run_cli(["eigen", "--N", "3", "--lam", "1", "--Lam", "3", "--gamma", "1"])
    err = capsys.readouterr().err
    assert code == 2
    assert "n_tilde_plus" in err


def test_eigen_profile_out(tmp_path, capsys):
    path = tmp_path / "prof.txt"
    code = run_cli(["eigen", "--alpha", "0", "--gamma", "1", "--N", "3",
                    "--method", "shoot", "--profile-out", str(path)])
    capsys.readouterr()
    assert code == 0
    data = np.loadtxt(path)
    assert data.shape[1] == 3
    assert np.all(np.diff(data[:, 0]) > 0)
    # u decreasing toward the boundary zero, flux negative in the bulk
    assert data[0, 1] > 0 and abs(data[-1, 1]) < 1e-6
    assert np.all(data[5:, 2] < 0)


def test_sweep_csv_format_and_footer(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    plot_path = tmp_path / "sweep.tsv"
    code = run_cli(["sweep", "--kind", "eps", "--alpha", "0", "--gamma", "1",
                    "--N", "3", "--schedule", "0.1,0.05,0.025,0.0125,0.00625",
                    "--bracket-tol", "1e-9", "--out", str(out_path),
                    "--plot-out", str(plot_path)])
    capsys.readouterr()
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert lines[0].startswith("param,value,eigenvalue,residual")
    data_rows = [l for l in lines if not l.startswith("#") and not l.startswith("param")]
    assert len(data_rows) == 5
    assert all(r.endswith("ok") for r in data_rows)
    footers = [l for l in lines if l.startswith("#")]
    assert any("extrapolated" in f for f in footers)
    assert any("rate" in f for f in footers)
    assert any("monotonic = yes" in f for f in footers)
    plot = plot_path.read_text().strip().splitlines()
    assert len(plot) == 5 and "\t" in plot[0]


def test_sweep_gamma_emits_extrapolated_limit(tmp_path, capsys):
    out_path = tmp_path / "gamma.csv"
    code = run_cli(["sweep", "--kind", "gamma", "--alpha", "0", "--N", "4",
                    "--schedule", "1.7,1.85,1.925,1.9625,1.98125",
                    "--out", str(out_path)])
    capsys.readouterr()
    assert code == 0
    text = out_path.read_text()
    assert "# extrapolated = " in text
    assert "# model = invlogsq" in text


def test_sweep_nonexistence_prints_decay_rate(capsys):
    code = run_cli(["sweep", "--kind", "delta", "--alpha", "0", "--gamma", "2.5",
                    "--N", "3", "--schedule", "0.5,0.25,0.125,0.0625",
                    "--bracket-tol", "1e-9"])
    out = capsys.readouterr().out
    assert code == 0
    assert "# direction = decreasing_to_zero" in out
    rate = [l for l in out.splitlines() if l.startswith("# rate")][0]
    assert float(rate.split("=")[1]) > 0


def test_sweep_invariant_violation_exit_3(monkeypatch, capsys):
    from radial_eigen import analysis
    from radial_eigen.core import EigenEstimate, Method

    calls = {"n": 0}

    def fake_bisect(problem, tol=1e-6, integ_tol=1e-8, **kw):
        calls["n"] += 1
        return EigenEstimate(
            value=1.0 + 0.1 * calls["n"], method=Method.BISECT, residual_norm=0.0,
            iterations=1, profile=None, problem=problem,
        )

    monkeypatch.setattr(analysis, "eigen_bisect", fake_bisect)
    code = run_cli(["sweep", "--kind", "eps", "--alpha", "0", "--gamma", "1",
                    "--N", "3", "--schedule", "0.1,0.05,0.025"])
    err = capsys.readouterr().err
    assert code == 3
    assert "monotonicity" in err


def test_sweep_solver_failure_exit_4(monkeypatch, capsys):
    from radial_eigen import analysis
    from radial_eigen.errors import SolverError

    def always_fails(problem, tol=1e-6, integ_tol=1e-8, **kw):
        raise SolverError("no bracket anywhere")

    monkeypatch.setattr(analysis, "eigen_bisect", always_fails)
    code = run_cli(["sweep", "--kind", "eps", "--alpha", "0", "--gamma", "1",
                    "--N", "3", "--schedule", "0.1,0.05,0.025"])
    err = capsys.readouterr().err
    assert code == 4
    assert "solver failure" in err


def test_config_file_and_matrix_runs(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "[problem]\ngamma = 0.75, 1.0\nN = 3\nalpha = 0\n\n"
        "[solve]\nmethod = shoot\ntol = 1e-9\n"
    )
    code = run_cli(["eigen", "--config", str(cfg)])
    out = capsys.readouterr().out.strip().splitlines()
    assert code == 0
    assert out[0].startswith("gamma,method,")
    assert len(out) == 3
    g_vals = sorted(float(l.split(",")[0]) for l in out[1:])
    assert g_vals == [0.75, 1.0]


def test_config_unknown_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[problem]\nfrobnicate = 3\n")
    code = run_cli(["eigen", "--config", str(cfg)])
    assert code == 2
    assert "unknown config key" in capsys.readouterr().err


def test_deterministic_output(tmp_path, capsys):
    args = ["sweep", "--kind", "delta", "--alpha", "0", "--gamma", "1.0", "--N", "3",
            "--schedule", "0.2,0.1,0.05,0.025", "--bracket-tol", "1e-9", "--seed", "7"]
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(args + ["--out", str(p1)]) == 0
    assert run_cli(args + ["--out", str(p2)]) == 0
    capsys.readouterr()
    assert p1.read_bytes() == p2.read_bytes()


def test_verify_passes_by_default(capsys):
    code = run_cli(["verify"])
    out = capsys.readouterr().out
    assert code == 0
    assert "failed=0" in out
    assert all(l.startswith(("PASS", "#")) for l in out.strip().splitlines())


def test_verify_corrupted_tolerance_fails(capsys):
    code = run_cli(["verify", "--tol", "10"])
    out = capsys.readouterr().out
    assert code == 1
    assert "FAIL" in out
