"""End-to-end command line checks through click's test runner."""
import csv
import json
import math

import numpy as np
import pytest
from click.testing import CliRunner
from scipy.integrate import quad

from indg import complex_ensemble as cx
from indg import real_ensemble as re1
from indg.channels import predicted_ring
from indg.cli import _NUMERIC_ERRORS, main
from indg.sampling import EnsembleParams, QuadratisationError


@pytest.fixture
def runner():
    return CliRunner()


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_sample_writes_archive(runner, tmp_path):
    out = str(tmp_path / "m.npz")
    res = runner.invoke(main, ["sample", "--beta", "2", "--n", "6", "--l", "2",
                               "--count", "3", "--seed", "5", "--out", out])
    assert res.exit_code == 0, res.output
    with np.load(out) as archive:
        assert archive["matrices"].shape == (3, 6, 6)
        assert np.iscomplexobj(archive["matrices"])
        assert int(archive["N"]) == 6 and float(archive["L"]) == 2.0
        assert int(archive["beta"]) == 2 and int(archive["seed"]) == 5
    # reproducible: same seed, same matrices
    out2 = str(tmp_path / "m2.npz")
    runner.invoke(main, ["sample", "--beta", "2", "--n", "6", "--l", "2",
                         "--count", "3", "--seed", "5", "--out", out2])
    with np.load(out) as a1, np.load(out2) as a2:
        assert np.array_equal(a1["matrices"], a2["matrices"])


def test_spectrum_round_trip_beta1(runner, tmp_path):
    out = str(tmp_path / "m.npz")
    eig = str(tmp_path / "eig.csv")
    res = runner.invoke(main, ["sample", "--beta", "1", "--n", "10", "--l", "3",
                               "--count", "2", "--seed", "9", "--out", out])
    assert res.exit_code == 0, res.output
    res = runner.invoke(main, ["spectrum", "--in", out, "--out", eig])
    assert res.exit_code == 0, res.output
    rows = read_csv(eig)
    assert rows[0] == ["sample_idx", "re", "im", "is_real"]
    body = [(int(r[0]), float(r[1]), float(r[2]), int(r[3])) for r in rows[1:]]
    assert len(body) == 20  # 2 samples x 10 eigenvalues, conjugates included
    with np.load(out) as archive:
        mats = archive["matrices"]
    for idx in (0, 1):
        sample_rows = [r for r in body if r[0] == idx]
        eig_sum = sum(r[1] for r in sample_rows)
        assert np.isclose(eig_sum, np.trace(mats[idx]), atol=1e-8)
        # non-real rows come in conjugate pairs
        ims = sorted(r[2] for r in sample_rows if not r[3])
        assert np.allclose(np.array(ims) + np.array(ims[::-1]), 0.0, atol=1e-12)
        for r in sample_rows:
            assert (r[2] == 0.0) == bool(r[3])


def test_spectrum_rescale_flag(runner, tmp_path):
    out = str(tmp_path / "m.npz")
    runner.invoke(main, ["sample", "--beta", "2", "--n", "8", "--l", "2",
                         "--count", "1", "--seed", "3", "--out", out])
    raw, scaled = str(tmp_path / "raw.csv"), str(tmp_path / "scaled.csv")
    runner.invoke(main, ["spectrum", "--in", out, "--out", raw])
    runner.invoke(main, ["spectrum", "--in", out, "--out", scaled, "--rescale"])
    r_raw = np.array([[float(v) for v in row[1:3]] for row in read_csv(raw)[1:]])
    r_sc = np.array([[float(v) for v in row[1:3]] for row in read_csv(scaled)[1:]])
    assert np.allclose(r_sc * math.sqrt(10.0), r_raw, atol=1e-12)


def test_spectrum_rejects_foreign_archive(runner, tmp_path):
    bad = str(tmp_path / "bad.npz")
    np.savez(bad, stuff=np.eye(2))
    res = runner.invoke(main, ["spectrum", "--in", bad, "--out", str(tmp_path / "x.csv")])
    assert res.exit_code == 2
    # not an npz at all -> clean usage error, not a traceback
    garbage = tmp_path / "garbage.npz"
    garbage.write_text("not an archive")
    res = runner.invoke(main, ["spectrum", "--in", str(garbage),
                               "--out", str(tmp_path / "y.csv")])
    assert res.exit_code == 2


def test_density_beta2(runner, tmp_path):
    out = str(tmp_path / "d.csv")
    res = runner.invoke(main, ["density", "--beta", "2", "--n", "16", "--l", "4",
                               "--grid", "0:6:13", "--out", out])
    assert res.exit_code == 0, res.output
    rows = read_csv(out)
    assert rows[0] == ["r", "rho"]
    assert len(rows) == 14
    params = EnsembleParams(N=16, L=4.0, beta=2)
    grid = np.linspace(0.0, 6.0, 13)
    for row, r in zip(rows[1:], grid):
        assert np.isclose(float(row[0]), r, atol=1e-12)
        assert np.isclose(float(row[1]), cx.density(r, params), rtol=1e-12)


def test_density_beta1_columns(runner, tmp_path):
    out = str(tmp_path / "d1.csv")
    res = runner.invoke(main, ["density", "--beta", "1", "--n", "8", "--l", "2",
                               "--grid", "0.5:2.5:3", "--out", out])
    assert res.exit_code == 0, res.output
    rows = read_csv(out)
    assert rows[0] == ["r", "rho", "rho_real"]
    params = EnsembleParams(N=8, L=2.0, beta=1)
    for row in rows[1:]:
        r, rho, rho_real = (float(v) for v in row)
        assert np.isclose(rho_real, float(re1.density_real(r, params)), rtol=1e-10)
        # azimuthal average of the complex-pair density, checked by quadrature
        want = quad(lambda t: float(re1.density_complex(r * np.exp(1j * t), params)),
                    1e-9, math.pi - 1e-9, limit=200)[0] / math.pi
        assert np.isclose(rho, want, rtol=5e-4, atol=1e-9), (r, rho, want)


def test_density_grid_validation(runner, tmp_path):
    out = str(tmp_path / "d.csv")
    for bad in ("1:2", "a:b:c", "2:1:5", "0:1:0"):
        res = runner.invoke(main, ["density", "--beta", "2", "--n", "4", "--l", "0",
                                   "--grid", bad, "--out", out])
        assert res.exit_code == 2, bad


def test_kernel_command(runner, tmp_path):
    pts = tmp_path / "pts.csv"
    with open(pts, "w") as fh:
        fh.write("0.4,0.0\n-1.1,0.0\n0.5,0.8\n")
    out = str(tmp_path / "k.csv")
    res = runner.invoke(main, ["kernel", "--beta", "1", "--n", "8", "--l", "1.5",
                               "--points", str(pts), "--out", out])
    assert res.exit_code == 0, res.output
    rows = read_csv(out)
    assert rows[0] == ["i", "j", "ds_re", "ds_im", "s_re", "s_im", "is_re", "is_im", "eps"]
    assert len(rows) == 1 + 9  # all ordered pairs of three points
    params = EnsembleParams(N=8, L=1.5, beta=1)
    zs = [0.4, -1.1, 0.5 + 0.8j]
    for row in rows[1:]:
        i, j = int(row[0]), int(row[1])
        e = re1.kernel_entries(zs[i], zs[j], params)
        got = [float(v) for v in row[2:]]
        want = [complex(e.DS).real, complex(e.DS).imag, complex(e.S).real,
                complex(e.S).imag, complex(e.IS).real, complex(e.IS).imag, e.eps]
        assert np.allclose(got, want, rtol=1e-12, atol=1e-15), (i, j)


def test_kernel_variant_flag(runner, tmp_path):
    pts = tmp_path / "pts.csv"
    with open(pts, "w") as fh:
        fh.write("0.4,0.0\n")
    outs = {}
    for variant in ("theorem", "appendix"):
        out = str(tmp_path / f"k_{variant}.csv")
        res = runner.invoke(main, ["kernel", "--beta", "1", "--n", "8", "--l", "2",
                                   "--points", str(pts), "--out", out,
                                   "--variant", variant])
        assert res.exit_code == 0, res.output
        outs[variant] = float(read_csv(out)[1][4])  # S entry, real part
    assert abs(outs["theorem"] - outs["appendix"]) > 1e-6


def test_kernel_rejects_bad_points(runner, tmp_path):
    pts = tmp_path / "pts.csv"
    with open(pts, "w") as fh:
        fh.write("0.1,0.2,0.3\n")
    res = runner.invoke(main, ["kernel", "--beta", "1", "--n", "8", "--l", "0",
                               "--points", str(pts), "--out", str(tmp_path / "k.csv")])
    assert res.exit_code == 2
    # header rows / non-numeric content -> clean usage error, not a traceback
    with open(pts, "w") as fh:
        fh.write("re,im\n0.3,0.0\n")
    res = runner.invoke(main, ["kernel", "--beta", "1", "--n", "8", "--l", "0",
                               "--points", str(pts), "--out", str(tmp_path / "k.csv")])
    assert res.exit_code == 2


def test_holeprob_stdout_and_file(runner, tmp_path):
    res = runner.invoke(main, ["holeprob", "--n", "20", "--l", "2",
                               "--smax", "1.5", "--steps", "4"])
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[0] == "s,A"
    vals = {float(l.split(",")[0]): float(l.split(",")[1]) for l in lines[1:]}
    assert np.isclose(vals[0.0], 1.0, rtol=1e-14)
    assert np.isclose(vals[0.5], 0.997698542191697, rtol=1e-12)
    assert np.isclose(vals[1.0], 0.898313934830039, rtol=1e-12)
    assert np.isclose(vals[1.5], 0.437293392614768, rtol=1e-12)
    out = str(tmp_path / "h.csv")
    res = runner.invoke(main, ["holeprob", "--n", "20", "--l", "2",
                               "--smax", "1.5", "--steps", "4", "--out", out])
    assert res.exit_code == 0
    rows = read_csv(out)
    assert rows[0] == ["s", "A"] and len(rows) == 5
    res = runner.invoke(main, ["holeprob", "--n", "20", "--l", "2",
                               "--smax", "-1", "--steps", "4"])
    assert res.exit_code == 2


def test_verify_pass_and_fail(runner, tmp_path):
    res = runner.invoke(main, ["verify", "--experiment", "edge-profile",
                               "--seed", "0", "--samples", "1"])
    assert res.exit_code == 0, res.output
    doc = json.loads(res.output)
    assert doc["passed"] is True
    assert doc["experiment"] == "edge-profile"
    # real-count keeps the leading-order clauses, which fail at these sizes
    out_dir = str(tmp_path / "mc")
    res = runner.invoke(main, ["verify", "--experiment", "real-count",
                               "--seed", "19", "--samples", "150",
                               "--out", out_dir])
    assert res.exit_code == 1
    doc = json.loads(res.output)
    assert doc["passed"] is False
    by = {(rep["statistic"], rep["params"]["L"]): rep["passed"] for rep in doc["reports"]}
    assert by[("mean_vs_quadrature", 32)]
    assert not by[("mean_vs_leading_order", 32)]
    res = runner.invoke(main, ["verify", "--experiment", "nope",
                               "--seed", "0", "--samples", "1"])
    assert res.exit_code == 2


def test_channel_command(runner, tmp_path):
    out = str(tmp_path / "chan.json")
    res = runner.invoke(main, ["channel", "--d", "6", "--k", "8",
                               "--realizations", "2", "--seed", "11", "--out", out])
    assert res.exit_code == 0, res.output
    with open(out) as fh:
        doc = json.load(fh)
    r_in, r_out = predicted_ring(6, 8)
    assert doc["d"] == 6 and doc["k"] == 8
    assert np.isclose(doc["r_in"], r_in) and np.isclose(doc["r_out"], r_out)
    assert len(doc["realizations"]) == 2
    for run in doc["realizations"]:
        assert len(run["eigenvalues"]) == 36  # d^2 for k > d
        assert run["trace_norm"] > 0
    res = runner.invoke(main, ["channel", "--d", "1", "--k", "8",
                               "--realizations", "1", "--seed", "0",
                               "--out", str(tmp_path / "x.json")])
    assert res.exit_code == 2


def test_usage_errors(runner, tmp_path):
    # invalid ensemble parameters map to usage errors
    res = runner.invoke(main, ["sample", "--beta", "1", "--n", "0", "--l", "0",
                               "--seed", "1", "--out", str(tmp_path / "m.npz")])
    assert res.exit_code == 2
    res = runner.invoke(main, ["sample", "--beta", "1", "--n", "4", "--l", "-2",
                               "--seed", "1", "--out", str(tmp_path / "m.npz")])
    assert res.exit_code == 2
    res = runner.invoke(main, ["sample", "--beta", "3", "--n", "4", "--l", "0",
                               "--seed", "1", "--out", str(tmp_path / "m.npz")])
    assert res.exit_code == 2


def test_numeric_error_classification():
    # the numeric-exit tuple catches quadratisation failures before the
    # ValueError mapping can turn them into usage errors
    assert issubclass(QuadratisationError, ValueError)
    assert QuadratisationError in _NUMERIC_ERRORS
    from indg.cli import _exit_numeric
    with pytest.raises(SystemExit) as exc_info:
        _exit_numeric(QuadratisationError(1e15))
    assert exc_info.value.code == 3
