import json
import os
import subprocess
import sys

import pytest


def run(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "gcww.cli", *args],
        capture_output=True, text=True, env=full_env, timeout=300,
    )


def test_coeffs_json():
    out = run("coeffs", "--kappa", "0.1", "--depth", "2")
    assert out.returncode == 0, out.stderr
    data = json.loads(out.stdout)
    assert data["params"]["kappa"] == 0.1
    assert data["coefficients"]["e_wb"] == pytest.approx(0.6099126857568843, rel=1e-12)
    assert data["composite"]["e_wb"] == pytest.approx(data["coefficients"]["e_wb"], rel=1e-11)


def test_classify_line():
    out = run("classify", "--kappa", "0.1", "--depth", "2")
    assert out.returncode == 0
    assert out.stdout.startswith("verdict=unstable ")
    assert "bond=false" in out.stdout
    out = run("classify", "--kappa", "1", "--depth", "1")
    assert "bond=true" in out.stdout


def test_singular_point_exit_code_and_payload():
    out = run("coeffs", "--kappa", "0.5", "--depth", "40")
    assert out.returncode == 2
    err = json.loads(out.stderr)
    assert err["code"] == "SINGULAR_POINT"
    assert "den_r2" in err["details"]


def test_stable_point_figure8():
    out = run("figure8", "--kappa", "0", "--depth", "1", "--eps", "0.02")
    assert out.returncode == 2
    assert json.loads(out.stderr)["code"] == "STABLE_POINT"


@pytest.mark.parametrize(
    "args",
    [
        ["coeffs", "--kappa", "-1", "--depth", "1"],
        ["coeffs", "--kappa", "nan", "--depth", "1"],
        ["coeffs", "--kappa", "0.1"],
        ["spectrum", "--kappa", "0.1", "--depth", "2", "--eps", "0.5", "--mu", "0.1"],
        ["curve", "--which", "zz"],
        ["nosuchcommand"],
        [],
    ],
)
def test_usage_errors_exit_1(args):
    assert run(*args).returncode == 1


def test_help_exits_zero():
    out = run("--help")
    assert out.returncode == 0
    assert "spectrum" in out.stdout


def test_spectrum_json_shape():
    out = run("spectrum", "--kappa", "0.1", "--depth", "2", "--eps", "0.02", "--mu", "0.03", "--modes", "16")
    assert out.returncode == 0, out.stderr
    data = json.loads(out.stdout)
    assert set(data) >= {"params", "eps", "mu", "n_modes", "near_zero", "max_growth"}
    assert len(data["near_zero"]) == 4
    assert all(len(z) == 2 for z in data["near_zero"])
    assert data["max_growth"] > 0


def test_spectrum_exact_coefficients():
    out = run("spectrum", "--kappa", "0", "--depth", "1", "--eps", "0.02", "--mu", "0.001",
              "--modes", "16", "--coefficients", "exact")
    assert out.returncode == 0, out.stderr
    assert abs(json.loads(out.stdout)["max_growth"]) < 1e-10


def test_output_is_byte_identical_across_runs(tmp_path):
    paths = []
    for i in range(2):
        path = tmp_path / f"d{i}.csv"
        out = run("diagram", "--nk", "7", "--nh", "5", "-o", str(path))
        assert out.returncode == 0 and out.stdout == ""
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    lines = paths[0].read_text().splitlines()
    assert lines[0] == "kappa,depth,verdict,e_wb,e22,D,c_hat,den_r2,flags"
    assert len(lines) == 36


def test_reduced_csv():
    out = run("reduced", "--kappa", "0.1", "--depth", "2", "--eps", "0.02", "--n-mu", "4")
    lines = out.stdout.strip().split("\n")
    assert lines[0] == "mu,re_l1p,im_l1p,re_l1m,im_l1m,re_l0p,im_l0p,re_l0m,im_l0m"
    assert len(lines) == 5
    first = [float(v) for v in lines[1].split(",")]
    assert first[1] > 0 and first[3] == -first[1]


def test_figure8_csv():
    out = run("figure8", "--kappa", "0.1", "--depth", "2", "--eps", "0.02", "--points", "5")
    lines = out.stdout.strip().split("\n")
    assert lines[0] == "mu,re,im"
    assert len(lines) == 11


def test_curve_csv():
    out = run("curve", "--which", "ewb", "--sweep-axis", "kappa", "--sweep-range", "0", "0",
              "--scan-range", "1", "2", "--samples", "2")
    rows = out.stdout.strip().split("\n")[1:]
    assert float(rows[0].split(",")[1]) == pytest.approx(1.3627827, abs=1e-6)


def test_scan_with_thread_env():
    args = ("scan", "--kappa", "0.1", "--depth", "2", "--eps", "0.02", "--n-mu", "3", "--modes", "8")
    a = run(*args, env={"GCWW_THREADS": "1"})
    b = run(*args, env={"GCWW_THREADS": "3"})
    assert a.returncode == 0 and a.stdout == b.stdout
    assert a.stdout.splitlines()[0].startswith("mu,max_growth,re_1,im_1")
    assert run(*args, env={"GCWW_THREADS": "x"}).returncode == 1


def test_stokes_outputs():
    js = json.loads(run("stokes", "--kappa", "0.1", "--depth", "2").stdout)
    built = json.loads(run("stokes", "--kappa", "0.1", "--depth", "2", "--route", "build").stdout)
    assert js["c2"] == pytest.approx(built["c2"], rel=1e-11)
    csv = run("stokes", "--kappa", "0.1", "--depth", "2", "--format", "csv").stdout
    assert csv.splitlines()[0] == "eps,res_dyn,res_kin"


def test_validate_passes():
    out = run("validate")
    assert out.returncode == 0, out.stdout
    lines = out.stdout.strip().split("\n")
    assert len(lines) == 6 and all(line.startswith("PASS") for line in lines)


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "gcww", "classify", "--kappa", "0", "--depth", "1"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "verdict=stable" in out.stdout
