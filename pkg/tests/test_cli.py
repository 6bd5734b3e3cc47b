import json

import numpy as np
import pytest

from fhtoeplitz.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_symbol_eval(capsys):
    code, out, _ = run(capsys, "symbol", "eval", "--kind", "Singular", "--alpha", "1", "--z=-1,0")
    assert code == 0
    assert out.splitlines()[1].split(",")[2] == "4.0"


def test_symbol_eval_json(capsys, tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"kind": "TypeII", "delta": [0, 0], "gamma": [0, 0], "z0_angle": 1.0}))
    code, out, _ = run(capsys, "symbol", "eval", "--symbol", str(p), "--angle", "0.3")
    assert code == 0 and float(out.splitlines()[1].split(",")[2]) == pytest.approx(1)


def test_symbol_grid(capsys):
    code, out, _ = run(capsys, "symbol", "grid", "--kind", "singular", "--m", "8")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 9 and lines[0] == "k,re_z,im_z,re_a,im_a"


def test_coeffs_and_spectrum(capsys, tmp_path):
    c = tmp_path / "c.csv"
    s = tmp_path / "s.csv"
    assert run(capsys, "coeffs", "--kind", "Singular", "--alpha", "1", "--n", "8",
               "--out", str(c))[0] == 0
    assert run(capsys, "spectrum", "--coeffs", str(c), "--out", str(s),
               "--vectors", str(tmp_path / "v.csv"))[0] == 0
    lam = np.sort([float(line.split(",")[1]) for line in s.read_text().splitlines()[1:]])
    np.testing.assert_allclose(lam, np.sort(2 - 2 * np.cos(np.arange(1, 9) * np.pi / 9)),
                               atol=1e-10)


def test_coeffs_decay(capsys):
    code, out, err = run(capsys, "coeffs", "--kind", "Singular", "--alpha", "0.25", "--n", "64",
                         "--decay")
    assert code == 0 and "decay exponent" in err


def test_predict(capsys):
    code, out, _ = run(capsys, "predict", "--kind", "Singular", "--alpha", "0.5", "--beta", "-0.5",
                       "--n", "64", "--l", "16")
    fields = out.splitlines()[1].split(",")
    assert code == 0 and fields[:3] == ["Singular", "16", "64"]
    assert complex(float(fields[5]), float(fields[6])) == pytest.approx(np.sqrt(2) * np.exp(-0.25j * np.pi))


def test_wh_factorize(capsys, tmp_path):
    f = tmp_path / "f.json"
    v = tmp_path / "v.csv"
    code, _, err = run(capsys, "wh", "factorize", "--kind", "TypeI", "--alpha", "0.5",
                       "--beta=-0.5", "--n", "256", "--l", "64", "--out", str(f),
                       "--vector", str(v))
    assert code == 0 and "v = -1" in err
    assert json.loads(f.read_text())["v"] == -1
    assert len(v.read_text().splitlines()) == 257


def test_wh_factorize_outside_range(capsys):
    code, _, err = run(capsys, "wh", "factorize", "--kind", "TypeI", "--alpha", "0.5",
                       "--beta=-0.1", "--E", "0.5")
    assert code == 2


def test_table(capsys):
    code, out, _ = run(capsys, "table", "--z0-angle", str(np.pi / 3), "--delta", "0.3",
                       "--gamma", "0.2", "--l", "16", "--n", "128")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 6
    assert lines[4].split(",")[8] == "true"     # row 4 flagged


def test_verify_run(capsys, tmp_path):
    cfg = {"symbol": {"kind": "Singular", "alpha": [0.75, 0], "beta": [-0.5, 0]},
           "n": [32, 64], "l": {"rho": 0.25}}
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "verify", "run", "--config", str(p), "--out", str(tmp_path / "o"))
    assert code == 0 and "PASS eigenvalue_convergence" in out
    assert (tmp_path / "o" / "report.csv").exists()


def test_verify_bad_config(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"symbol": {"kind": "Singular"}, "n": [8, 16],
                             "l": {"rho": 1.5}, "output_dir": str(tmp_path / "o")}))
    code, _, err = run(capsys, "verify", "run", "--config", str(p))
    assert code == 2 and "rho" in err
    assert not (tmp_path / "o").exists()


def test_verify_failing_check_exit_one(capsys, tmp_path):
    cfg = {"symbol": {"kind": "Singular", "alpha": [0.75, 0], "beta": [-0.5, 0]},
           "n": [32, 64], "l": {"rho": 0.25}, "tolerances": {"residual_rtol": 1e-30}}
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "verify", "run", "--config", str(p))
    assert code == 1 and "FAIL rows" in out


def test_bad_complex(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["symbol", "eval", "--kind", "Singular", "--alpha", "a,b", "--angle", "1"])
    assert exc.value.code == 2


def test_module_entry_point():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "fhtoeplitz", "symbol", "eval", "--kind",
                          "Singular", "--angle", "1"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("re_z,im_z,re_a,im_a")
