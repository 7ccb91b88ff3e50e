import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qslgate.cli import main

PI = math.pi
SMALL = ["--grid-e", "16", "--grid-mean", "4", "--grid-phi1", "9", "--grid-phi2", "8", "--refine-iterations", "10"]


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *args):
    code, out, err = run(capsys, *args)
    assert code == 0, err
    assert err == ""
    return json.loads(out)


def test_module_entry_point():
    cp = subprocess.run([sys.executable, "-m", "qslgate", "bound", "--theta", "0", "--energy", "1"],
                        capture_output=True, text=True)
    assert cp.returncode == 0, cp.stderr
    assert json.loads(cp.stdout)["results"]["tau"] == pytest.approx(PI / 2)


def test_help(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    assert "minsearch" in capsys.readouterr().out


def test_bound(capsys):
    doc = run_json(capsys, "bound", "--theta", "0", "--energy", "1")
    assert doc["command"] == "bound" and doc["units"] == "natural"
    assert doc["results"]["tau"] == pytest.approx(1.5707963, abs=1e-7)
    assert doc["results"]["branch"] == "[0,pi)"
    doc = run_json(capsys, "bound", "--theta", "1.5707963", "--energy", "1")
    assert doc["results"]["tau"] == pytest.approx(3.1415926, abs=1e-6)
    doc = run_json(capsys, "bound", "--theta", "4", "--energy", "1")
    assert doc["results"]["branch"] == "[pi,2pi)"
    assert doc["results"]["theta_mod_pi"] == pytest.approx(4 - PI)


@pytest.mark.parametrize("args", [
    ["bound", "--theta", "0", "--energy", "0"],
    ["bound", "--theta", "x", "--energy", "1"],
    ["bound", "--energy", "1"],
    ["bound", "--theta", "nan", "--energy", "1"],
    ["nosuch"],
    ["synth", "--theta", "0", "--energy", "1", "--bogus"],
    ["physical", "--wavelength-nm", "-1"],
    ["rotate", "--alpha", "2", "--energy", "1"],
    ["sweep", "--thetas", "0:1:1", "--energy", "1"],
    ["sweep", "--thetas", "0:1", "--energy", "1"],
    ["minsearch", "--theta", "0", "--energy", "1", "--grid-e", "1"],
    ["--units", "si", "bound", "--theta", "0"],
])
def test_usage_errors_exit_2(capsys, args):
    code, out, err = run(capsys, *args)
    assert code == 2
    assert out == ""
    assert err.startswith("qslgate: error:") and err.count("\n") == 1


def test_synth(capsys):
    doc = run_json(capsys, "synth", "--theta", "0", "--energy", "1")
    assert doc["results"]["matrix"] == [[[1, 0], [-1, 0]], [[-1, 0], [1, 0]]]
    assert doc["results"]["tau"] == pytest.approx(PI / 2)
    doc = run_json(capsys, "synth", "--theta", str(PI), "--energy", "1")
    assert doc["results"]["matrix"] == [[[1, 0], [1, 0]], [[1, 0], [1, 0]]]
    assert (doc["results"]["e1"], doc["results"]["e2"]) == (2, 0)


def test_number_format(capsys):
    code, out, _ = run(capsys, "bound", "--theta", "0", "--energy", "1")
    assert '"tau": 1.57079632679e+00' in out


def test_evolve_identity(tmp_path, capsys):
    f = tmp_path / "h.json"
    f.write_text(json.dumps({"matrix": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]}))
    doc = run_json(capsys, "evolve", "--hamiltonian", str(f), "--time", "3.7", "--state", "0.6", "0.8j")
    assert doc["results"]["final_state"] == [[0.6, 0], [0, 0.8]]


def test_synth_round_trips_into_evolve(tmp_path, capsys):
    for theta in (0.0, 1.3, PI, 5.0):
        synth = tmp_path / "synth.json"
        assert main(["--output", str(synth), "synth", "--theta", repr(theta), "--energy", "1"]) == 0
        tau = json.loads(synth.read_text())["results"]["tau"]
        doc = run_json(capsys, "evolve", "--hamiltonian", str(synth), "--time", repr(tau), "--state", "0", "1")
        (are, aim), (bre, bim) = doc["results"]["final_state"]
        target = np.exp(-1j * theta)
        # 12 significant digits in the serialized matrix and time
        assert abs(complex(are, aim) - target) < 1e-9 and abs(complex(bre, bim)) < 1e-9


def test_evolve_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "evolve", "--hamiltonian", str(bad), "--time", "1")[0] == 2
    shape = tmp_path / "shape.json"
    shape.write_text(json.dumps({"matrix": [[1, 2], [3, 4]]}))
    assert run(capsys, "evolve", "--hamiltonian", str(shape), "--time", "1")[0] == 2
    nonherm = tmp_path / "nh.json"
    nonherm.write_text(json.dumps({"matrix": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}))
    assert run(capsys, "evolve", "--hamiltonian", str(nonherm), "--time", "1")[0] == 3
    assert run(capsys, "evolve", "--hamiltonian", str(tmp_path / "missing.json"), "--time", "1")[0] == 4
    assert run(capsys, "evolve", "--hamiltonian", str(bad), "--time", "1", "--state", "0", "0")[0] == 2


def test_evolve_tolerates_tiny_asymmetry(tmp_path, capsys):
    f = tmp_path / "h.json"
    f.write_text(json.dumps({"matrix": [[[1, 0], [0.5, 1e-11]], [[0.5, 0], [1, 0]]]}))
    run_json(capsys, "evolve", "--hamiltonian", str(f), "--time", "1")


def test_sweep_csv(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, stdout, err = run(capsys, "sweep", "--thetas", "0:6.2831853:5", "--energy", "1", "--out", str(out))
    assert code == 0 and stdout == "" and err == ""
    lines = out.read_text().splitlines()
    assert lines[0] == "theta,tau_analytic,e1,e2,fidelity,phase_residual"
    rows = [list(map(float, ln.split(","))) for ln in lines[1:]]
    assert len(rows) == 5
    assert [r[0] for r in rows] == pytest.approx([0, 6.2831853 / 4, 6.2831853 / 2, 3 * 6.2831853 / 4, 6.2831853])
    assert rows[0][1] == pytest.approx(PI / 2)
    assert all(len(c.split("e")[0].replace("-", "").replace(".", "")) == 12 for c in lines[1].split(","))


def test_sweep_unwritable(tmp_path, capsys):
    code, _, err = run(capsys, "sweep", "--thetas", "0:1:3", "--energy", "1", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 4 and "cannot write" in err


def test_sweep_with_oracle(tmp_path, capsys):
    out = tmp_path / "o.csv"
    assert main(["sweep", "--thetas", "0:5.5:8", "--energy", "1", "--oracle", "--out", str(out), *SMALL]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].endswith(",oracle_min_time,margin")
    margins = [float(ln.split(",")[-1]) for ln in lines[1:]]
    assert len(margins) == 8 and min(margins) >= -0.01


def test_physical(capsys):
    doc = run_json(capsys, "physical", "--wavelength-nm", "397")
    assert doc["units"] == "SI"
    assert doc["results"]["tau_seconds"] == pytest.approx(6.62e-16, rel=5e-3)
    assert doc["results"]["gap_eV"] == pytest.approx(3.123, rel=1e-3)
    doc = run_json(capsys, "physical", "--wavelength-nm", "794")
    assert doc["results"]["tau_seconds"] == pytest.approx(1.324e-15, rel=5e-3)


def test_si_units(capsys):
    # gap matched to 397 nm: E = gap / 2 for theta = 0 reproduces lambda / 2c
    doc = run_json(capsys, "--units", "si", "bound", "--theta", "0", "--energy-ev", str(3.12302766834 / 2))
    assert doc["units"] == "SI"
    assert doc["results"]["tau"] == pytest.approx(6.62124728968e-16, rel=1e-9)


def test_rotate(capsys):
    doc = run_json(capsys, "rotate", "--alpha", repr(PI / 2), "--energy", "1")
    assert doc["results"]["tau_alpha"] == pytest.approx(PI / 2)
    assert doc["results"]["overlap"] < 1e-12
    assert doc["results"]["passed"] is True
    doc = run_json(capsys, "rotate", "--alpha", "0", "--energy", "1", "--state", "1", "1j")
    assert doc["results"]["tau_alpha"] == 0
    assert doc["results"]["overlap"] == pytest.approx(1.0)


def test_minsearch_not_found(capsys):
    doc = run_json(capsys, "minsearch", "--theta", "0", "--energy", "1", "--horizon", "0.1", *SMALL)
    assert doc["results"]["found"] is False
    assert doc["results"]["min_time_found"] is None


def test_minsearch_small_grid(capsys):
    doc = run_json(capsys, "minsearch", "--theta", repr(PI / 2), "--energy", "1", *SMALL)
    r = doc["results"]
    assert r["found"] is True
    assert r["min_time_found"] == pytest.approx(PI, rel=0.01)
    assert r["evaluations"] > 0
    assert abs(r["best_params"]["phi1"] - PI / 4) < 0.05


def test_minsearch_rotation(capsys):
    doc = run_json(capsys, "minsearch", "--alpha", repr(PI / 4), "--energy", "1", *SMALL)
    assert doc["results"]["min_time_found"] == pytest.approx(PI / 4, rel=0.01)


@pytest.mark.slow
@pytest.mark.parametrize("theta,expected", [("0", PI / 2), (repr(PI / 2), PI)])
def test_minsearch_defaults(capsys, theta, expected):
    doc = run_json(capsys, "minsearch", "--theta", theta, "--energy", "1")
    assert doc["results"]["min_time_found"] == pytest.approx(expected, rel=0.01)


def test_evolve_stdin(capsys, monkeypatch):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps({"matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]})))
    doc = run_json(capsys, "evolve", "--hamiltonian", "-", "--time", repr(PI))
    (are, aim), _ = doc["results"]["final_state"]
    assert complex(are, aim) == pytest.approx(0.0, abs=1e-12)
