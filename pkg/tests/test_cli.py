import json
import subprocess
import sys

import numpy as np
import pytest

PKG = "bergman_lab"


def run(*args, cwd=None, env=None):
    return subprocess.run([sys.executable, "-m", PKG, *args], capture_output=True, text=True,
                          cwd=cwd, env=env)


def test_kernel_grid_matches_disc_closed_form(tmp_path):
    out = tmp_path / "k.csv"
    res = run("kernel", "--domain", "builtin:unit-disc", "--degree", "60",
              "--points", "grid:0.05", "--out", str(out))
    assert res.returncode == 0, res.stderr
    header = out.read_text().splitlines()[0].split(",")
    assert header == ["z_re", "z_im", "kernel", "degree", "increment"]
    d = np.loadtxt(out, delimiter=",", skiprows=1)
    z = d[:, 0] + 1j * d[:, 1]
    exact = 1 / (np.pi * (1 - np.abs(z) ** 2) ** 2)
    assert np.max(np.abs(d[:, 2] / exact - 1)) < 1e-6


def test_csv_uses_seventeen_significant_digits(tmp_path):
    res = run("kernel", "--domain", "builtin:unit-disc", "--points", "list:0.1")
    assert res.returncode == 0
    value = res.stdout.splitlines()[1].split(",")[2]
    assert float(value) == 1 / (np.pi * (1 - 0.01) ** 2)
    assert len(value.replace(".", "").lstrip("0")) >= 16


def test_triangle_exhaustion_probe(tmp_path):
    res = run("probe", "exhaustion", "--domain", "builtin:hartogs-triangle", "--at", "0,0",
              "--out", "r/", cwd=tmp_path)
    assert res.returncode == 0, res.stderr
    verdict = json.loads((tmp_path / "r" / "verdict.json").read_text())
    assert verdict["verdict"] == "diverging"
    assert (tmp_path / "r" / "report.csv").read_text().startswith("step,scale")


def test_probe_inconclusive_exit_status(tmp_path):
    # two steps are too few for a monotone tail and 0.1 is below every value
    res = run("probe", "exhaustion", "--domain", "builtin:unit-disc", "--at", "1",
              "--steps", "2", "--bound", "0.1", "--out", str(tmp_path))
    assert res.returncode == 2
    assert "inconclusive" in res.stdout


def test_kernel_two_dimensional_points():
    res = run("kernel", "--domain", "builtin:ball", "--points", "list:0.1;0.2|0;0")
    assert res.returncode == 0, res.stderr
    rows = [r.split(",") for r in res.stdout.splitlines()]
    assert rows[0][:4] == ["z1_re", "z1_im", "z2_re", "z2_im"]
    assert float(rows[2][4]) == pytest.approx(2 / np.pi ** 2, rel=1e-10)


def test_distance_writes_trace(tmp_path):
    res = run("distance", "--domain", "builtin:unit-disc", "0", "0.5", "--out", str(tmp_path))
    assert res.returncode == 0, res.stderr
    summary = json.loads((tmp_path / "distance.json").read_text())
    assert summary["bound"] == pytest.approx(np.sqrt(2) * np.arctanh(0.5), abs=1e-3)
    assert (tmp_path / "trace.csv").read_text().startswith("level,nodes,bound,mesh_length")


def test_catalog_json():
    res = run("catalog", "--json")
    names = {d["name"] for d in json.loads(res.stdout)}
    assert {"unit-disc", "hartogs-triangle", "zalcman-d3"} <= names


def test_construct_schedule_round_trips(tmp_path):
    out = tmp_path / "s.json"
    res = run("construct", "zalcman-radii", "--stages", "1", "--grid", "16", "--out", str(out))
    assert res.returncode == 0, res.stderr
    from bergman_lab.constructions import Schedule
    s = Schedule.from_json(out.read_text())
    assert len(s.certificates) == 1


def test_usage_errors_exit_64():
    assert run("kernel", "--domain", "builtin:unit-disc").returncode == 64
    assert run("no-such-command").returncode == 64
    res = run("kernel", "--domain", "builtin:unit-disc", "--points", "list:0", "--degree", "0")
    assert res.returncode == 64


def test_unknown_config_field_rejected(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"degree": 40, "colour": "blue"}))
    res = run("kernel", "--domain", "builtin:unit-disc", "--points", "list:0",
              "--config", str(cfg))
    assert res.returncode == 64
    assert "colour" in res.stderr


def test_runtime_errors_exit_1(tmp_path):
    assert run("kernel", "--domain", "builtin:nope", "--points", "list:0").returncode == 1
    res = run("kernel", "--domain", "builtin:unit-disc", "--points", "list:2")
    assert res.returncode == 1 and "outside" in res.stderr
    res = run("kernel", "--domain", str(tmp_path / "missing.json"), "--points", "list:0")
    assert res.returncode == 1


def test_cache_directory_is_used(tmp_path):
    args = ("kernel", "--domain", "builtin:disc-minus-disc", "--degree", "20",
            "--points", "list:0|0.2j", "--cache-dir", str(tmp_path / "c"))
    first, second = run(*args), run(*args)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout
    assert list((tmp_path / "c").glob("*.npz"))
