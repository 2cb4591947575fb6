import hashlib
import json
import subprocess
import sys

import pytest

from siciak_support.cli import EXIT_CONFIG, EXIT_OK, EXIT_STAGE, EXIT_USAGE, main, parse_complex


def run_cli(tmp_path, command, settings, *extra, name="out"):
    cfg = tmp_path / f"{name}.json"
    cfg.write_text(json.dumps(settings))
    out = tmp_path / name
    code = main([command, "--config", str(cfg), "--out", str(out), *extra])
    return code, out


def hashes(out):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(out.iterdir()) if p.name != "manifest.json"}


def test_cross_norm_point(tmp_path, capsys):
    assert main(["cross-norm", "--point", "2", "i", "--out", str(tmp_path)]) == EXIT_OK
    assert "cross-norm 3" in capsys.readouterr().out
    data = json.loads((tmp_path / "cross_norm.json").read_text())
    assert data[0]["cross_norm"] == pytest.approx(3)


def test_cross_norm_real_vector(tmp_path):
    code, out = run_cli(tmp_path, "cross-norm", {"points": [[3, 4]]})
    assert code == EXIT_OK
    data = json.loads((out / "cross_norm.json").read_text())
    assert data[0]["cross_norm"] == pytest.approx(5) == data[0]["euclidean_norm"]


def test_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["psi", "--config", str(bad), "--out", str(tmp_path / "o")]) == EXIT_CONFIG
    assert "malformed JSON" in capsys.readouterr().err


@pytest.mark.parametrize("settings", [
    {"E": {"type": "arc"}},
    {"E": {"type": "blob", "count": 4}, "grid": {"points": [[1, 0]]}},
    {"E": {"type": "sphere", "count": 8}, "solver": {"max_degree": 0},
     "grid": {"points": [[1, 0]]}},
])
def test_config_errors(tmp_path, settings):
    code, _ = run_cli(tmp_path, "psi", settings)
    assert code == EXIT_CONFIG


def test_missing_config_file(tmp_path):
    assert main(["psi", "--config", str(tmp_path / "nope.json")]) == EXIT_CONFIG


def test_unknown_command_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_module_entry_point_usage():
    proc = subprocess.run([sys.executable, "-m", "siciak_support", "nope"],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_USAGE


def test_stage_failure_exit(tmp_path, capsys):
    settings = {"E": {"type": "explicit", "points": [[1, 0]]}, "grid": {"points": [[0, 1]]}}
    code, _ = run_cli(tmp_path, "psi", settings)
    assert code == EXIT_STAGE
    assert "psi_grid" in capsys.readouterr().err


def test_parse_complex_forms():
    assert parse_complex("2-1.5i") == 2 - 1.5j
    assert parse_complex("i") == 1j
    assert parse_complex([1, -2]) == 1 - 2j
    assert parse_complex(3) == 3


def test_psi_determinism_and_manifest(tmp_path):
    settings = {"E": {"type": "sphere", "count": 32}, "solver": {"max_degree": 3},
                "grid": {"random": 6}}
    c1, o1 = run_cli(tmp_path, "psi", settings, "--seed", "5", name="a")
    c2, o2 = run_cli(tmp_path, "psi", settings, "--seed", "5", "--threads", "3", name="b")
    assert c1 == c2 == EXIT_OK
    assert hashes(o1) == hashes(o2)
    manifest = json.loads((o1 / "manifest.json").read_text())
    listed = {f["path"]: f["sha256"] for f in manifest["files"]}
    assert listed == hashes(o1)
    assert {"command", "config", "versions", "timings", "summary"} <= set(manifest)
    c3, o3 = run_cli(tmp_path, "psi", settings, "--seed", "6", name="c")
    assert hashes(o3) != hashes(o1)


def test_capacity_circle(tmp_path, capsys):
    settings = {"E": {"type": "sphere", "count": 128}, "solver": {"max_degree": 4},
                "sphere_samples": 16}
    code, out = run_cli(tmp_path, "capacity", settings)
    assert code == EXIT_OK
    cap = json.loads((out / "capacity.json").read_text())["value"]
    assert cap == pytest.approx(2 ** -0.5, rel=0.05)
    assert "capacity 0.7" in capsys.readouterr().out


def test_extend_and_order_type(tmp_path, capsys):
    settings = {"exponential": {"a": [1, 0.5], "K": 12,
                                "E": {"type": "arc", "start": 0, "stop": 1.5707963267948966,
                                      "count": 32}},
                "probes": [[1, "i"]], "solver": {"max_degree": 3}}
    code, out = run_cli(tmp_path, "extend", settings, name="ext")
    assert code == EXIT_OK and "bound check PASS" in capsys.readouterr().out
    assert json.loads((out / "extension.json").read_text())["polynomials"][12]["degree"] == 12
    code, out = run_cli(tmp_path, "order-type", {"comparison": {"sigma": 2, "rho": 0.5,
                                                                "K": 400}}, name="ot")
    assert code == EXIT_OK
    rep = json.loads((out / "order_type.json").read_text())
    assert rep["order"]["value"] == pytest.approx(0.5, rel=0.03)
    assert rep["type"]["value"] == pytest.approx(2, rel=0.03)


def test_radon_outputs(tmp_path):
    settings = {"field": {"family": "gaussian", "centers": [[0, 0]], "radii": [1.0]},
                "directions": [[1, 0], [0, 1]], "grid": {"h": 0.05},
                "eps_rel": [1e-6, 1e-3], "slice_checks": [{"omega": [1, 0], "s": 2.0}]}
    code, out = run_cli(tmp_path, "radon", settings)
    assert code == EXIT_OK
    assert {"sinogram.csv", "supports.json", "fourier_slice.json"} <= set(hashes(out))
    chk = json.loads((out / "fourier_slice.json").read_text())[0]
    assert chk["discrepancy"] < 1e-6


def test_locate_quarter_arc(tmp_path, capsys):
    settings = {"field": {"family": "smoothed-ball", "centers": [[0, 0]], "radii": [1.0],
                          "widths": [0.1]},
                "E": {"type": "arc", "start": 0, "stop": 1.5707963267948966, "count": 16},
                "solver": {"max_degree": 2}, "direction_grid": 64, "grid": {"h": 0.01},
                "samples": 200}
    code, out = run_cli(tmp_path, "locate", settings)
    assert code == EXIT_OK
    assert "containment verdict PASS" in capsys.readouterr().out
    names = set(hashes(out))
    assert {"locate_report.json", "body_0.json", "polygon_0.csv", "body_refined_0.json"} <= names
