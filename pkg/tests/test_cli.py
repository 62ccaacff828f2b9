"""Command line interface: config round trips, artifacts, exit codes."""

import csv
import json
import re

import numpy as np
import pytest

from dirgeo.cli import ConfigError, RunConfig, main


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# config object


def test_config_roundtrip():
    cfg = RunConfig.from_dict(
        {
            "command": "geodesic",
            "family": "rational",
            "params": {"point": [1.0, 2.0], "velocity": [0.1, -0.2], "time": 3.0},
            "format": "csv",
            "seed": 7,
        }
    )
    again = RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg
    assert again.dimension == 2


def test_config_rejects_unknown_top_level():
    with pytest.raises(ConfigError, match="unknown"):
        RunConfig.from_dict({"command": "distance", "typo": 1,
                             "params": {"src": [1, 1], "dst": [2, 2]}})


def test_config_rejects_unknown_param():
    with pytest.raises(ConfigError, match="allowed"):
        RunConfig.from_dict({"command": "distance",
                             "params": {"src": [1, 1], "dst": [2, 2], "bogus": 3}})


def test_config_rejects_dimension_conflict():
    with pytest.raises(ConfigError, match="dimension"):
        RunConfig.from_dict({"command": "metric", "dimension": 3,
                             "params": {"point": [1.0, 2.0]}})


def test_config_rejects_bad_family():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"command": "metric", "family": "cubic",
                             "params": {"point": [1.0, 2.0]}})


def test_config_rejects_bad_format():
    with pytest.raises(ConfigError, match="format"):
        RunConfig.from_dict({"command": "distance", "format": "svg",
                             "params": {"src": [1, 1], "dst": [2, 2]}})


# command behaviour, in process


def test_metric_json_structure(capsys):
    code, out, _ = run_cli(["metric", "--point", "1,2"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["command"] == "metric"
    assert doc["quantity"] == "metric"
    g = np.array(doc["values"])
    assert g.shape == (2, 2)
    assert g[0, 1] == g[1, 0]


def test_metric_inverse_consistent(capsys):
    code, out, _ = run_cli(["metric", "--point", "1,2"], capsys)
    g = np.array(json.loads(out)["values"])
    code, out, _ = run_cli(["metric", "--point", "1,2", "--quantity", "inverse"], capsys)
    ginv = np.array(json.loads(out)["values"])
    assert np.allclose(g @ ginv, np.eye(2), atol=1e-12)


def test_distance_value(capsys):
    code, out, _ = run_cli(
        ["distance", "--from", "2,5", "--to", "2,2"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["distance"] == pytest.approx(1.1240961347, abs=1e-8)


def test_geodesic_csv_format(tmp_path, capsys):
    dest = tmp_path / "path.csv"
    code, _, err = run_cli(
        ["geodesic", "--point", "1,1", "--velocity", "0.5,0.2",
         "--time", "1", "--samples", "5", "-o", str(dest)],
        capsys,
    )
    assert code == 0
    assert f"wrote {dest}" in err
    rows = list(csv.reader(dest.read_text().splitlines()))
    assert rows[0] == ["t", "x1", "x2", "v1", "v2"]
    assert len(rows) == 6
    # every float is emitted with 17 significant digits
    assert re.fullmatch(r"-?\d+(\.\d+)?(e[+-]?\d+)?", rows[1][1])
    assert float(rows[-1][0]) == 1.0


def test_cli_artifacts_deterministic(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for dest in (a, b):
        run_cli(
            ["geodesic", "--point", "1,1", "--velocity", "0.3,-0.1",
             "--time", "2", "--samples", "9", "-o", str(dest)],
            capsys,
        )
    assert a.read_bytes() == b.read_bytes()


def test_mean_command(capsys):
    code, out, _ = run_cli(
        ["mean", "--point", "2,5", "--point", "2,2", "--point", "5,1"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert np.allclose(doc["mean"], [1.614857165482436, 1.4135876012427333], atol=1e-6)
    assert doc["iterations"] > 0


def test_curvature_grid_csv(tmp_path, capsys):
    dest = tmp_path / "grid.csv"
    code, _, err = run_cli(
        ["curvature-grid", "--range", "0.1:10", "--res", "4", "-o", str(dest)],
        capsys,
    )
    assert code == 0
    assert "grid minimum" in err
    rows = list(csv.reader(dest.read_text().splitlines()))
    assert rows[0] == ["x", "y", "value"]
    assert len(rows) == 17
    assert all(float(r[2]) < 0.0 for r in rows[1:])


def test_embed_json(capsys):
    code, out, _ = run_cli(["embed", "--point", "1,2,3"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert len(doc["coordinates"]) == 4
    assert len(doc["normal"]) == 4
    ks = doc["principal_curvatures"]
    assert len(ks) == 3 and all(k > 0 for k in ks)


def test_diagonal_csv(capsys):
    code, out, _ = run_cli(
        ["diagonal", "--x0", "1", "--xdot0", "0.5", "--time", "2",
         "--samples", "5", "--format", "csv"],
        capsys,
    )
    assert code == 0
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == ["t", "x1", "x2", "v1", "v2"]
    body = np.array(rows[1:], dtype=float)
    assert np.allclose(body[:, 1], body[:, 2])


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({
        "command": "distance",
        "family": "trigamma",
        "params": {"src": [2.0, 5.0], "dst": [2.0, 2.0]},
    }))
    code, out, _ = run_cli(
        ["distance", "--config", str(cfg), "--family", "rational"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["family"] == "rational"
    # rational family gives a nearby but distinct value
    assert doc["distance"] != pytest.approx(1.1240961347, abs=1e-6)
    assert doc["distance"] == pytest.approx(1.124, abs=0.05)


def test_config_file_command_mismatch(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({
        "command": "metric", "params": {"point": [1.0, 2.0]},
    }))
    code, _, err = run_cli(["distance", "--config", str(cfg),
                            "--from", "1,1", "--to", "2,2"], capsys)
    assert code == 2
    assert "error:" in err


def test_connect_writes_companion_svg(tmp_path, capsys):
    dest = tmp_path / "bridge.csv"
    code, _, err = run_cli(
        ["connect", "--from", "2,5", "--to", "2,2", "--samples", "9",
         "-o", str(dest)],
        capsys,
    )
    assert code == 0
    assert dest.exists()
    svg = dest.with_suffix(".svg")
    assert svg.exists()
    assert svg.read_bytes().startswith(b"<svg")


def test_usage_error_exit_2(capsys):
    code, _, err = run_cli(["metric", "--point", "1,0"], capsys)
    assert code == 2
    assert "error:" in err


def test_numerical_error_exit_3(capsys):
    code, _, err = run_cli(
        ["geodesic", "--point", "1,1", "--velocity=-3,-3", "--time", "50"],
        capsys,
    )
    assert code == 3
    doc = json.loads(err.strip().splitlines()[-1])
    assert doc["error"]
    assert doc["t"] > 0.0


def test_validate_quick(capsys):
    code, out, _ = run_cli(["validate", "--quick"], capsys)
    assert code == 0
    assert "passed" in out
    assert "0 failed" in out


def test_figures_subset(tmp_path, capsys):
    code, _, err = run_cli(
        ["figures", "--which", "4", "--res", "8", "-o", str(tmp_path)], capsys
    )
    assert code == 0
    assert (tmp_path / "dimension_gap.svg").exists()
    assert (tmp_path / "dimension_gap.csv").exists()
    assert not (tmp_path / "balls.svg").exists()
