import json
import math

import pytest

from sphere_spectra.cli import main
from sphere_spectra.generators import gen_geodesic_sphere
from sphere_spectra.report import load_report
from sphere_spectra.s3off import write_s3off


def test_constants_table(capsys):
    # full-precision sqrt(2): the generic branch applies at lam >= sqrt(n)
    assert main(["constants", "--dim", "2",
                 "--lambda", "1.4142135623730951"]) == 0
    out = capsys.readouterr().out
    assert "a_n" in out and "bound" in out
    assert "1.00001626" in out


def test_constants_totally_geodesic_branch(capsys):
    assert main(["constants", "--dim", "3", "--lambda", "1.2"]) == 0
    out = capsys.readouterr().out
    assert "totally-geodesic" in out
    bound_line = [ln for ln in out.splitlines()
                  if ln.strip().startswith("bound")][0]
    assert " 3 " in bound_line


def test_constants_json_output(tmp_path, capsys):
    out = tmp_path / "c.json"
    assert main(["constants", "--dim", "2", "--lambda", "1.5",
                 "--out", str(out)]) == 0
    capsys.readouterr()
    data = json.loads(out.read_text())
    assert data["dim"] == 2
    assert data["a_n"] == pytest.approx(1.3155332985270223e-4)
    assert data["chain"]["valid"] is True


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["constants", "--dim"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == 2


def test_verify_surface_writes_report(tmp_path, capsys):
    out = tmp_path / "rep.json"
    csv_out = tmp_path / "rep.csv"
    assert main(["verify-surface", "--gen", "clifford", "--res", "24",
                 "--out", str(out), "--csv", str(csv_out)]) == 0
    text = capsys.readouterr().out
    assert "[pass] improved_bound" in text
    data = load_report(out)
    assert data["spectrum"]["lambda1"] == pytest.approx(2.0, rel=0.01)
    lines = csv_out.read_text().strip().splitlines()
    assert len(lines) == 2


def test_verify_surface_from_s3off(tmp_path, capsys):
    mesh_path = tmp_path / "equator.s3off"
    write_s3off(gen_geodesic_sphere(math.pi / 2.0, 3), mesh_path)
    assert main(["verify-surface", "--mesh", str(mesh_path)]) == 0
    out = capsys.readouterr().out
    assert "totally-geodesic" in out


def test_mesh_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.s3off"
    bad.write_text("NOPE\n")
    assert main(["verify-surface", "--mesh", str(bad)]) == 3
    assert "mesh error" in capsys.readouterr().err


def test_solver_failure_exit_code(tmp_path, monkeypatch, capsys):
    from sphere_spectra import report as report_mod
    from sphere_spectra.spectral import ConvergenceError

    def fail(*args, **kwargs):
        raise ConvergenceError("forced", 0.0, None, 1.0, 1)

    monkeypatch.setattr(report_mod.spectral, "smallest_nonzero_eig", fail)
    assert main(["verify-surface", "--gen", "clifford", "--res", "16"]) == 4
    assert "solver failure" in capsys.readouterr().err


def test_offsets_table(capsys):
    assert main(["offsets", "--gen", "clifford", "--res", "16",
                 "--ts", "0.2,0.8"]) == 0
    out = capsys.readouterr().out
    assert "embedded" in out
    assert "beyond T=0.7854" in out


def test_verify_oracles_pass(capsys):
    assert main(["verify-oracles", "--dims", "2", "--only", "chain"]) == 0
    out = capsys.readouterr().out
    assert "checks passed" in out


def test_verify_oracles_filter_and_loose_tol(capsys):
    assert main(["verify-oracles", "--dims", "2", "--only", "reilly",
                 "--tol", "1e-6"]) == 0
    out = capsys.readouterr().out
    assert "reilly" in out and "chain" not in out


def test_verify_oracles_failure_exit(capsys):
    assert main(["verify-oracles", "--dims", "2", "--only", "reilly",
                 "--tol", "1e-16"]) == 5
    err = capsys.readouterr().err
    assert "reilly" in err


def test_report_merge_and_schema_mismatch(tmp_path, capsys):
    out = tmp_path / "rep.json"
    assert main(["verify-surface", "--gen", "sphere", "--r", "0.9",
                 "--subdiv", "3", "--out", str(out)]) == 0
    merged_csv = tmp_path / "merged.csv"
    assert main(["report", str(out), str(out), "--csv", str(merged_csv)]) == 0
    assert len(merged_csv.read_text().strip().splitlines()) == 3
    capsys.readouterr()

    bad = tmp_path / "bad.json"
    data = json.loads(out.read_text())
    data["schema"] = 99
    bad.write_text(json.dumps(data))
    assert main(["report", str(out), str(bad)]) == 6
    assert "schema" in capsys.readouterr().err


def test_report_empty_inputs_header_only(capsys):
    assert main(["report"]) == 0
    out = capsys.readouterr().out
    assert out.strip().splitlines()[0].startswith("name,")


def test_config_file_defaults(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults for the demo run\ndim = 3\nlambda = 1.2\n")
    assert main(["constants", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "n = 3" in out
    # explicit flags override the config
    assert main(["constants", "--config", str(cfg), "--dim", "2"]) == 0
    out = capsys.readouterr().out
    assert "n = 2" in out


def test_config_parse_error(tmp_path, capsys):
    cfg = tmp_path / "broken.cfg"
    cfg.write_text("dim: 3\n")
    assert main(["constants", "--config", str(cfg)]) == 2
    assert "config error" in capsys.readouterr().err


def test_seed_env_override(tmp_path, monkeypatch, capsys):
    out_a = tmp_path / "a.json"
    out_b = tmp_path / "b.json"
    monkeypatch.setenv("SPHERE_SPECTRA_SEED", "7")
    assert main(["verify-surface", "--gen", "clifford", "--res", "16",
                 "--seed", "3", "--out", str(out_a)]) == 0
    monkeypatch.delenv("SPHERE_SPECTRA_SEED")
    assert main(["verify-surface", "--gen", "clifford", "--res", "16",
                 "--seed", "7", "--out", str(out_b)]) == 0
    capsys.readouterr()
    a = load_report(out_a)
    b = load_report(out_b)
    # env seed 7 overrode --seed 3: identical deterministic runs
    assert a["parameters"]["seed"] == 7
    assert a["spectrum"]["lambda1"] == b["spectrum"]["lambda1"]
    assert a["spectrum"]["iterations"] == b["spectrum"]["iterations"]
