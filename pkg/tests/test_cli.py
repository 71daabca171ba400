"""End-to-end tests of the command-line interface.

All invocations go through ``main(argv)`` directly so exit codes, stdout,
stderr, and file outputs are exercised exactly as a shell user sees them.
"""
import json
import math

import numpy as np
import pytest

from pdmlag.cli import main


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _csv_rows(text):
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    return header, rows


# ---------------------------------------------------------------------------
# spectrum

def test_spectrum_csv_default(capsys):
    code, out, err = _run(capsys, ["spectrum", "--case", "1", "--m", "2"])
    assert code == 0 and err == ""
    header, rows = _csv_rows(out)
    assert header == ["n", "E_analytic", "E_numeric", "abs_err", "rel_err"]
    assert len(rows) == 4
    assert [r[0] for r in rows] == [0.0, 1.0, 2.0, 3.0]
    for row in rows:
        assert row[4] < 1e-4


def test_spectrum_susy_zero_preset(capsys):
    code, out, _ = _run(capsys, ["spectrum", "--case", "1", "--m", "1",
                                 "--preset", "susy-zero", "--nmax", "2"])
    assert code == 0
    _, rows = _csv_rows(out)
    assert [r[1] for r in rows] == [0.0, 1.0, 2.0]


def test_spectrum_json_format(capsys):
    code, out, _ = _run(capsys, ["spectrum", "--case", "2", "--eta", "1",
                                 "--format", "json", "--nmax", "1"])
    assert code == 0
    doc = json.loads(out)
    assert doc["columns"] == ["n", "E_analytic", "E_numeric", "abs_err",
                              "rel_err"]
    assert doc["metadata"]["parameters"]["eta"] == 1
    assert doc["metadata"]["parameters"]["alpha"] == "2"
    assert len(doc["data"]) == 2
    assert doc["data"][0][1] == pytest.approx(2.0)  # (alpha+1)/2 + m/alpha


def test_invalid_alpha_exits_one(capsys):
    code, out, err = _run(capsys, ["spectrum", "--case", "1", "--alpha", "1"])
    assert code == 1
    assert out == ""
    assert "alpha must be > 1" in err


def test_vc_and_preset_conflict(tmp_path, capsys):
    # both flags at once are rejected by the parser itself
    with pytest.raises(SystemExit):
        main(["spectrum", "--vc", "1", "--preset", "susy-zero"])
    capsys.readouterr()
    # a config-file vc combined with a --preset flag is caught downstream
    cfg = tmp_path / "run.cfg"
    cfg.write_text("vc = -2\n", encoding="utf-8")
    code, _, err = _run(capsys, ["spectrum", "--config", str(cfg),
                                 "--preset", "susy-zero"])
    assert code == 1
    assert "not both" in err


def test_float_repr_round_trips(capsys):
    code, out, _ = _run(capsys, ["spectrum", "--case", "1", "--m", "1",
                                 "--format", "json", "--nmax", "0"])
    assert code == 0
    doc = json.loads(out)
    numeric = doc["data"][0][2]
    # 17 significant digits reproduce the binary double exactly
    assert float(f"{numeric:.17g}") == numeric


# ---------------------------------------------------------------------------
# profile

def test_profile_columns_and_mass(capsys):
    code, out, _ = _run(capsys, ["profile", "--case", "2", "--eta", "1",
                                 "--npoints", "501"])
    assert code == 0
    header, rows = _csv_rows(out)
    assert header == ["x", "M", "V_eff", "psi0_sq", "psi1_sq", "psi2_sq"]
    data = np.array(rows)
    # eta=1: l=4, M = 16 x^2
    np.testing.assert_allclose(data[:, 1], 16.0 * data[:, 0] ** 2, rtol=1e-12)
    assert np.all(data[:, 3:] >= 0.0)


@pytest.mark.parametrize("argv", [
    ["profile", "--case", "1", "--m", "2"],
    ["profile", "--case", "2", "--eta", "2", "--m", "1"],
])
def test_profile_densities_normalized(capsys, argv):
    from scipy.integrate import simpson
    code, out, _ = _run(capsys, argv)
    assert code == 0
    _, rows = _csv_rows(out)
    data = np.array(rows)
    for col in (3, 4, 5):
        total = simpson(data[:, col], x=data[:, 0])
        assert total == pytest.approx(1.0, abs=1e-6), col


# ---------------------------------------------------------------------------
# density2d

def test_density2d_rejects_case1(capsys):
    code, _, err = _run(capsys, ["density2d", "--case", "1"])
    assert code == 1
    assert "Case 2" in err


def test_density2d_mesh(capsys):
    code, out, _ = _run(capsys, ["density2d", "--case", "2", "--eta", "1",
                                 "--n1", "1", "--n2", "2", "--npoints", "161"])
    assert code == 0
    header, rows = _csv_rows(out)
    assert header == ["x", "y", "rho"]
    data = np.array(rows)
    assert data.shape == (161 * 161, 3)
    xs = data[::161, 0]
    rho = data[:, 2].reshape(161, 161)
    # separable density integrates to 1 over the quadrant
    total = np.trapezoid(np.trapezoid(rho, xs, axis=1), xs)
    assert total == pytest.approx(1.0, abs=1e-4)
    # (n1+1)*(n2+1) = 6 lobes
    peak = rho.max()
    lobes = 0
    for i in range(1, 160):
        for j in range(1, 160):
            window = rho[i - 1:i + 2, j - 1:j + 2]
            if rho[i, j] == window.max() and rho[i, j] > 1e-3 * peak \
                    and np.sum(window == rho[i, j]) == 1:
                lobes += 1
    assert lobes == 6


# ---------------------------------------------------------------------------
# verify

def _load_schema():
    from importlib import resources
    ref = resources.files("pdmlag") / "schemas" / "verify_report.schema.json"
    return json.loads(ref.read_text(encoding="utf-8"))


def test_verify_passes_and_matches_schema(capsys):
    import jsonschema
    code, out, err = _run(capsys, ["verify"])
    assert code == 0, err
    report = json.loads(out)
    jsonschema.validate(report, _load_schema())
    names = [c["name"] for c in report["checks"]]
    assert len(names) == len(set(names))
    assert all(c["status"] == "pass" for c in report["checks"])
    assert report["summary"]["failed"] == 0
    assert report["summary"]["total"] == len(names)


def test_verify_corruption_trips_oracle_checks(capsys):
    code, out, _ = _run(capsys, ["verify", "--corrupt-veff", "0.1"])
    assert code == 2
    report = json.loads(out)
    status = {c["name"]: c["status"] for c in report["checks"]}
    assert status["oracle-spectrum-case1"] == "fail"
    assert status["oracle-spectrum-case2"] == "fail"
    # checks that do not consult the numeric spectrum stay green
    assert status["xm-ode-exact"] == "pass"
    assert status["orthonormality-case1"] == "pass"
    # a constant shift moves levels but not gaps
    assert status["isochronous-gaps"] == "pass"
    assert report["summary"]["failed"] >= 2


# ---------------------------------------------------------------------------
# determinism, config files, output paths

def test_byte_identical_reruns(capsys):
    argv = ["spectrum", "--case", "2", "--eta", "2", "--m", "2",
            "--format", "json"]
    _, first, _ = _run(capsys, argv)
    _, second, _ = _run(capsys, argv)
    assert first == second
    argv_csv = ["profile", "--case", "1", "--npoints", "101"]
    _, first, _ = _run(capsys, argv_csv)
    _, second, _ = _run(capsys, argv_csv)
    assert first == second


def test_config_file_key_value(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment line\ncase = 2\neta = 1\nnmax = 1\n"
                   "grid-hi = 6.5\n", encoding="utf-8")
    code, out, _ = _run(capsys, ["spectrum", "--config", str(cfg)])
    assert code == 0
    _, rows = _csv_rows(out)
    assert len(rows) == 2
    assert rows[0][1] == pytest.approx(2.0)


def test_config_file_json(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"case": 2, "eta": 1, "nmax": 1}),
                   encoding="utf-8")
    code, out, _ = _run(capsys, ["spectrum", "--config", str(cfg)])
    assert code == 0
    _, rows = _csv_rows(out)
    assert rows[0][1] == pytest.approx(2.0)


def test_flags_override_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("case = 2\neta = 1\nnmax = 1\n", encoding="utf-8")
    code, out, _ = _run(capsys, ["spectrum", "--config", str(cfg),
                                 "--nmax", "3"])
    assert code == 0
    _, rows = _csv_rows(out)
    assert len(rows) == 4


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("wibble = 3\n", encoding="utf-8")
    code, _, err = _run(capsys, ["spectrum", "--config", str(cfg)])
    assert code == 1
    assert "wibble" in err


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "nested" / "spec.csv"
    code, out, _ = _run(capsys, ["spectrum", "--case", "1",
                                 "--out", str(target)])
    assert code == 0
    assert out == ""
    header, rows = _csv_rows(target.read_text(encoding="utf-8"))
    assert header[0] == "n" and len(rows) == 4


def test_outdir_env_resolves_relative_paths(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PDMLAG_OUTDIR", str(tmp_path))
    code, out, _ = _run(capsys, ["spectrum", "--case", "1",
                                 "--out", "sub/run.csv"])
    assert code == 0
    assert (tmp_path / "sub" / "run.csv").exists()
