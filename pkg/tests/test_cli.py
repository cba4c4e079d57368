import json

import numpy as np
import pytest

from trapfermions.cli import main


def read_csv(path):
    meta, names, rows = {}, None, []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            meta[key.strip()] = value.strip()
        elif names is None:
            names = line.split(",")
        else:
            rows.append(line.split(","))
    return meta, names, rows


def test_spectrum_free_fermions(tmp_path):
    out = tmp_path / "spec.csv"
    assert main(["spectrum", "--n", "3", "--t", "1", "--kmax", "5", "--out", str(out)]) == 0
    meta, names, rows = read_csv(out)
    assert meta["n"] == "3"
    assert names == ["k", "lambda", "pair_gap", "segment"]
    lam = [float(r[1]) for r in rows]
    assert lam[:3] == pytest.approx([1.0, 1.0, 1.0], abs=1e-10)
    assert abs(lam[4]) < 1e-10


def test_spectrum_json_mirror(tmp_path):
    out = tmp_path / "spec.json"
    code = main(
        ["spectrum", "--n", "3", "--t", "1", "--kmax", "4", "--format", "json", "--out", str(out)]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["meta"]["method"] == "nystrom"
    assert doc["columns"]["lambda"][0] == pytest.approx(1.0, abs=1e-10)


def test_validation_errors_exit_2(tmp_path):
    assert main(["spectrum", "--n", "1", "--t", "1"]) == 2
    assert main(["potential", "--n", "2"]) == 2
    assert main(["spectrum", "--n", "5", "--t", "0.5", "--method", "schrodinger"]) == 2


def test_potential_report(tmp_path):
    out = tmp_path / "pot.csv"
    assert main(["potential", "--n", "4", "--out", str(out)]) == 0
    meta, _, _ = read_csv(out)
    report = json.loads(meta["extrema_report"])
    assert report["minima_count"] == 4
    assert report["parity_verdict"] == "even_like_degenerate_pair"


def test_parity_scan_deterministic(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (out1, out2):
        assert main(["parity-scan", "--nmin", "2", "--nmax", "7", "--out", str(out)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    _, _, rows = read_csv(out1)
    assert [r[0] for r in rows] == ["2", "3", "4", "5", "6", "7"]
    assert rows[0][-1] == "skipped"


def test_config_file_overrides_flags(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 4\nt = 0.8\n")
    out = tmp_path / "density.csv"
    code = main(
        ["density", "--n", "3", "--t", "1", "--points", "5", "--config", str(cfg), "--out", str(out)]
    )
    assert code == 0
    meta, _, _ = read_csv(out)
    assert meta["n"] == "4"
    assert meta["t"] == "0.8"


def test_density_rescaled_emission(tmp_path):
    out = tmp_path / "density.csv"
    code = main(
        ["density", "--n", "3", "--t", "10", "--points", "7", "--rescale", "--out", str(out)]
    )
    assert code == 0
    meta, names, rows = read_csv(out)
    assert meta["route"] == "oracle_integration"
    assert names == ["x", "t_times_density_at_tx"]
    vals = np.array([float(r[1]) for r in rows])
    assert np.allclose(vals, vals[::-1], rtol=1e-8)


def test_pairdensity_raw_flag(tmp_path):
    norm, raw = tmp_path / "norm.csv", tmp_path / "raw.csv"
    base = ["pairdensity", "--n", "2", "--t", "0.5", "--points", "9"]
    assert main(base + ["--out", str(norm)]) == 0
    assert main(base + ["--raw", "--out", str(raw)]) == 0
    v_norm = np.array([float(r[2]) for r in read_csv(norm)[2]])
    v_raw = np.array([float(r[2]) for r in read_csv(raw)[2]])
    ratio = v_norm[v_raw > 0] / v_raw[v_raw > 0]
    # single global scale, up to the 12-digit rounding of the CSV emission
    assert np.ptp(ratio) <= 1e-9 * ratio[0]
    assert not np.isclose(ratio[0], 1.0)


def test_correlation_surface(tmp_path):
    out = tmp_path / "corr.csv"
    code = main(
        ["correlation", "--n", "2", "--t", "0.7", "--points", "9", "--out", str(out)]
    )
    assert code == 0
    _, names, rows = read_csv(out)
    assert names == ["x", "y", "correlation"]
    diag = [float(r[2]) for r in rows if r[0] == r[1]]
    assert all(v == 0.0 for v in diag)


def test_verify_subcommand_and_tighten():
    assert main(["verify", "--criteria", "9"]) == 0
    assert main(["verify", "--criteria", "9", "--tighten", "1e8"]) == 3
