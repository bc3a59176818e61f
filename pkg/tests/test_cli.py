"""Command-line contract tests: exit codes, report files, determinism."""

import json

import pytest

from nodaltopo import cli


def run(argv):
    return cli.main(argv)


def test_ovals_below_range_is_usage_error(tmp_path, capsys):
    assert run(["ovals", "2", "--out", str(tmp_path)]) == 2


def test_ovals_small_run(tmp_path, capsys):
    code = run(["ovals", "3", "--out", str(tmp_path), "--resolution", "128"])
    assert code == 0
    report = json.loads((tmp_path / "ovals_3.json").read_text())
    assert report["schema"] == 1
    assert report["status"] == "ok"
    assert report["topology"]["components"] == 3
    assert report["bounds"]["courant_ok"]
    assert (tmp_path / "ovals_3.svg").exists()


def test_ovals_json_deterministic(tmp_path):
    out = tmp_path / "a"
    run(["ovals", "3", "--out", str(out), "--resolution", "128", "--seed", "7"])
    first = (out / "ovals_3.json").read_bytes()
    svg_first = (out / "ovals_3.svg").read_bytes()
    run(["ovals", "3", "--out", str(out), "--resolution", "128", "--seed", "7"])
    assert (out / "ovals_3.json").read_bytes() == first
    assert (out / "ovals_3.svg").read_bytes() == svg_first


def test_planar_defaults(tmp_path):
    code = run(["planar", "--radius", "10", "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "planar.json").read_text())
    assert report["topology"]["domains"] == 2
    assert report["topology"]["stable"]
    assert (tmp_path / "planar.svg").exists()


def test_planar_unperturbed_fails_with_many_domains(tmp_path):
    code = run(["planar", "--radius", "8", "--eps", "0", "--out", str(tmp_path), "--no-svg"])
    assert code == 1
    report = json.loads((tmp_path / "planar.json").read_text())
    assert report["topology"]["domains"] > 2


def test_planar_bad_shifts_usage_error(tmp_path):
    assert run(["planar", "--delta1", "0.2", "--delta2", "0.5", "--out", str(tmp_path)]) == 2


def test_lewy_single_chord(tmp_path):
    poly = tmp_path / "poly.txt"
    poly.write_text("0 0\n1 0\n")
    code = run(["lewy", str(poly), "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "lewy.json").read_text())
    assert report["glued_components"] == 1
    assert report["sphere_components"] == 1
    assert (tmp_path / "lewy_plane.svg").exists()
    assert (tmp_path / "lewy_sphere.svg").exists()


def test_lewy_singular_square_reports_gracefully(tmp_path):
    poly = tmp_path / "poly.txt"
    poly.write_text("0 0\n0 0\n1 0\n")
    code = run(["lewy", str(poly), "--out", str(tmp_path), "--no-svg"])
    assert code == 1
    report = json.loads((tmp_path / "lewy.json").read_text())
    assert report["status"] == "singular"
    assert "diagnostics" in report


def test_lewy_non_monic_is_usage_error(tmp_path):
    poly = tmp_path / "poly.txt"
    poly.write_text("0 0\n2 0\n")
    assert run(["lewy", str(poly), "--out", str(tmp_path)]) == 2


def test_diagrams_table(tmp_path):
    code = run(["diagrams", "3", "--out", str(tmp_path), "--no-svg"])
    assert code == 0
    report = json.loads((tmp_path / "diagrams_3.json").read_text())
    assert report["count"] == 5
    assert report["catalan_ok"]
    assert all(row["components"] % 2 == 1 for row in report["rows"])
    assert all(row["parity_ok"] for row in report["rows"])
    lines = (tmp_path / "diagrams_3.txt").read_text().strip().splitlines()
    assert len(lines) == 5


def test_diagrams_single_chord(tmp_path):
    code = run(["diagrams", "1", "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "diagrams_1.json").read_text())
    assert report["rows"][0]["components"] == 1


def test_diagrams_realize_range_gate(tmp_path):
    assert run(["diagrams", "8", "--realize", "--out", str(tmp_path)]) == 2


def test_verify_quick(tmp_path):
    code = run(["verify", "--quick", "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["ok"]


def test_verify_fault_injection_names_invariant(tmp_path):
    code = run(["verify", "--quick", "--inject-fault", "euler", "--out", str(tmp_path)])
    assert code == 1
    report = json.loads((tmp_path / "verify.json").read_text())
    assert "harmonic_sweep" in report["failed"]


def test_dump_zeros(tmp_path):
    code = run(["dump-zeros", "--function", "j1", "--count", "5", "--out", str(tmp_path)])
    assert code == 0
    lines = (tmp_path / "zeros_j1.csv").read_text().strip().splitlines()
    assert lines[0] == "index,zero"
    assert len(lines) == 6
    assert float(lines[1].split(",")[1]) == pytest.approx(3.8317059702, abs=1e-8)


def test_print_config(capsys):
    assert run(["ovals", "5", "--print-config"]) == 0
    out = capsys.readouterr().out
    assert "resolution=256" in out
    assert "eps_start=0.01" in out


def test_config_file_round_trip(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("resolution=128\nseed=9\nsvg=false\n# comment\n")
    assert run(["ovals", "5", "--config", str(cfg), "--print-config"]) == 0
    out = capsys.readouterr().out
    assert "resolution=128" in out and "seed=9" in out and "svg=False" in out
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense=1\n")
    assert run(["ovals", "5", "--config", str(bad), "--print-config"]) == 2


def test_csv_format(tmp_path):
    code = run(["ovals", "3", "--out", str(tmp_path), "--resolution", "128", "--format", "csv", "--no-svg"])
    assert code == 0
    text = (tmp_path / "ovals_3.csv").read_text()
    assert text.startswith("key,value")
    assert "topology.components,3" in text
