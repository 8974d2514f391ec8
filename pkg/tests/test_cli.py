"""End-to-end CLI behavior: files, formats, gating, determinism."""

import csv
import json

import pytest

from wellcond.cli import main


def run(argv):
    return main([str(a) for a in argv])


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def read_rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_generate_table_factors_m2(tmp_path):
    assert run(["generate", "--M", "2", "--out", tmp_path]) == 0
    d = read_json(tmp_path / "polynomial_M2.json")
    facs = {(f["r"], f["s"]) for f in d["factorized"]["factors"]}
    assert facs == {(8, "1/1"), (4, "49/1"), (4, "1/49")}
    assert d["dense"]["N"] == 16
    assert d["config"]["command"] == "generate"


def test_generate_m1_csv_four_point_rows(tmp_path):
    assert run(["generate", "--M", "1", "--format", "csv", "--out", tmp_path]) == 0
    rows = read_rows(tmp_path / "points_M1.csv")
    assert rows[0] == ["parallel", "k", "x", "y", "z"]
    assert len(rows) == 1 + 4


def test_generate_m3_point_count(tmp_path):
    assert run(["generate", "--M", "3", "--out", tmp_path]) == 0
    d = read_json(tmp_path / "points_M3.json")
    assert len(d["points"]["points"]) == 36
    assert len(d["points"]["parallels"]) == 5


def test_cond_m1_sqrt2(tmp_path):
    assert run(["cond", "--M", "1", "--route", "coeff", "--out", tmp_path]) == 0
    rep = read_json(tmp_path / "cond_M1.json")["reports"][0]
    assert rep["mu_max"].startswith("1.41421356")
    assert rep["verdicts"] == {
        "le_N": True,
        "le_19half_sqrt": True,
        "ge_lower": True,
    }


def test_cond_both_routes_agree(tmp_path):
    assert run(["cond", "--M", "3", "--route", "both", "--out", tmp_path]) == 0
    reps = read_json(tmp_path / "cond_M3.json")["reports"]
    assert [r["route"] for r in reps] == ["coefficient", "spherical"]
    assert float(reps[0]["route_rel_diff"]) < 1e-6


def test_cond_certify_m4(tmp_path):
    assert run(["cond", "--M", "4", "--certify", "--out", tmp_path]) == 0
    reps = read_json(tmp_path / "cond_M4.json")["reports"]
    cert = [r for r in reps if r["route"] == "coefficient-certified"]
    assert len(cert) == 1
    assert cert[0]["certified"] is True
    assert cert[0]["verdicts"]["le_N"] is True


def test_cond_csv_format(tmp_path):
    assert run(
        ["cond", "--M", "1..2", "--format", "csv", "--out", tmp_path]
    ) == 0
    rows = read_rows(tmp_path / "cond.csv")
    assert rows[0][0] == "M" and len(rows) == 3
    assert rows[1][0] == "1" and rows[2][0] == "2"


def test_verify_m3_refuses_gated_but_exits_zero(tmp_path):
    assert run(["verify", "--M", "3", "--out", tmp_path]) == 0
    d = read_json(tmp_path / "verify_M3.json")
    run_lemmas = {r["lemma"] for r in d["reports"]}
    assert "band_average_outside_window" in run_lemmas
    assert "parallel_energy_window" not in run_lemmas
    assert len(d["refused"]) == 6
    sums = read_json(tmp_path / "sum_checks.json")
    assert sums["pass"] is True


def test_verify_m3_informational_runs_everything(tmp_path):
    assert run(
        ["verify", "--M", "3", "--informational", "--sums-max", "8", "--out", tmp_path]
    ) == 0
    d = read_json(tmp_path / "verify_M3.json")
    assert len(d["reports"]) == 9
    assert d["refused"] == []


def test_verify_m5_all_pass(tmp_path):
    assert run(["verify", "--M", "5", "--sums-max", "16", "--out", tmp_path]) == 0
    d = read_json(tmp_path / "verify_M5.json")
    assert len(d["reports"]) == 9
    assert all(r["pass"] for r in d["reports"])


def test_verify_seed_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(["verify", "--M", "5", "--seed", "7", "--sums-max", "4", "--out", a])
    run(["verify", "--M", "5", "--seed", "7", "--sums-max", "4", "--out", b])
    assert (a / "verify_M5.json").read_bytes() == (b / "verify_M5.json").read_bytes()
    run(["verify", "--M", "5", "--seed", "8", "--sums-max", "4", "--out", b])
    assert (a / "verify_M5.json").read_bytes() != (b / "verify_M5.json").read_bytes()


def test_workers_do_not_change_output(tmp_path, monkeypatch):
    a, b = tmp_path / "a", tmp_path / "b"
    monkeypatch.setenv("WELLCOND_WORKERS", "1")
    run(["cond", "--M", "1..4", "--out", a])
    monkeypatch.setenv("WELLCOND_WORKERS", "3")
    run(["cond", "--M", "1..4", "--out", b])
    for m in range(1, 5):
        fa = (a / f"cond_M{m}.json").read_bytes()
        fb = (b / f"cond_M{m}.json").read_bytes()
        assert fa == fb, m


def test_sweep_rows_and_bounds(tmp_path, capsys):
    assert run(["sweep", "--M", "1..3", "--out", tmp_path]) == 0
    rows = read_rows(tmp_path / "sweep.csv")
    assert rows[0][:5] == [
        "M",
        "N",
        "mu_max",
        "mu_ratio_sqrt_np1",
        "energy_residual",
    ]
    assert len(rows) == 4
    for row in rows[1:]:
        n = int(row[1])
        assert n == 4 * int(row[0]) ** 2
        assert float(row[2]) <= min(n, 9.5 * (n + 1) ** 0.5)
        assert float(row[2]) >= 0.454 * n**0.5
    err = capsys.readouterr().err
    assert err.count("mu_max=") == 3  # per-M progress on stderr


def test_sweep_empty_range_header_only(tmp_path):
    assert run(["sweep", "--M", "5..4", "--out", tmp_path]) == 0
    rows = read_rows(tmp_path / "sweep.csv")
    assert len(rows) == 1


def test_sweep_runtime_columns_excluded_from_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(["sweep", "--M", "1..2", "--out", a])
    run(["sweep", "--M", "1..2", "--out", b])
    strip = lambda p: [row[:5] for row in read_rows(p)]
    assert strip(a / "sweep.csv") == strip(b / "sweep.csv")


def test_phases_file_applies_to_sphere_route(tmp_path):
    phases = tmp_path / "ph.json"
    phases.write_text(json.dumps({"1": [0.7853981633974483]}))
    assert run(
        ["generate", "--M", "1", "--phases", phases, "--out", tmp_path]
    ) == 0
    d = read_json(tmp_path / "points_M1.json")
    x0 = float(d["points"]["points"][0][0])
    assert abs(x0 - 0.7071067811865476) < 1e-12
    assert d["config"]["phases_file"] == "ph.json"


def test_phases_wrong_length_rejected(tmp_path):
    phases = tmp_path / "ph.json"
    phases.write_text(json.dumps({"2": [0.1]}))
    with pytest.raises(SystemExit):
        run(["generate", "--M", "2", "--phases", phases, "--out", tmp_path])


def test_bad_arguments_exit_2():
    with pytest.raises(SystemExit) as exc:
        run(["cond", "--M", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["cond", "--M", "x..y"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["cond", "--M", "2", "--precision", "32"])
    assert exc.value.code == 2


def test_version_flag():
    with pytest.raises(SystemExit) as exc:
        run(["--version"])
    assert exc.value.code == 0
