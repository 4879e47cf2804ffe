from __future__ import annotations

import json

import pytest

from nearfar_cdma.cli import BOUNDS_CSV_HEADER, EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from nearfar_cdma.config import SEED_ENV_VAR, RunConfig, default_seed, load_config
from nearfar_cdma.core.entropy import bpsk_capacity
from nearfar_cdma.errors import DomainError
from nearfar_cdma.sweep.runner import CSV_HEADER


def _run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bounds_json(capsys):
    code, out, _ = _run(capsys, "bounds", "--beta", "2", "--ebn0-db", "10", "--pcf-db", "20")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["rho"] == pytest.approx(0.1)
    assert 0.0 <= data["lower"] <= data["upper_conjectured"] + 1e-6
    assert data["lower"] <= data["upper_tanaka"] + 1e-6
    assert data["exact"] is None
    assert data["theta2"] > data["omega2"]


def test_bounds_csv(capsys):
    code, out, _ = _run(capsys, "bounds", "--beta", "2", "--sigma", "0.5", "--rho", "0.1", "--format", "csv")
    assert code == EXIT_OK
    header, row, tail = out.split("\n")
    assert tuple(header.split(",")) == BOUNDS_CSV_HEADER
    assert tail == ""
    cells = row.split(",")
    assert cells[:3] == ["2.0", "0.5", "0.1"]
    assert cells[BOUNDS_CSV_HEADER.index("exact")] == ""


def test_bounds_underloaded_reports_exact(capsys):
    code, out, _ = _run(capsys, "bounds", "--beta", "0.5", "--sigma", "0.6", "--rho", "0.8")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["exact"] == pytest.approx(bpsk_capacity(1.0), abs=1e-12)
    assert data["lower"] == data["upper_conjectured"] == data["exact"]


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "--beta", "2", "--sigma", "0.5", "--ebn0-db", "3", "--rho", "0.1"],
        ["bounds", "--beta", "2", "--sigma", "0.5", "--rho", "0.1", "--pcf-db", "20"],
        ["bounds", "--beta", "2", "--sigma", "0.5"],
        ["figures", "--fig", "9", "--out", "x"],
        ["frobnicate"],
    ],
)
def test_flag_errors_exit_with_usage(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_invalid_values_exit_with_usage(capsys):
    code, _, err = _run(capsys, "bounds", "--beta", "2", "--sigma", "-1", "--rho", "0.1")
    assert code == EXIT_USAGE
    assert "sigma" in err
    code, _, _ = _run(capsys, "sweep", "--axis", "ebn0_db", "--start", "0", "--stop", "4", "--points", "1", "--beta", "2")
    assert code == EXIT_USAGE


def test_tanaka_single_solution(capsys):
    code, out, _ = _run(capsys, "tanaka", "--beta", "2", "--sigma", "1")
    assert code == EXIT_OK
    data = json.loads(out)
    assert len(data["solutions"]) == 1
    assert data["selection"] == "min_capacity"
    assert not data["tangency"]
    sol = data["solutions"][0]
    assert sol["lambda"] == pytest.approx(1.0 / (1.0 + 2.0 * (1.0 - sol["m"])), rel=1e-12)

    code, same, _ = _run(capsys, "tanaka", "--beta", "2", "--sigma", "1", "--rho", "0")
    assert code == EXIT_OK
    assert same == out


def test_tanaka_rejects_small_grid(capsys):
    code, _, err = _run(capsys, "tanaka", "--beta", "2", "--sigma", "1", "--grid", "10")
    assert code == EXIT_USAGE
    assert "grid" in err


def test_spectrum_small_is_deterministic(capsys):
    code, out, _ = _run(capsys, "spectrum", "--m", "2", "--n", "2", "--seed", "5", "--eigenvalues")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["max_trace_error"] < 1e-9
    assert sum(data["trials"][0]["eigenvalues"]) == pytest.approx(2.0, abs=1e-9)
    assert data["failures"] == []
    _, again, _ = _run(capsys, "spectrum", "--m", "2", "--n", "2", "--seed", "5", "--eigenvalues")
    assert again == out


def test_spectrum_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv(SEED_ENV_VAR, "11")
    _, out, _ = _run(capsys, "spectrum", "--m", "8", "--n", "16", "--trials", "2")
    assert json.loads(out)["seeds"] == [11, 12]
    _, explicit, _ = _run(capsys, "spectrum", "--m", "8", "--n", "16", "--trials", "2", "--seed", "11")
    assert explicit == out


def test_oracle_too_many_users_fails(capsys):
    code, _, err = _run(capsys, "oracle", "--m", "12", "--n", "24", "--sigma", "0.5", "--samples", "1000")
    assert code == EXIT_FAILURE
    assert "SizeError" in err


def test_oracle_orthogonal_matches_bpsk(capsys):
    code, out, _ = _run(
        capsys, "oracle", "--m", "8", "--n", "8", "--sigma", "0.7071", "--orthogonal",
        "--samples", "20000", "--seed", "3",
    )
    assert code == EXIT_OK
    data = json.loads(out)
    est = data["estimate"]
    assert est["bits_per_user"] == pytest.approx(
        bpsk_capacity(0.7071**2), abs=3.0 * est["std_error"] + 0.01
    )
    assert data["bounds"]["exact"] == data["reference_upper"]
    assert data["verdict"] in ("inside", "inside-with-slack")


def test_sweep_to_file(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code, out, _ = _run(
        capsys, "sweep", "--axis", "pcf_db", "--start", "10", "--stop", "30", "--points", "3",
        "--beta", "2", "--ebn0-db", "10", "--outputs", "lower,upper_conjectured", "--out", str(out_path),
    )
    assert code == EXIT_OK and out == ""
    lines = out_path.read_text().split("\n")
    assert tuple(lines[0].split(",")) == CSV_HEADER
    assert [line.split(",")[0] for line in lines[1:4]] == ["10.0", "20.0", "30.0"]


def test_figures_prints_manifest(tmp_path, capsys, monkeypatch):
    from nearfar_cdma.sweep import figures
    from nearfar_cdma.sweep.runner import SweepSpec

    def tiny(fig):
        spec = SweepSpec("ebn0_db", 0.0, 10.0, 2, fixed={"beta": 2.0, "pcf_db": 20.0}, outputs=("upper_conjectured",))
        return [figures.Curve("tiny", "tiny curve", spec)]

    monkeypatch.setattr(figures, "figure_curves", tiny)
    code, out, _ = _run(capsys, "figures", "--fig", "2", "--out", str(tmp_path))
    assert code == EXIT_OK
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert out.strip() == str(tmp_path / "manifest.json")
    assert manifest["curves"][0]["file"] == "tiny.csv"


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tanaka": {"grid": 128, "bogus": 1}}))
    code, _, err = _run(capsys, "--config", str(cfg), "tanaka", "--beta", "2", "--sigma", "1")
    assert code == EXIT_USAGE
    assert "bogus" in err


def test_config_file_is_applied(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tanaka": {"selection": "max_magnetization"}}))
    code, out, _ = _run(capsys, "--config", str(cfg), "tanaka", "--beta", "2", "--sigma", "1")
    assert code == EXIT_OK
    assert json.loads(out)["selection"] == "max_magnetization"


def test_load_config(tmp_path):
    assert load_config(None) == RunConfig()
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"optimizer": {"t_grid": 513}, "oracle": {"samples": 5000}}))
    cfg = load_config(path)
    assert cfg.optimizer.t_grid == 513 and cfg.oracle.samples == 5000
    assert cfg.tanaka == RunConfig().tanaka
    path.write_text("[1, 2]")
    with pytest.raises(DomainError):
        load_config(path)
    path.write_text(json.dumps({"plotting": {}}))
    with pytest.raises(DomainError):
        load_config(path)
    path.write_text(json.dumps({"tanaka": {"selection": "median"}}))
    with pytest.raises(DomainError):
        load_config(path)


def test_default_seed(monkeypatch):
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)
    assert default_seed() == 0
    monkeypatch.setenv(SEED_ENV_VAR, "42")
    assert default_seed() == 42
    monkeypatch.setenv(SEED_ENV_VAR, "forty-two")
    with pytest.raises(DomainError):
        default_seed()


def test_orthogonal_needs_power_of_two_chips(capsys):
    code, out, err = _run(capsys, "oracle", "--m", "6", "--n", "6", "--sigma", "0.7", "--orthogonal", "--samples", "1000")
    assert code == EXIT_USAGE
    assert out == ""
    assert "power of two" in err


@pytest.mark.parametrize("seed", [str(2**64), "-1"])
def test_out_of_range_seed_is_a_usage_error(seed, capsys):
    code, _, err = _run(capsys, "oracle", "--m", "2", "--n", "2", "--sigma", "0.7", "--samples", "1000", "--seed", seed)
    assert code == EXIT_USAGE
    assert "2**64" in err
    code, _, _ = _run(capsys, "spectrum", "--m", "4", "--n", "4", "--seed", str(2**64 - 1), "--trials", "2")
    assert code == EXIT_USAGE
