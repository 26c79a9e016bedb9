import json
import shutil

import pytest

try:
    from .cli import (EXIT_ARTIFACTS, EXIT_CERTIFICATE_FAIL, EXIT_CONFIG, EXIT_NO_CONVERGENCE, EXIT_OK,
                      EXIT_SEARCH_SPACE, main)
    from .errors import AllZeroAlpha, AlphaOutOfBounds, BallEscape
    from .pipeline import GapTilePipeline
    from .reports import read_alpha_csv, read_json, strip_volatile, write_alpha_csv
    from .run_config import OUTPUT_DIR_ENV
except ImportError:
    from cli import (EXIT_ARTIFACTS, EXIT_CERTIFICATE_FAIL, EXIT_CONFIG, EXIT_NO_CONVERGENCE, EXIT_OK,
                     EXIT_SEARCH_SPACE, main)
    from errors import AllZeroAlpha, AlphaOutOfBounds, BallEscape
    from pipeline import GapTilePipeline
    from reports import read_alpha_csv, read_json, strip_volatile, write_alpha_csv
    from run_config import OUTPUT_DIR_ENV


@pytest.fixture(scope="module")
def solved_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    code = main(["solve", "--out", str(out)])
    return code, out


@pytest.fixture
def artifacts(solved_run, tmp_path):
    """A private copy of the solved run, so verifications don't touch the shared report."""
    target = tmp_path / "artifacts"
    shutil.copytree(solved_run[1], target)
    return target


@pytest.fixture
def domino(tmp_path):
    path = tmp_path / "domino.txt"
    path.write_text("# two adjacent cells\nN=6 w=1\n0:1 1:1\n")
    return path


def _config(tmp_path, **values):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(values))
    return str(path)


# --- solve ---

def test_solve_with_defaults(solved_run):
    code, out = solved_run
    assert code == EXIT_OK
    for name in ("alpha.csv", "lambda.csv", "report.json"):
        assert (out / name).exists()
    report = read_json(out / "report.json")
    assert report["format_version"] == "1"
    assert set(report["certificates"].values()) == {"PASS"}
    assert report["gap"]["residual"] <= 1e-6
    assert report["tiling"]["sup_residual"] <= 1e-3
    assert report["gap_test"]["residual"] <= 1e-5
    assert report["iteration"]["iterations"] <= 30
    assert 0 < report["alpha"]["max_abs"] < 0.01
    lines = (out / "lambda.csv").read_text().splitlines()
    assert lines[0] == "n,lambda"
    assert len(lines) == 1 + 2 * 2048 + 1


def test_invalid_config_exits_2(tmp_path, capsys):
    code = main(["solve", "--config", _config(tmp_path, eps=0.2), "--out", str(tmp_path / "out")])
    assert code == EXIT_CONFIG
    assert "2*pi*eps < 1" in capsys.readouterr().out
    assert not (tmp_path / "out" / "alpha.csv").exists()


def test_unreadable_config_exits_4(tmp_path):
    assert main(["solve", "--config", str(tmp_path / "missing.json")]) == EXIT_ARTIFACTS


def test_single_iteration_exits_3(tmp_path):
    code = main(["solve", "--config", _config(tmp_path, max_iter=1), "--out", str(tmp_path / "out")])
    assert code == EXIT_NO_CONVERGENCE


@pytest.mark.parametrize("error", [BallEscape, AllZeroAlpha, AlphaOutOfBounds])
def test_solver_failures_exit_3(error, tmp_path, monkeypatch, capsys):
    def fail(self):
        raise error("solver gave up")

    monkeypatch.setattr(GapTilePipeline, "solve", fail)
    assert main(["solve", "--out", str(tmp_path)]) == EXIT_NO_CONVERGENCE
    assert "solver gave up" in capsys.readouterr().out


def test_same_config_gives_same_artifacts(solved_run, tmp_path, monkeypatch):
    _, first = solved_run
    second = tmp_path / "again"
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(second))
    assert main(["solve"]) == EXIT_OK
    assert (second / "alpha.csv").read_bytes() == (first / "alpha.csv").read_bytes()
    assert strip_volatile(read_json(second / "report.json")) == strip_volatile(read_json(first / "report.json"))


# --- verify ---

def test_verify_gap_matches_solve(artifacts):
    assert main(["verify", "gap", "--artifacts", str(artifacts)]) == EXIT_OK
    report = read_json(artifacts / "report.json")
    verified = report["verifications"]["gap"]
    assert verified["verdict"] == "PASS"
    assert abs(verified["residual"] - report["gap"]["residual"]) <= 1e-14
    assert verified["timestamp"]


def test_verify_tiling_matches_solve(artifacts):
    assert main(["verify", "tiling", "--artifacts", str(artifacts)]) == EXIT_OK
    report = read_json(artifacts / "report.json")
    verified = report["verifications"]["tiling"]
    assert verified["verdict"] == "PASS"
    assert abs(verified["residual"] - report["tiling"]["sup_residual"]) <= 1e-14
    assert abs(verified["gap_test"]["residual"] - report["gap_test"]["residual"]) <= 1e-14


def test_verify_tiling_fails_on_tampered_alpha(artifacts):
    path = artifacts / "alpha.csv"
    write_alpha_csv(path, read_alpha_csv(path).with_value(0, 0.4))
    assert main(["verify", "tiling", "--artifacts", str(artifacts)]) == EXIT_CERTIFICATE_FAIL
    assert read_json(artifacts / "report.json")["verifications"]["tiling"]["verdict"] == "FAIL"


def test_verify_flc_prints_alphabet_sizes(artifacts, capsys):
    assert main(["verify", "flc", "--artifacts", str(artifacts)]) == EXIT_OK
    lines = [line for line in capsys.readouterr().out.splitlines() if line.startswith("window ")]
    assert [line.split(":")[0] for line in lines] == ["window 64", "window 128", "window 256"]
    assert all(line.endswith("distinct gaps") for line in lines)


def test_verify_certificate_prints_claim(artifacts, capsys):
    assert main(["verify", "certificate", "--artifacts", str(artifacts)]) == EXIT_OK
    assert "is not a finite union of periodic sets" in capsys.readouterr().out


def test_verify_without_artifacts_exits_4(tmp_path):
    assert main(["verify", "gap", "--artifacts", str(tmp_path)]) == EXIT_ARTIFACTS


# --- ztile ---

def test_ztile_search(domino, capsys):
    assert main(["ztile", "search", str(domino)]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["0 2 4", "1 3 5"]


def test_ztile_search_in_parallel(domino, capsys):
    assert main(["ztile", "search", str(domino), "--workers", "2"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["0 2 4", "1 3 5"]


@pytest.mark.parametrize("flags,expected", [
    (["--set", "0 2 4"], "true"),
    (["--set", "0,1"], "false"),
    (["--set", "0", "--period", "2"], "true"),
    (["--set", "0", "--period", "3"], "false"),
])
def test_ztile_check(domino, capsys, flags, expected):
    assert main(["ztile", "check", str(domino)] + flags) == EXIT_OK
    assert capsys.readouterr().out.strip() == expected


def test_ztile_period(domino, capsys):
    assert main(["ztile", "period", str(domino), "--set", "1 3 5"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "2"
    assert main(["ztile", "period", str(domino)]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["0 2 4\t2", "1 3 5\t2"]


def test_ztile_bad_input(tmp_path):
    broken = tmp_path / "broken.txt"
    broken.write_text("N=6\n0:1 1:1\n")
    assert main(["ztile", "search", str(broken)]) == EXIT_ARTIFACTS
    assert main(["ztile", "search", str(tmp_path / "missing.txt")]) == EXIT_ARTIFACTS
    big = tmp_path / "big.txt"
    big.write_text("N=30 w=1\n0:1 1:1\n")
    assert main(["ztile", "search", str(big)]) == EXIT_SEARCH_SPACE


# --- export ---

def test_export_alpha_is_byte_identical(solved_run, tmp_path):
    _, out = solved_run
    target = tmp_path / "alpha_copy.csv"
    assert main(["export", "alpha", "--report", str(out / "report.json"), "--out", str(target)]) == EXIT_OK
    assert target.read_bytes() == (out / "alpha.csv").read_bytes()


def test_export_residual_curve(solved_run, tmp_path):
    _, out = solved_run
    target = tmp_path / "curve.csv"
    assert main(["export", "residual-curve", "--report", str(out / "report.json"), "--out", str(target)]) == EXIT_OK
    lines = target.read_text().splitlines()
    assert lines[0] == "x,residual"
    assert len(lines) == 1 + 4001
    assert max(float(line.split(",")[1]) for line in lines[1:]) <= 1e-3


def test_export_spectrum_of_periodic_set(tmp_path):
    target = tmp_path / "spectrum.csv"
    assert main(["export", "spectrum", "--period", "2", "--set", "0", "--out", str(target)]) == EXIT_OK
    rows = [line.split(",") for line in target.read_text().splitlines()[1:]]
    assert len(rows) == 512
    assert float(dict(rows)["0.0"]) == pytest.approx(128)


def test_export_spectrum_of_instance(domino, tmp_path):
    target = tmp_path / "spectrum.csv"
    assert main(["export", "spectrum", "--instance", str(domino), "--N", "64", "--nfreq", "128",
                 "--out", str(target)]) == EXIT_OK
    assert len(target.read_text().splitlines()) == 129


def test_export_needs_report(tmp_path):
    assert main(["export", "residual-curve", "--out", str(tmp_path / "x.csv")]) == EXIT_ARTIFACTS
    assert main(["export", "alpha", "--report", str(tmp_path / "report.json")]) == EXIT_ARTIFACTS
