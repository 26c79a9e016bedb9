import json

import numpy as np
import pytest

try:
    from .circle_space import CoeffSeq
    from .errors import ArtifactError
    from .reports import (RunReport, alpha_summary, append_verification, csv_text, format_float, load_report,
                          read_alpha_csv, strip_volatile, write_alpha_csv, write_csv, write_report)
except ImportError:
    from circle_space import CoeffSeq
    from errors import ArtifactError
    from reports import (RunReport, alpha_summary, append_verification, csv_text, format_float, load_report,
                         read_alpha_csv, strip_volatile, write_alpha_csv, write_csv, write_report)


def test_floats_are_written_with_round_trip_repr():
    assert format_float(np.float64(0.1)) == "0.1"
    assert format_float(1e-300) == "1e-300"
    text = csv_text(("n", "value"), [(1, np.float64(1 / 3)), (2, 2.0)])
    assert text == "n,value\n1,0.3333333333333333\n2,2.0\n"


def test_alpha_csv_is_exact(tmp_path):
    values = np.random.default_rng(4).uniform(-0.01, 0.01, 9)
    alpha = CoeffSeq(4, values)
    path = tmp_path / "alpha.csv"
    write_alpha_csv(path, alpha)
    loaded = read_alpha_csv(path)
    assert loaded.N == 4
    assert np.array_equal(loaded.values, values)
    assert path.read_text().splitlines()[0] == "n,alpha"
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".tmp-")]


@pytest.mark.parametrize("text", [
    "",
    "k,alpha\n0,0.1\n",
    "n,alpha\n",
    "n,alpha\n0,x\n",
    "n,alpha\n-1,0.1\n1,0.1\n",
    "n,alpha\n-1,0.1\n0,0.1\n0,0.1\n1,0.1\n",
])
def test_malformed_alpha_csv(tmp_path, text):
    path = tmp_path / "alpha.csv"
    path.write_text(text)
    with pytest.raises(ArtifactError):
        read_alpha_csv(path)


def test_missing_artifacts(tmp_path):
    with pytest.raises(ArtifactError):
        read_alpha_csv(tmp_path / "alpha.csv")
    with pytest.raises(ArtifactError):
        load_report(tmp_path / "report.json")


def test_write_csv_creates_directories(tmp_path):
    path = tmp_path / "nested" / "curve.csv"
    write_csv(path, ("x", "residual"), [(0.5, 1e-4)])
    assert path.read_text() == "x,residual\n0.5,0.0001\n"


def test_report_round_trip_and_verifications(tmp_path):
    path = tmp_path / "report.json"
    report = RunReport(config={"a": 0.1}, gap={"verdict": "PASS", "residual": 1e-8},
                       certificates={"gap": "PASS"}, timings={"solve": 1.5},
                       artifacts={"report": str(path)})
    write_report(path, report)
    assert load_report(path) == report

    data = append_verification(path, "gap", {"verdict": "PASS", "residual": 1e-8})
    assert data["verifications"]["gap"]["timestamp"]
    on_disk = json.loads(path.read_text())
    assert on_disk["verifications"]["gap"]["residual"] == 1e-8
    assert load_report(path).verifications["gap"]["verdict"] == "PASS"


def test_invalid_report_rejected(tmp_path):
    path = tmp_path / "report.json"
    path.write_text(json.dumps({"config": {}, "surprise": 1}))
    with pytest.raises(ArtifactError):
        load_report(path)
    path.write_text("{")
    with pytest.raises(ArtifactError):
        load_report(path)


def test_strip_volatile_ignores_run_specific_fields():
    first = RunReport(config={"a": 0.1}, timings={"solve": 1.0}, artifacts={"alpha": "/a"}).model_dump(mode="json")
    second = RunReport(config={"a": 0.1}, timings={"solve": 2.0}, artifacts={"alpha": "/b"}).model_dump(mode="json")
    first["verifications"] = {"gap": {"verdict": "PASS", "timestamp": "t1"}}
    second["verifications"] = {"gap": {"verdict": "PASS", "timestamp": "t2"}}
    assert strip_volatile(first) == strip_volatile(second)
    second["verifications"]["gap"]["verdict"] = "FAIL"
    assert strip_volatile(first) != strip_volatile(second)


def test_alpha_summary():
    summary = alpha_summary(CoeffSeq.from_mapping({-1: 0.003, 2: -0.004}), 0.0)
    assert summary["N"] == 2
    assert summary["max_abs"] == 0.004
    assert summary["argmax"] == 2
    assert summary["l2_mass"] == pytest.approx(2.5e-5)
