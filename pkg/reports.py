import csv
import io
import json
import logging
import os
import tempfile
from datetime import datetime, timezone
from typing import Any, Dict, Iterable, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

try:
    from .circle_space import CoeffSeq
    from .errors import ArtifactError
except ImportError:
    from circle_space import CoeffSeq
    from errors import ArtifactError

logger = logging.getLogger(__name__)

FORMAT_VERSION = "1"
ALPHA_FILE = "alpha.csv"
LAMBDA_FILE = "lambda.csv"
REPORT_FILE = "report.json"
# Fields that legitimately differ between two runs of the same config
VOLATILE_KEYS = ("timestamp", "timings", "artifacts")


class RunReport(BaseModel):
    """Machine-readable record of a solve run and of later verifications."""
    model_config = ConfigDict(extra="forbid")

    format_version: str = FORMAT_VERSION
    timestamp: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    config: Dict[str, Any]
    iteration: Dict[str, Any] = Field(default_factory=dict)
    alpha: Dict[str, Any] = Field(default_factory=dict)
    gap: Dict[str, Any] = Field(default_factory=dict)
    tiling: Dict[str, Any] = Field(default_factory=dict)
    gap_test: Dict[str, Any] = Field(default_factory=dict)
    companion: Dict[str, Any] = Field(default_factory=dict)
    ztile: Dict[str, Any] = Field(default_factory=dict)
    certificates: Dict[str, Any] = Field(default_factory=dict)
    timings: Dict[str, float] = Field(default_factory=dict)
    artifacts: Dict[str, str] = Field(default_factory=dict)
    verifications: Dict[str, Any] = Field(default_factory=dict)


def format_float(value) -> str:
    """Shortest decimal string that round-trips to the same double."""
    return repr(float(value))


def atomic_write_text(path, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buffer.getvalue()


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]):
    atomic_write_text(path, csv_text(header, rows))


def write_alpha_csv(path, alpha: CoeffSeq):
    write_csv(path, ("n", "alpha"), zip(alpha.indices.tolist(), (float(v) for v in alpha.values)))


def read_alpha_csv(path) -> CoeffSeq:
    try:
        with open(path, "r", newline="") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise ArtifactError(f"Cannot read {path}: {e}") from e
    if not rows or [h.strip() for h in rows[0]] != ["n", "alpha"]:
        raise ArtifactError(f"{path}: expected header 'n,alpha'")
    try:
        pairs = [(int(n), float(v)) for n, v in rows[1:]]
    except ValueError as e:
        raise ArtifactError(f"{path}: unparsable row: {e}") from e
    if not pairs:
        raise ArtifactError(f"{path}: no coefficients")
    N = max(abs(n) for n, _ in pairs)
    if sorted(n for n, _ in pairs) != list(range(-N, N + 1)):
        raise ArtifactError(f"{path}: indices must run over -N..N exactly once")
    return CoeffSeq.from_mapping(dict(pairs), N)


def write_json(path, data: Dict):
    atomic_write_text(path, json.dumps(data, indent=4) + "\n")


def read_json(path) -> Dict:
    try:
        with open(path, "r") as f:
            return json.load(f)
    except OSError as e:
        raise ArtifactError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ArtifactError(f"{path} is not valid JSON: {e}") from e


def write_report(path, report: RunReport):
    write_json(path, report.model_dump(mode="json"))


def load_report(path) -> RunReport:
    data = read_json(path)
    try:
        return RunReport.model_validate(data)
    except ValueError as e:
        raise ArtifactError(f"{path} is not a valid run report: {e}") from e


def append_verification(report_path, which: str, section: Dict) -> Dict:
    """Add (or replace) the `which` entry under `verifications` of an existing report."""
    data = read_json(report_path)
    section = dict(section)
    section["timestamp"] = datetime.now(timezone.utc).isoformat()
    data.setdefault("verifications", {})[which] = section
    write_json(report_path, data)
    logger.info(f"Appended '{which}' verification to {report_path}")
    return data


def strip_volatile(data: Dict) -> Dict:
    """Copy of a report without timestamps, timings and artifact paths."""
    stripped = {k: v for k, v in data.items() if k not in VOLATILE_KEYS}
    if "verifications" in stripped:
        stripped["verifications"] = {
            name: {k: v for k, v in section.items() if k != "timestamp"}
            for name, section in stripped["verifications"].items()
        }
    return stripped


def alpha_summary(alpha: CoeffSeq, asymmetry: float) -> Dict:
    return {
        "N": alpha.N,
        "max_abs": alpha.max_abs,
        "argmax": alpha.argmax,
        "l2_mass": alpha.mass,
        "asymmetry": asymmetry,
    }

