import json
import os
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

try:
    from .circle_space import CircleGrid
    from .errors import ArtifactError
    from .kargaev import SolverParams
    from .tiling_line import FAMILIES, Kernel
except ImportError:
    from circle_space import CircleGrid
    from errors import ArtifactError
    from kargaev import SolverParams
    from tiling_line import FAMILIES, Kernel

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "GAPTILE_OUTPUT_DIR"

DEFAULT_CONFIG = {
    "schema_version": SCHEMA_VERSION,
    "solver": {
        "a": 0.1,
        "eps": 0.01,
        "c": 0.1,
        "amplitude": 0.004,
        "N": 512,
        "M": 8192,
        "fp_tol": 1e-12,
        "max_iter": 200
    },
    "kernels": {
        "tiling": {"family": "fejer", "b": 0.08, "radius": 1e4},
        "gap_test": {"family": "jackson", "b": 0.05, "radius": 1e3}
    },
    "verification": {
        "x_span": 100.0,
        "x_count": 4001,
        "gap_grid_pts": 2001,
        "window": 2048,
        "alphabet_windows": [64, 128, 256],
        "gap_tol": 1e-6,
        "tiling_tol": 1e-3,
        "gap_test_tol": 1e-5
    },
    "ztile_instance": None,
    "output_dir": "runs/default",
    "seed": 20240101
}


def _flatten(config: dict) -> dict:
    """Flatten the nested DEFAULT_CONFIG layout into RunConfig keys."""
    flat = {k: v for k, v in config.items() if k not in ("solver", "kernels", "verification")}
    flat.update(config.get("solver", {}))
    flat.update(config.get("verification", {}))
    for role, spec in config.get("kernels", {}).items():
        for key, value in spec.items():
            flat[f"{role}_{key}"] = value
    return flat


class RunConfig(BaseModel):
    """One flat, schema-versioned run configuration. Unknown keys are rejected."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    schema_version: int = SCHEMA_VERSION

    a: float = 0.1
    eps: float = 0.01
    c: float = 0.1
    amplitude: float = 0.004
    N: int = 512
    M: int = 8192
    fp_tol: float = 1e-12
    max_iter: int = 200

    tiling_family: str = "fejer"
    tiling_b: float = 0.08
    tiling_radius: float = 1e4
    gap_test_family: str = "jackson"
    gap_test_b: float = 0.05
    gap_test_radius: float = 1e3

    x_span: float = 100.0
    x_count: int = 4001
    gap_grid_pts: int = 2001
    window: int = 2048
    alphabet_windows: Tuple[int, ...] = (64, 128, 256)
    gap_tol: float = 1e-6
    tiling_tol: float = 1e-3
    gap_test_tol: float = 1e-5

    ztile_instance: Optional[str] = None
    output_dir: str = "runs/default"
    seed: int = 20240101

    @model_validator(mode="after")
    def check_invariants(self):
        if self.schema_version != SCHEMA_VERSION:
            raise ValueError(f"Unsupported schema_version {self.schema_version}, expected {SCHEMA_VERSION}")
        # raises ParamsInvalid naming the violated constraint
        params = self.solver_params()
        if not 0 < self.amplitude < self.eps / 2:
            raise ValueError(f"Violated constraint 0 < amplitude < eps/2 (amplitude = {self.amplitude}, eps = {self.eps})")
        for role in ("tiling", "gap_test"):
            family = getattr(self, f"{role}_family")
            b = getattr(self, f"{role}_b")
            if family not in FAMILIES:
                raise ValueError(f"Unknown {role} kernel family '{family}', expected one of {FAMILIES}")
            if not 0 < b < params.a:
                raise ValueError(f"Violated constraint 0 < b < a for the {role} kernel (b = {b}, a = {params.a})")
        if self.window < self.N:
            raise ValueError(f"Violated constraint window >= N (window = {self.window}, N = {self.N})")
        if max(self.alphabet_windows, default=0) > self.window:
            raise ValueError(f"Alphabet windows {self.alphabet_windows} exceed the enumeration window {self.window}")
        return self

    def solver_params(self) -> SolverParams:
        return SolverParams(a=self.a, eps=self.eps, c=self.c, N=self.N, grid=CircleGrid(self.M),
                            fp_tol=self.fp_tol, max_iter=self.max_iter)

    def tiling_kernel(self) -> Kernel:
        return Kernel(self.tiling_family, self.tiling_b)

    def gap_test_kernel(self) -> Kernel:
        return Kernel(self.gap_test_family, self.gap_test_b)

    def resolved_output_dir(self) -> str:
        return os.getenv(OUTPUT_DIR_ENV) or self.output_dir

    def echo(self) -> dict:
        return self.model_dump(mode="json")


def default_config(**overrides) -> RunConfig:
    return RunConfig(**{**_flatten(DEFAULT_CONFIG), **overrides})


def load_config(path) -> RunConfig:
    """Read a JSON config. Raises ArtifactError if unreadable or not JSON, ValidationError if invalid."""
    try:
        with open(path, "r") as f:
            text = f.read()
    except OSError as e:
        raise ArtifactError(f"Cannot read config {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ArtifactError(f"Config {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ArtifactError(f"Config {path} must be a JSON object")
    if any(key in data for key in ("solver", "kernels", "verification")):
        data = _flatten(data)
    return RunConfig(**data)


__all__ = ["DEFAULT_CONFIG", "RunConfig", "ValidationError", "default_config", "load_config", "OUTPUT_DIR_ENV"]
