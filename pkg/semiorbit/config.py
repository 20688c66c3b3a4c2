"""Solver settings and command-line run configuration.

Values are layered: built-in defaults, then a TOML file, then command-line
flags. Library entry points only ever see a :class:`SolverSettings`.
"""
from __future__ import annotations

import logging
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = "semiorbit.toml"
METHODS = ("dos", "dos-squared", "wkb", "af")
FORMATS = ("text", "csv", "json")


@dataclass(frozen=True)
class SolverSettings:
    bracket: tuple[float, float] = (1e-8, 1e8)
    points_per_decade: int = 64
    root_rtol: float = 1e-14
    quad_tol: float = 1e-10
    max_outer_iterations: int = 200
    convexity_range: tuple[float, float] = (1e-3, 1e3)
    convexity_points: int = 64

    def __post_init__(self):
        lo, hi = self.bracket
        if not 0 < lo < hi:
            raise ValueError(f"bracket must satisfy 0 < lo < hi, got {self.bracket}")
        c_lo, c_hi = self.convexity_range
        if not 0 < c_lo < c_hi:
            raise ValueError(f"convexity_range must satisfy 0 < lo < hi, got {self.convexity_range}")
        if self.points_per_decade < 2:
            raise ValueError("points_per_decade must be at least 2")
        if self.convexity_points < 3:
            raise ValueError("convexity_points must be at least 3")
        if not 0 < self.quad_tol < 1:
            raise ValueError("quad_tol must lie in (0, 1)")
        # brentq refuses relative tolerances below 4 machine epsilons
        if self.root_rtol < 4 * sys.float_info.epsilon:
            object.__setattr__(self, "root_rtol", 4 * sys.float_info.epsilon)
        if self.max_outer_iterations < 1:
            raise ValueError("max_outer_iterations must be positive")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SolverSettings":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"Unknown solver settings: {sorted(unknown)}")
        values = dict(data)
        for key in ("bracket", "convexity_range"):
            if key in values:
                values[key] = tuple(float(v) for v in values[key])
        return cls(**values)

    def copy_with(self, **changes) -> "SolverSettings":
        return replace(self, **changes)


DEFAULT_SETTINGS = SolverSettings()


@dataclass
class RunConfig:
    """Everything one CLI invocation needs, after defaults, TOML and flags are merged."""

    subcommand: str
    T: str | None = None
    U: str | None = None
    V: str | None = None
    D: int = 3
    l: int = 0
    n: int = 0
    L: int = 0
    N: int = 0
    method: str = "dos"
    aux: str | None = None
    anyon_alpha: float | None = None
    parameters: dict[str, float] = field(default_factory=dict)
    a: float = 0.2
    b: float = 0.0
    qmax: int = 8
    output_format: str = "text"
    output: str | None = None
    dispatch: bool = True
    self_test: bool = False
    workers: int = 4
    settings: SolverSettings = DEFAULT_SETTINGS

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.output_format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {self.output_format!r}")
        if self.workers < 1:
            raise ValueError("workers must be positive")


def load_toml(path: str | Path | None) -> dict[str, Any]:
    """Read a configuration file; a missing default file is not an error."""
    if path is None:
        candidate = Path(DEFAULT_CONFIG_FILE)
        if not candidate.is_file():
            return {}
        path = candidate
    path = Path(path)
    with path.open("rb") as fh:
        data = tomllib.load(fh)
    logger.debug("Loaded configuration from %s", path)
    unknown = set(data) - {"solver", "output"}
    if unknown:
        raise ValueError(f"Unknown sections in {path}: {sorted(unknown)}")
    return data


def merge_settings(file_data: dict[str, Any], overrides: dict[str, Any]) -> SolverSettings:
    """defaults < ``[solver]`` table < non-None command-line overrides."""
    values: dict[str, Any] = dict(file_data.get("solver", {}))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return SolverSettings.from_dict(values)
