"""
Configuration for Moment Bounds
Solver settings, relaxation options and the CLI run configuration
"""

import logging
import os
from pathlib import Path
from typing import Literal, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

logger = logging.getLogger(__name__)

ENV_PREFIX = "MOMENT_BOUNDS_"
MAX_DEGREE = 12


class SolverSettings(BaseModel):
    """Termination settings handed to the conic backend"""

    model_config = ConfigDict(frozen=True)

    solver: str = "auto"
    gap_tol: float = Field(default=1e-8, gt=0)
    feas_tol: float = Field(default=1e-8, gt=0)
    max_iter: int = Field(default=200, ge=1)
    verbose: bool = False

    def loosened(self, factor: float = 10.0) -> "SolverSettings":
        """Copy with tolerances multiplied by `factor` and a doubled iteration limit"""
        return self.model_copy(
            update={
                "gap_tol": self.gap_tol * factor,
                "feas_tol": self.feas_tol * factor,
                "max_iter": self.max_iter * 2,
            }
        )

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None, **overrides) -> "SolverSettings":
        """
        Build settings from MOMENT_BOUNDS_* environment variables

        Args:
            environ: Mapping to read instead of os.environ
            **overrides: Explicit values (e.g. from CLI flags); None entries are ignored

        Returns:
            Validated SolverSettings
        """
        environ = os.environ if environ is None else environ
        values = {}
        for key in ("solver", "gap_tol", "feas_tol", "max_iter"):
            raw = environ.get(ENV_PREFIX + key.upper())
            if raw:
                values[key] = raw
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class RelaxationOptions(BaseModel):
    """Knobs of the relaxation assembly"""

    model_config = ConfigDict(frozen=True)

    basis: Literal["monomial", "chebyshev"] = "monomial"
    stokes_dedup: bool = True
    stokes_gate: Literal["moment", "test_function"] = "moment"
    prune_tol: float = Field(default=1e-14, ge=0)
    complement_cap: int = Field(default=256, ge=1)


def parse_degree_range(text: str) -> Tuple[int, int]:
    """'4..10' -> (4, 10); '5' -> (5, 5)"""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise ValueError(f"invalid degree range {text!r}; expected 'lo..hi' or a single integer") from None


def default_workers(environ: Optional[Mapping[str, str]] = None) -> int:
    environ = os.environ if environ is None else environ
    raw = environ.get(ENV_PREFIX + "WORKERS")
    return int(raw) if raw else 1


class RunConfig(BaseModel):
    """Everything one CLI invocation needs"""

    problem: Path
    d_min: int = Field(default=2, ge=1)
    d_max: int = Field(default=6, ge=1)
    stokes: bool = False
    compare_stokes: bool = False
    sides: Literal["upper", "lower", "both"] = "both"
    bonferroni_depth: Optional[int] = Field(default=None, ge=1)
    mc_samples: Optional[int] = Field(default=None, ge=100)
    seed: int = 0
    shards: int = Field(default=1, ge=1)
    export_sdpa: Optional[Path] = None
    no_solve: bool = False
    csv_path: Optional[Path] = None
    json_path: Optional[Path] = None
    report_path: Optional[Path] = None
    workers: int = Field(default=1, ge=1)
    moment_order: int = Field(default=2, ge=0)
    allow_high_degree: bool = False
    solver: SolverSettings = Field(default_factory=SolverSettings)
    relaxation: RelaxationOptions = Field(default_factory=RelaxationOptions)

    @model_validator(mode="after")
    def check_flags(self):
        if self.d_min > self.d_max:
            raise ValueError(f"degree range is empty: {self.d_min}..{self.d_max}")
        if self.d_max > MAX_DEGREE:
            if not self.allow_high_degree:
                raise ValueError(
                    f"degree {self.d_max} exceeds the cap of {MAX_DEGREE}; pass --allow-high-degree to override"
                )
            logger.warning("Degree %d exceeds the default cap of %d; expect large SDPs", self.d_max, MAX_DEGREE)
        if self.no_solve and self.export_sdpa is None:
            raise ValueError("--no-solve only makes sense together with --export-sdpa")
        if self.compare_stokes and self.stokes:
            raise ValueError("--stokes and --compare-stokes are mutually exclusive")
        if 2 * self.d_min < self.moment_order:
            raise ValueError(f"moment order {self.moment_order} exceeds 2*d_min = {2 * self.d_min}")
        return self

    @property
    def stokes_modes(self) -> Tuple[bool, ...]:
        if self.compare_stokes:
            return (False, True)
        return (self.stokes,)

    @property
    def side_list(self) -> Tuple[str, ...]:
        return ("upper", "lower") if self.sides == "both" else (self.sides,)
