"""Model parameters, nondimensionalization and run configuration files.

The configuration format is a small INI dialect::

    [model]
    chi0 = 3.2
    [grid]
    grid_n = 128
    dt_factor = 1e-3
    [run]
    t_end = 9.8039
    snapshot_times = 0.9804, 9.8039
    scenario = T1
    [output]
    output_dir = out
    cross_section_axis = x
    cross_section_offset = 0.5

Every key is optional. Comments start with ``#`` or ``;``.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError, ParameterError

SCENARIOS = ("T1", "T2", "T3", "custom")

# Coefficient of the Laplacian in the chemical equation; the stiffest
# diffusivity in the nondimensional system.
STIFFEST_DIFFUSIVITY = 0.5
COURANT_LIMIT = 0.25


@dataclass(frozen=True)
class DimensionalParameters:
    """Raw dimensional inputs.

    Units: diffusivities length^2/time, ``lambda_dim`` and ``beta_dim``
    1/(concentration^2 time), ``delta_dim`` chemical per cell per time,
    ``alpha_dim`` 1/time, ``chi0_dim`` length^2/(time chemical).
    """

    Du_dim: float
    Dv_dim: float
    Dc_dim: float
    lambda_dim: float
    beta_dim: float
    delta_dim: float
    alpha_dim: float
    chi0_dim: float
    u0: float
    v0: float
    c0: float
    u_star_dim: float
    v_star_dim: float
    L: float = 1.0


@dataclass(frozen=True)
class Parameters:
    Du: float = 0.01
    Dv: float = 0.0
    lam: float = 60.0
    beta: float = 8.0
    delta: float = 10.0
    chi0: float = 3.2
    u_star: float = 0.2
    v_star: float = 0.5
    A: float = 3.0
    omega: float = 1000.0

    def replace(self, **changes) -> "Parameters":
        return dataclasses.replace(self, **changes)


TABLE1 = Parameters()


def nondimensionalize(d: DimensionalParameters) -> Parameters:
    for f in dataclasses.fields(d):
        value = getattr(d, f.name)
        if not value > 0:
            raise ParameterError(f"{f.name} must be positive, got {value!r}")
    if not d.u_star_dim < d.u0:
        raise ParameterError("u_star_dim must be below u0")
    if not d.v_star_dim < d.v0:
        raise ParameterError("v_star_dim must be below v0")
    return Parameters(
        Du=d.Du_dim / (2.0 * d.Dc_dim),
        Dv=d.Dv_dim / (2.0 * d.Dc_dim),
        lam=d.lambda_dim * d.u0**2 / d.alpha_dim,
        beta=d.beta_dim * d.v0**2 / d.alpha_dim,
        delta=d.delta_dim * d.v0 / (d.c0 * d.alpha_dim),
        chi0=d.chi0_dim * d.c0 / (2.0 * d.Dc_dim),
        u_star=d.u_star_dim / d.u0,
        v_star=d.v_star_dim / d.v0,
    )


def plateau_condition_holds(A: float, omega: float, v_star: float) -> bool:
    """True iff ``1 < A/v_star < exp(omega/pi)``."""
    ratio = A / v_star
    return ratio > 1.0 and math.log(ratio) < omega / math.pi


def validate(p: Parameters) -> list[str]:
    """List every violated invariant of ``p`` (empty when valid)."""
    problems = []
    for name in ("Du", "lam", "beta", "delta", "chi0", "A", "omega"):
        value = getattr(p, name)
        if not value > 0:
            problems.append(f"{name} must be positive (got {value!r})")
    if not p.Dv >= 0:
        problems.append(f"Dv must be non-negative (got {p.Dv!r})")
    for name in ("u_star", "v_star"):
        value = getattr(p, name)
        if not 0 < value < 1:
            problems.append(f"{name} not in (0,1) (got {value!r})")
    return problems


@dataclass(frozen=True)
class RunConfig:
    params: Parameters = TABLE1
    grid_n: int = 128
    dt_factor: float = 1e-3
    t_end: float = 9.8039
    snapshot_times: tuple = ()
    scenario: str = "T1"
    output_dir: str = "out"
    cross_section_axis: str = "x"
    cross_section_offset: float = 0.5

    @property
    def dx(self) -> float:
        return 1.0 / (self.grid_n - 1)

    @property
    def dt(self) -> float:
        return self.dt_factor * self.dx

    @property
    def courant(self) -> float:
        """Courant number dt/dx^2."""
        return self.dt / self.dx**2

    def problems(self) -> list[str]:
        out = validate(self.params)
        if self.grid_n < 16:
            out.append(f"grid_n must be >= 16 (got {self.grid_n})")
            return out
        if not self.dt_factor > 0:
            out.append("dt_factor must be positive")
        elif STIFFEST_DIFFUSIVITY * self.courant > COURANT_LIMIT:
            out.append(
                f"Courant guard violated: D*dt/dx^2 = "
                f"{STIFFEST_DIFFUSIVITY * self.courant:.4g} > {COURANT_LIMIT}"
            )
        if not self.t_end >= 0:
            out.append("t_end must be non-negative")
        for t in self.snapshot_times:
            if not 0 <= t <= self.t_end:
                out.append(f"snapshot time {t} outside [0, t_end]")
        if self.scenario not in SCENARIOS:
            out.append(f"unknown scenario {self.scenario!r}")
        if self.cross_section_axis not in ("x", "y"):
            out.append("cross_section_axis must be 'x' or 'y'")
        return out

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


def _float_tuple(text):
    text = text.strip()
    if not text:
        return ()
    return tuple(float(tok) for tok in text.replace(",", " ").split())


_MODEL_KEYS = {f.name: float for f in dataclasses.fields(Parameters)}
_MODEL_KEYS["lambda"] = float  # friendlier alias for ``lam``
_KEYS = {
    "model": _MODEL_KEYS,
    "grid": {"grid_n": int, "dt_factor": float},
    "run": {"t_end": float, "snapshot_times": _float_tuple, "scenario": str},
    "output": {
        "output_dir": str,
        "cross_section_axis": str,
        "cross_section_offset": float,
    },
}


def parse_config(text: str) -> RunConfig:
    """Parse the INI-style run configuration.

    Raises ``ConfigError`` carrying the offending line number for unknown
    sections or keys and for malformed values, and without a line number
    when the assembled configuration fails validation (e.g. the Courant
    guard).
    """
    section: Optional[str] = None
    model: dict = {}
    rest: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {raw.strip()!r}", lineno)
            section = line[1:-1].strip().lower()
            if section not in _KEYS:
                raise ConfigError(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        if section is None:
            raise ConfigError("key outside of any section", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        converter = _KEYS[section].get(key)
        if converter is None:
            raise ConfigError(f"unknown key {key!r} in [{section}]", lineno)
        try:
            converted = converter(value)
        except ValueError:
            raise ConfigError(f"bad value for {key}: {value!r}", lineno) from None
        if section == "model":
            model["lam" if key == "lambda" else key] = converted
        else:
            rest[key] = converted
    if "scenario" in rest:
        s = rest["scenario"]
        rest["scenario"] = "custom" if s.lower() == "custom" else s.upper()
    cfg = RunConfig(params=Parameters(**model), **rest)
    problems = cfg.problems()
    if problems:
        raise ConfigError("; ".join(problems))
    return cfg


def serialize_config(cfg: RunConfig) -> str:
    lines = ["[model]"]
    for f in dataclasses.fields(Parameters):
        lines.append(f"{f.name} = {getattr(cfg.params, f.name)!r}")
    lines += [
        "[grid]",
        f"grid_n = {cfg.grid_n}",
        f"dt_factor = {cfg.dt_factor!r}",
        "[run]",
        f"t_end = {cfg.t_end!r}",
        "snapshot_times = " + ", ".join(repr(float(t)) for t in cfg.snapshot_times),
        f"scenario = {cfg.scenario}",
        "[output]",
        f"output_dir = {cfg.output_dir}",
        f"cross_section_axis = {cfg.cross_section_axis}",
        f"cross_section_offset = {cfg.cross_section_offset!r}",
    ]
    return "\n".join(lines) + "\n"
