"""Run configuration in a plain ``key = value`` text format.

Blank lines and ``#`` comments are ignored. Every key is optional; missing
keys take the defaults below (the printed Onyx spring). Units are part of
the key name.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .core import PRINTABLE_FLOOR, Infill, Material, SpiralParams
from .elastica import SolverConfig
from .optimizer import OptimizerConfig


class ConfigError(ValueError):
    pass


# key -> (default, type); None default means "unset"
DEFAULTS: dict[str, tuple[object, type]] = {
    "young_modulus_gpa": (3.0, float),
    "density_kg_m3": (1200.0, float),
    "yield_strength_mpa": (41.0, float),
    "inner_radius_mm": (27.0, float),
    "outer_radius_mm": (70.5, float),
    "final_polar_angle_pi": (3.5, float),
    "width_mm": (20.0, float),
    "thickness_mm": (7.0, float),
    "min_thickness_mm": (1.0, float),
    "grid_n": (400, int),
    "newton_tol": (1e-10, float),
    "max_newton_iterations": (25, int),
    "continuation_step_deg": (5.0, float),
    "max_continuation_bisections": (8, int),
    "deflection_deg": (90.0, float),
    "sweep_points": (20, int),
    "c2": (0.5, float),
    "iterations": (10, int),
    "improvement_tol": (1e-3, float),
    "c1_tol": (5e-3, float),
    "hollow_flange_fraction": (None, float),
    "hollow_web_fraction": (None, float),
}

_SIGNED = ("deflection_deg", "max_continuation_bisections")
_POSITIVE = [k for k, (d, _) in DEFAULTS.items() if d is not None and k not in _SIGNED]


@dataclass(frozen=True)
class RunConfig:
    values: dict = field(default_factory=lambda: {k: d for k, (d, _) in DEFAULTS.items()})

    def __post_init__(self):
        validate(self.values)

    def __getitem__(self, key):
        return self.values[key]

    def replace(self, **changes) -> RunConfig:
        unknown = set(changes) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown key(s): {', '.join(sorted(unknown))}")
        return RunConfig({**self.values, **changes})

    @property
    def material(self) -> Material:
        v = self.values
        return Material(v["young_modulus_gpa"] * 1e9, v["density_kg_m3"], v["yield_strength_mpa"] * 1e6)

    @property
    def spiral(self) -> SpiralParams:
        v = self.values
        return SpiralParams.from_radii(
            v["inner_radius_mm"] * 1e-3,
            v["outer_radius_mm"] * 1e-3,
            v["final_polar_angle_pi"] * math.pi,
            v["width_mm"] * 1e-3,
        )

    @property
    def thickness(self) -> float:
        return self.values["thickness_mm"] * 1e-3

    @property
    def t_min(self) -> float:
        return self.values["min_thickness_mm"] * 1e-3

    @property
    def deflection(self) -> float:
        return math.radians(self.values["deflection_deg"])

    @property
    def solver(self) -> SolverConfig:
        v = self.values
        return SolverConfig(
            grid_n=v["grid_n"],
            newton_tol=v["newton_tol"],
            max_newton_iterations=v["max_newton_iterations"],
            continuation_step=math.radians(v["continuation_step_deg"]),
            max_bisections=v["max_continuation_bisections"],
        )

    @property
    def optimizer(self) -> OptimizerConfig:
        v = self.values
        return OptimizerConfig(
            c2=v["c2"],
            t_min=self.t_min,
            max_outer_iterations=v["iterations"],
            improvement_tol=v["improvement_tol"],
            c1_tol=v["c1_tol"],
        )

    @property
    def infill(self) -> Infill | None:
        ft, fw = self.values["hollow_flange_fraction"], self.values["hollow_web_fraction"]
        return None if ft is None else Infill(ft, fw)

    def to_text(self) -> str:
        lines = []
        for key in DEFAULTS:
            val = self.values[key]
            if val is not None:
                lines.append(f"{key} = {val!r}")
        return "\n".join(lines) + "\n"


def validate(values: dict) -> None:
    for key in _POSITIVE:
        if not values[key] > 0:
            raise ConfigError(f"{key} must be > 0 (got {values[key]})")
    v = values
    if v["max_continuation_bisections"] < 0:
        raise ConfigError("max_continuation_bisections must be >= 0")
    if v["yield_strength_mpa"] * 1e6 >= v["young_modulus_gpa"] * 1e9:
        raise ConfigError("yield_strength_mpa must be below young_modulus_gpa")
    if v["outer_radius_mm"] <= v["inner_radius_mm"]:
        raise ConfigError(f"outer_radius_mm must exceed inner_radius_mm ({v['inner_radius_mm']})")
    if v["min_thickness_mm"] * 1e-3 < PRINTABLE_FLOOR:
        raise ConfigError(f"min_thickness_mm must be >= {PRINTABLE_FLOOR * 1e3} (printable floor)")
    if v["thickness_mm"] < v["min_thickness_mm"]:
        raise ConfigError(
            f"thickness_mm ({v['thickness_mm']}) must be >= min_thickness_mm ({v['min_thickness_mm']})"
        )
    if v["grid_n"] < 50:
        raise ConfigError("grid_n must be >= 50")
    if v["sweep_points"] < 2:
        raise ConfigError("sweep_points must be >= 2")
    if not abs(v["deflection_deg"]) < 180.0 * v["final_polar_angle_pi"]:
        raise ConfigError("|deflection_deg| must be below the final polar angle")
    ft, fw = v["hollow_flange_fraction"], v["hollow_web_fraction"]
    if (ft is None) != (fw is None):
        raise ConfigError("hollow_flange_fraction and hollow_web_fraction must be given together")
    if ft is not None:
        if not 0 < ft <= 0.5:
            raise ConfigError(f"hollow_flange_fraction must be in (0, 0.5] (got {ft})")
        if not 0 < fw <= 1:
            raise ConfigError(f"hollow_web_fraction must be in (0, 1] (got {fw})")


def _convert(key: str, raw: str, lineno: int | None = None):
    kind = DEFAULTS[key][1]
    where = f"line {lineno}: " if lineno else ""
    try:
        if kind is int:
            as_float = float(raw)
            if as_float != int(as_float):
                raise ValueError
            return int(as_float)
        val = float(raw)
    except ValueError:
        raise ConfigError(f"{where}{key} expects {kind.__name__}, got {raw!r}") from None
    if not math.isfinite(val):
        raise ConfigError(f"{where}{key} must be finite")
    return val


def parse_config_text(text: str) -> RunConfig:
    values = {k: d for k, (d, _) in DEFAULTS.items()}
    seen = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = (p.strip() for p in line.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        values[key] = _convert(key, raw, lineno)
    return RunConfig(values)


def parse_config(path) -> RunConfig:
    return parse_config_text(Path(path).read_text())
