"""Physical domain types shared by every other module.

All lengths are in metres, stresses in pascals, densities in kg/m^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Thinnest wall the slicer can reliably deposit (one 0.4 mm extrusion line).
PRINTABLE_FLOOR = 0.4e-3


@dataclass(frozen=True)
class Material:
    young_modulus: float
    density: float
    yield_strength: float

    def __post_init__(self):
        if self.young_modulus <= 0:
            raise ValueError(f"young_modulus must be > 0, got {self.young_modulus}")
        if self.density <= 0:
            raise ValueError(f"density must be > 0, got {self.density}")
        # zero strength is allowed as a degenerate case (stores no energy)
        if self.yield_strength < 0:
            raise ValueError(f"yield_strength must be >= 0, got {self.yield_strength}")
        if self.yield_strength >= self.young_modulus:
            raise ValueError("yield_strength must be below young_modulus")


@dataclass(frozen=True)
class SpiralParams:
    """Archimedean spiral r = r0 + (phi / phi_max) * dr, phi in [0, phi_max]."""

    inner_radius: float
    radial_growth: float
    final_polar_angle: float
    width: float

    def __post_init__(self):
        for name in ("inner_radius", "radial_growth", "final_polar_angle", "width"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")

    @property
    def outer_radius(self) -> float:
        return self.inner_radius + self.radial_growth

    @property
    def pitch(self) -> float:
        """Radial growth per radian, dr/dphi."""
        return self.radial_growth / self.final_polar_angle

    @classmethod
    def from_radii(cls, inner_radius, outer_radius, final_polar_angle, width):
        return cls(inner_radius, outer_radius - inner_radius, final_polar_angle, width)


ONYX = Material(young_modulus=3.0e9, density=1200.0, yield_strength=41e6)
DEFAULT_SPIRAL = SpiralParams.from_radii(0.027, 0.0705, 3.5 * math.pi, 0.020)
DEFAULT_THICKNESS = 0.007


@dataclass(frozen=True, eq=False)
class ArcGrid:
    """Nodes along the arc coordinate, starting at 0."""

    nodes: np.ndarray

    MIN_NODES = 50

    def __post_init__(self):
        s = np.asarray(self.nodes, dtype=float)
        if s.ndim != 1 or s.size < self.MIN_NODES:
            raise ValueError(f"ArcGrid needs at least {self.MIN_NODES} nodes")
        if s[0] != 0.0:
            raise ValueError("ArcGrid must start at S=0")
        if not np.all(np.diff(s) > 0):
            raise ValueError("ArcGrid nodes must be strictly increasing")
        s.setflags(write=False)
        object.__setattr__(self, "nodes", s)

    @classmethod
    def uniform(cls, s_max: float, n: int) -> ArcGrid:
        s = np.linspace(0.0, s_max, n)
        s[-1] = s_max
        return cls(s)

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def s_max(self) -> float:
        return float(self.nodes[-1])

    def refined(self) -> ArcGrid:
        """Grid with every interval split in half."""
        s = self.nodes
        out = np.empty(2 * s.size - 1)
        out[::2] = s
        out[1::2] = 0.5 * (s[1:] + s[:-1])
        return ArcGrid(out)


@dataclass(frozen=True, eq=False)
class ThicknessProfile:
    """Thickness sampled on an ArcGrid, piecewise linear in between."""

    grid: ArcGrid
    values: np.ndarray
    t_min: float

    def __post_init__(self):
        t = np.array(self.values, dtype=float)
        if t.shape != self.grid.nodes.shape:
            raise ValueError("thickness values must match the grid")
        if not self.t_min > 0:
            raise ValueError("t_min must be > 0")
        if np.any(t < self.t_min):
            raise ValueError(f"thickness below t_min={self.t_min} at {int(np.sum(t < self.t_min))} nodes")
        t.setflags(write=False)
        object.__setattr__(self, "values", t)

    @classmethod
    def uniform(cls, grid: ArcGrid, thickness: float, t_min: float | None = None):
        return cls(grid, np.full(grid.n, thickness), thickness if t_min is None else t_min)

    def at(self, s):
        return np.interp(s, self.grid.nodes, self.values)

    def midpoints(self) -> np.ndarray:
        t = self.values
        return 0.5 * (t[1:] + t[:-1])

    def scaled(self, factor: float) -> ThicknessProfile:
        return ThicknessProfile(self.grid, np.maximum(self.t_min, factor * self.values), self.t_min)

    def n_clamped(self) -> int:
        return int(np.sum(self.values <= self.t_min))


@dataclass(frozen=True)
class LoadCase:
    """Twist imposed on the outer end of the spiral, in radians."""

    twist: float

    def check(self, spiral: SpiralParams):
        if not abs(self.twist) < spiral.final_polar_angle:
            raise ValueError(f"|twist| must be below phi_max={spiral.final_polar_angle:.4g} rad")


# -- cross sections ---------------------------------------------------------


@dataclass(frozen=True)
class SectionProperties:
    area: float
    second_moment: float
    half_depth: float


def hollow_area(width, thickness, flange_fraction, web_fraction):
    flange = flange_fraction * thickness
    core = thickness - 2.0 * flange
    return 2.0 * width * flange + web_fraction * width * core


def hollow_second_moment(width, thickness, flange_fraction, web_fraction):
    """Flanges via the parallel-axis theorem plus the centred web block."""
    flange = flange_fraction * thickness
    core = thickness - 2.0 * flange
    arm = 0.5 * (thickness - flange)
    flanges = 2.0 * (width * flange**3 / 12.0 + width * flange * arm**2)
    web = web_fraction * width * core**3 / 12.0
    return flanges + web


@dataclass(frozen=True)
class SolidRect:
    width: float
    thickness: float

    def __post_init__(self):
        if not (self.width > 0 and self.thickness > 0):
            raise ValueError("width and thickness must be > 0")

    def properties(self) -> SectionProperties:
        w, t = self.width, self.thickness
        return SectionProperties(w * t, w * t**3 / 12.0, t / 2.0)


@dataclass(frozen=True)
class HollowBox:
    """Two solid flanges of depth flange_fraction*t at the outer fibres,
    joined by interior webs of total width web_fraction*w."""

    width: float
    thickness: float
    flange_fraction: float
    web_fraction: float

    def __post_init__(self):
        if not (self.width > 0 and self.thickness > 0):
            raise ValueError("width and thickness must be > 0")
        if not 0 < self.flange_fraction <= 0.5:
            raise ValueError("flange_fraction must be in (0, 0.5]")
        if not 0 < self.web_fraction <= 1:
            raise ValueError("web_fraction must be in (0, 1]")

    def properties(self) -> SectionProperties:
        args = (self.width, self.thickness, self.flange_fraction, self.web_fraction)
        if self.flange_fraction == 0.5 or self.web_fraction == 1.0:
            return SolidRect(self.width, self.thickness).properties()
        return SectionProperties(hollow_area(*args), hollow_second_moment(*args), self.thickness / 2.0)


CrossSection = SolidRect | HollowBox


@dataclass(frozen=True)
class Infill:
    """Hollow-box fractions applied along a whole thickness profile.

    The defaults describe a solid rectangle.
    """

    flange_fraction: float = 0.5
    web_fraction: float = 1.0

    def __post_init__(self):
        HollowBox(1.0, 1.0, self.flange_fraction, self.web_fraction)

    @property
    def is_solid(self) -> bool:
        return self.flange_fraction == 0.5 or self.web_fraction == 1.0

    def section(self, width: float, thickness: float) -> CrossSection:
        if self.is_solid:
            return SolidRect(width, thickness)
        return HollowBox(width, thickness, self.flange_fraction, self.web_fraction)

    def area(self, width, thickness):
        if self.is_solid:
            return width * np.asarray(thickness)
        return hollow_area(width, np.asarray(thickness), self.flange_fraction, self.web_fraction)

    def second_moment(self, width, thickness):
        if self.is_solid:
            return width * np.asarray(thickness) ** 3 / 12.0
        return hollow_second_moment(width, np.asarray(thickness), self.flange_fraction, self.web_fraction)


SOLID = Infill()


def section_properties(cs: CrossSection) -> SectionProperties:
    return cs.properties()


# -- energy-density bounds --------------------------------------------------


def max_bending_energy_density(mat: Material) -> float:
    """Best dU/dm of a solid rectangle in pure bending, sigma^2 / (6 E rho)."""
    return mat.yield_strength**2 / (6.0 * mat.young_modulus * mat.density)


def homogeneous_yield_limit(mat: Material) -> float:
    """dU/dm of material uniformly stressed to yield, sigma^2 / (2 E rho)."""
    return mat.yield_strength**2 / (2.0 * mat.young_modulus * mat.density)


def section_energy_density_at_yield(cs: CrossSection, mat: Material) -> float:
    """dU/dm of a section bent until its outer fibre reaches yield."""
    p = cs.properties()
    return mat.yield_strength**2 * p.second_moment / (
        2.0 * mat.young_modulus * mat.density * p.area * p.half_depth**2
    )
