"""Small-deflection cantilever with a tip load.

Closed forms here serve as analytic checks for the spiral machinery and as
the simplest illustration of thickness tailoring: a beam whose thickness
follows ``optimal_thickness`` stores the bending bound sigma^2/(6 E rho)
at every point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import Material, max_bending_energy_density


@dataclass(frozen=True)
class CantileverCase:
    tip_load: float
    length: float
    width: float
    material: Material
    thickness: float | Callable[[np.ndarray], np.ndarray]
    t_min: float = 1e-4

    def __post_init__(self):
        if not (self.tip_load > 0 and self.length > 0 and self.width > 0):
            raise ValueError("tip_load, length and width must be > 0")
        if not self.t_min > 0:
            raise ValueError("t_min must be > 0")

    def t(self, x):
        x = np.asarray(x, float)
        if callable(self.thickness):
            return np.asarray(self.thickness(x), float)
        return np.full_like(x, float(self.thickness))

    def _check(self, x):
        x = np.asarray(x, float)
        if np.any(x < 0) or np.any(x > self.length):
            raise ValueError(f"x outside [0, {self.length}]")
        return x


def moment(case: CantileverCase, x):
    x = case._check(x)
    return case.tip_load * (case.length - x)


def energy_density(case: CantileverCase, x):
    """Pointwise dU/dm = 6 F^2 (L-x)^2 / (E rho w^2 t^4)."""
    x = case._check(x)
    m = case.material
    return (
        6.0 * case.tip_load**2 * (case.length - x) ** 2
        / (m.young_modulus * m.density * case.width**2 * case.t(x) ** 4)
    )


def optimal_thickness(case: CantileverCase, x):
    """Thickness that puts the outer fibre exactly at yield, floored at t_min."""
    x = case._check(x)
    raw = np.sqrt(6.0 * case.tip_load * (case.length - x) / (case.width * case.material.yield_strength))
    return np.maximum(case.t_min, raw)


def optimal_case(case: CantileverCase) -> CantileverCase:
    return CantileverCase(
        case.tip_load, case.length, case.width, case.material,
        lambda x: optimal_thickness(case, x), case.t_min,
    )


def stress(case: CantileverCase, x):
    return 6.0 * np.abs(moment(case, x)) / (case.width * case.t(x) ** 2)


def total_energy(case: CantileverCase) -> float:
    """F^2 L^3 / (6 E I); uniform thickness only."""
    if callable(case.thickness):
        raise ValueError("closed-form energy needs a uniform thickness")
    inertia = case.width * case.thickness**3 / 12.0
    return case.tip_load**2 * case.length**3 / (6.0 * case.material.young_modulus * inertia)


def energy_by_quadrature(case: CantileverCase, n: int = 10_001) -> float:
    x = np.linspace(0.0, case.length, n)
    inertia = case.width * case.t(x) ** 3 / 12.0
    return float(np.trapezoid(0.5 * moment(case, x) ** 2 / (case.material.young_modulus * inertia), x))


def mass(case: CantileverCase, n: int = 10_001) -> float:
    x = np.linspace(0.0, case.length, n)
    return float(case.material.density * case.width * np.trapezoid(case.t(x), x))


def mass_energy_density(case: CantileverCase, n: int = 10_001) -> float:
    return energy_by_quadrature(case, n) / mass(case, n)


def uniform_at_yield(case: CantileverCase) -> CantileverCase:
    """Uniform beam under the same load whose root fibre just reaches yield."""
    t = float(optimal_thickness(case, 0.0))
    return CantileverCase(case.tip_load, case.length, case.width, case.material, t, case.t_min)


def profile_table(case: CantileverCase, n: int = 101) -> dict[str, np.ndarray]:
    """Columns for CSV export of the uniform and optimal designs."""
    x = np.linspace(0.0, case.length, n)
    opt = optimal_case(case)
    return {
        "x": x,
        "M": moment(case, x),
        "t_uniform": case.t(x),
        "dUdm_uniform": energy_density(case, x),
        "t_optimal": opt.t(x),
        "dUdm_optimal": energy_density(opt, x),
        "dUdm_bound": np.full_like(x, max_bending_energy_density(case.material)),
    }
