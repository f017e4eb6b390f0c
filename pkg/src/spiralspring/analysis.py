"""Energy, mass, stress and torque of a solved spiral."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SOLID, Infill, LoadCase, Material, ThicknessProfile
from .elastica import ElasticaSolution, SolverConfig, SolverError, SpiralBeam
from .geometry import SpiralKinematics


class TorqueSignError(SolverError):
    """Reaction torque opposes the imposed twist."""


def stress_field(sol: ElasticaSolution) -> np.ndarray:
    """Outer-fibre bending stress 6|M| / (w t^2)."""
    return 6.0 * np.abs(sol.M) / (sol.width * sol.profile.values**2)


def energy_density_field(sol: ElasticaSolution) -> np.ndarray:
    """Pointwise dU/dm = (M^2 / 2EI) / (rho w t) for a solid section."""
    t = sol.profile.values
    e, rho = sol.material.young_modulus, sol.material.density
    inertia = sol.width * t**3 / 12.0
    return 0.5 * sol.M**2 / (e * inertia) / (rho * sol.width * t)


def total_energy(sol: ElasticaSolution) -> float:
    t = sol.profile.values
    inertia = sol.width * t**3 / 12.0
    return float(np.trapezoid(0.5 * sol.M**2 / (sol.material.young_modulus * inertia), sol.s))


def spring_mass(profile: ThicknessProfile, mat: Material, width: float, infill: Infill = SOLID) -> float:
    area = infill.area(width, profile.values)
    return float(mat.density * np.trapezoid(area, profile.grid.nodes))


def torque(sol: ElasticaSolution) -> float:
    """Reaction torque about the spiral centre.

    The moment balance M + V x - H y is constant along the beam; its
    negative is the torque conjugate to the twist (dU/dtwist).
    """
    tau = -float(sol.conserved()[0])
    twist = sol.load.twist
    scale = max(abs(sol.m0), 1e-300)
    if tau * twist < -1e-9 * scale * abs(twist):
        raise TorqueSignError(f"torque {tau:.6g} N m opposes twist {twist:.6g} rad")
    return tau


def _fraction_above(s, sigma, level) -> float:
    """Length fraction where the piecewise-linear sigma(S) is >= level."""
    a, b = sigma[:-1], sigma[1:]
    ds = np.diff(s)
    hi, lo = np.maximum(a, b), np.minimum(a, b)
    full = lo >= level
    partial = (hi >= level) & ~full
    frac = np.zeros_like(ds)
    frac[full] = 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        frac[partial] = (hi[partial] - level) / (hi[partial] - lo[partial])
    return float(np.sum(frac * ds) / (s[-1] - s[0]))


@dataclass(frozen=True, eq=False)
class EnergyReport:
    twist: float
    total_energy: float
    mass: float
    s: np.ndarray
    dUdm: np.ndarray
    stress: np.ndarray
    torque: float
    yield_strength: float
    infill: Infill = SOLID

    @property
    def mass_energy_density(self) -> float:
        return self.total_energy / self.mass

    @property
    def max_stress(self) -> float:
        return float(np.max(self.stress))

    def fraction_at_yield(self, threshold: float = 0.9) -> float:
        return fraction_at_stress(self, threshold)


def fraction_at_stress(report: EnergyReport, threshold: float = 0.9) -> float:
    if not 0 < threshold <= 1:
        raise ValueError("threshold must be in (0, 1]")
    if report.yield_strength == 0:
        return 0.0
    return _fraction_above(report.s, report.stress, threshold * report.yield_strength)


def evaluate(sol: ElasticaSolution, infill: Infill = SOLID) -> EnergyReport:
    """Summarise a solution.

    With a hollow infill the deformed shape is kept from the solid solve and
    the energy is re-integrated with the hollow second moment at the same
    curvature change; outer-fibre stress is therefore unchanged.
    """
    mat, prof, w = sol.material, sol.profile, sol.width
    sigma = stress_field(sol)
    tau = torque(sol)
    if infill.is_solid:
        dudm = energy_density_field(sol)
        energy = total_energy(sol)
    else:
        t = prof.values
        dkappa = sol.M / (mat.young_modulus * w * t**3 / 12.0)
        line_energy = 0.5 * mat.young_modulus * infill.second_moment(w, t) * dkappa**2
        dudm = line_energy / (mat.density * infill.area(w, t))
        energy = float(np.trapezoid(line_energy, sol.s))
    return EnergyReport(
        twist=sol.load.twist,
        total_energy=energy,
        mass=spring_mass(prof, mat, w, infill),
        s=sol.s,
        dUdm=dudm,
        stress=sigma,
        torque=tau,
        yield_strength=mat.yield_strength,
        infill=infill,
    )


@dataclass(frozen=True, eq=False)
class TorqueCurve:
    twist: np.ndarray
    torque: np.ndarray
    energy: np.ndarray

    def work(self) -> float:
        """Integral of torque over the swept twist."""
        return float(np.trapezoid(self.torque, self.twist))

    @property
    def twist_deg(self) -> np.ndarray:
        return np.degrees(self.twist)


def sweep(
    kinematics: SpiralKinematics,
    profile: ThicknessProfile,
    mat: Material,
    twists,
    config: SolverConfig | None = None,
) -> TorqueCurve:
    """Quasi-static torque-deflection curve, each case warm-started from the last."""
    twists = np.asarray(twists, float)
    if twists.ndim != 1 or twists.size == 0:
        raise ValueError("need a 1-D list of twists")
    if np.any(np.diff(twists) <= 0):
        raise ValueError("twists must be strictly increasing")
    config = config or SolverConfig()
    beam = SpiralBeam(kinematics, profile, mat)
    warm = None
    tau, energy = [], []
    for phi in twists:
        try:
            sol = beam.solve(LoadCase(float(phi)), config, warm)
        except SolverError as exc:
            exc.sweep_twist = float(phi)
            raise
        warm = sol.unknowns
        tau.append(torque(sol))
        energy.append(total_energy(sol))
    return TorqueCurve(twists, np.array(tau), np.array(energy))


def energy_torque_check(kinematics, profile, mat, twist: float, delta: float = 1e-3, config=None):
    """(torque, central-difference dU/dtwist) at one twist."""
    config = config or SolverConfig()
    beam = SpiralBeam(kinematics, profile, mat)
    mid = beam.solve(LoadCase(twist), config)
    up = beam.solve(LoadCase(twist + delta), config, mid.unknowns)
    down = beam.solve(LoadCase(twist - delta), config, mid.unknowns)
    return torque(mid), (total_energy(up) - total_energy(down)) / (2.0 * delta)


def degrees_list(stop_deg: float, points: int) -> np.ndarray:
    return np.radians(np.linspace(0.0, stop_deg, points)) if points > 1 else np.array([math.radians(stop_deg)])
