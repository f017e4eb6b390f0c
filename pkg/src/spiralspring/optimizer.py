"""Thickness redistribution toward a fully stressed spiral.

Each outer iteration multiplies the thickness by
``exp(-c2 * (1 - dUdm / dUdm_max))``: under-used material thins, material
at the bound keeps its thickness. The whole profile is then rescaled by a
single factor c1, found by re-solving the spiral until the peak outer-fibre
stress equals the yield strength.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .analysis import EnergyReport, evaluate
from .core import PRINTABLE_FLOOR, LoadCase, Material, ThicknessProfile, max_bending_energy_density
from .elastica import ElasticaSolution, SolverConfig, SolverError, SpiralBeam
from .geometry import SpiralKinematics

log = logging.getLogger(__name__)

MAX_RATIO = 2.0


class CalibrationError(SolverError):
    def __init__(self, c1: float, max_stress_ratio: float):
        self.c1 = c1
        self.max_stress_ratio = max_stress_ratio
        super().__init__(
            f"yield constraint unreachable: at c1={c1:.4g} peak stress is "
            f"{max_stress_ratio:.4g} x yield"
        )


@dataclass(frozen=True)
class OptimizerConfig:
    c2: float = 0.5
    t_min: float = 1.0e-3
    max_outer_iterations: int = 10
    improvement_tol: float = 1e-3
    c1_tol: float = 5e-3
    max_c2_halvings: int = 3
    c1_bounds: tuple[float, float] = (0.25, 4.0)

    def __post_init__(self):
        if not (self.c2 > 0 and self.improvement_tol > 0 and self.c1_tol > 0):
            raise ValueError("c2 and tolerances must be > 0")
        if self.t_min < PRINTABLE_FLOOR:
            raise ValueError(f"t_min must be >= printable floor {PRINTABLE_FLOOR} m")
        if self.max_outer_iterations < 1:
            raise ValueError("max_outer_iterations must be >= 1")
        lo, hi = self.c1_bounds
        if not 0 < lo < 1 < hi:
            raise ValueError("c1_bounds must bracket 1")


def redistribute(profile: ThicknessProfile, dudm, mat: Material, c2: float, t_min: float | None = None):
    """One application of the exponential update with c1 = 1, floored at t_min.

    Ratios above 2 (an overstressed, uncalibrated start) are capped there so
    one step can at most grow a node by exp(c2); calibration fixes the scale.
    """
    t_min = profile.t_min if t_min is None else t_min
    ratio = np.minimum(np.asarray(dudm, float) / max_bending_energy_density(mat), MAX_RATIO)
    new = np.maximum(t_min, profile.values * np.exp(-c2 * (1.0 - ratio)))
    return ThicknessProfile(profile.grid, new, t_min)


@dataclass(frozen=True, eq=False)
class Calibration:
    c1: float
    profile: ThicknessProfile
    solution: ElasticaSolution
    report: EnergyReport
    probes: int


def calibrate_c1(
    kinematics: SpiralKinematics,
    profile: ThicknessProfile,
    mat: Material,
    load: LoadCase,
    solver_config: SolverConfig | None = None,
    opt_config: OptimizerConfig | None = None,
    warm_start=None,
) -> Calibration:
    """Scale the whole profile so the peak stress sits on the yield strength.

    Bracketed Illinois iteration on log(c1); every probe re-solves the spiral,
    since the moment field depends on the thickness.
    """
    solver_config = solver_config or SolverConfig()
    opt_config = opt_config or OptimizerConfig(t_min=max(profile.t_min, PRINTABLE_FLOOR))
    sigma_y = mat.yield_strength
    lo_bound, hi_bound = opt_config.c1_bounds
    cache: dict[float, tuple] = {}
    warm = {1.0: warm_start} if warm_start is not None else {}

    def probe(c: float):
        if c in cache:
            return cache[c]
        scaled = profile.scaled(c)
        near = min(warm, key=lambda k: abs(math.log(k / c)), default=None)
        guess = None if near is None else np.asarray(warm[near]) * (c / near) ** 3
        sol = SpiralBeam(kinematics, scaled, mat).solve(load, solver_config, guess)
        warm[c] = sol.unknowns
        rep = evaluate(sol)
        f = rep.max_stress / sigma_y - 1.0
        cache[c] = (f, scaled, sol, rep)
        return cache[c]

    def done(c):
        f, scaled, sol, rep = cache[c]
        return Calibration(c, scaled, sol, rep, len(cache))

    c = 1.0
    f = probe(c)[0]
    if abs(f) <= opt_config.c1_tol:
        return done(c)
    # stress scales roughly linearly with thickness at fixed twist
    lo = hi = None
    while True:
        if f < 0:
            lo = (c, f)
        else:
            hi = (c, f)
        if lo and hi:
            break
        nxt = min(hi_bound, max(lo_bound, c / (1.0 + f) * (1.1 if f < 0 else 0.9)))
        if nxt == c:
            raise CalibrationError(c, f + 1.0)
        c = nxt
        f = probe(c)[0]
        if abs(f) <= opt_config.c1_tol:
            return done(c)

    side = 0
    for _ in range(100):
        (a, fa), (b, fb) = lo, hi
        la, lb = math.log(a), math.log(b)
        c = math.exp(lb - fb * (lb - la) / (fb - fa))
        if not min(a, b) < c < max(a, b):
            c = math.sqrt(a * b)
        f = probe(c)[0]
        if abs(f) <= opt_config.c1_tol:
            return done(c)
        if f < 0:
            lo = (c, f)
            if side == -1:
                hi = (hi[0], hi[1] / 2.0)
            side = -1
        else:
            hi = (c, f)
            if side == 1:
                lo = (lo[0], lo[1] / 2.0)
            side = 1
    raise CalibrationError(c, f + 1.0)


@dataclass(frozen=True, eq=False)
class IterationRecord:
    iteration: int
    profile: ThicknessProfile
    solution: ElasticaSolution
    report: EnergyReport
    c1: float
    c2: float | None

    @property
    def mass(self) -> float:
        return self.report.mass

    @property
    def energy(self) -> float:
        return self.report.total_energy

    @property
    def mass_energy_density(self) -> float:
        return self.report.mass_energy_density

    @property
    def max_stress(self) -> float:
        return self.report.max_stress

    @property
    def fraction_at_90(self) -> float:
        return self.report.fraction_at_yield(0.9)


@dataclass(eq=False)
class OptimizationHistory:
    load: LoadCase
    config: OptimizerConfig
    records: list[IterationRecord] = field(default_factory=list)
    termination: str = ""

    @property
    def final(self) -> IterationRecord:
        return self.records[-1]

    def densities(self) -> np.ndarray:
        return np.array([r.mass_energy_density for r in self.records])


def optimize(
    kinematics: SpiralKinematics,
    initial_profile: ThicknessProfile,
    mat: Material,
    load: LoadCase,
    solver_config: SolverConfig | None = None,
    opt_config: OptimizerConfig | None = None,
) -> OptimizationHistory:
    solver_config = solver_config or SolverConfig()
    cfg = opt_config or OptimizerConfig()
    t_min = cfg.t_min
    if np.any(initial_profile.values < t_min):
        raise ValueError("initial profile is thinner than t_min")
    start = ThicknessProfile(initial_profile.grid, initial_profile.values, t_min)
    sol = SpiralBeam(kinematics, start, mat).solve(load, solver_config)
    hist = OptimizationHistory(load, cfg)
    hist.records.append(IterationRecord(0, start, sol, evaluate(sol), 1.0, None))
    log.info("iteration 0: %.4g J/kg", hist.final.mass_energy_density)

    c2 = cfg.c2
    for n in range(1, cfg.max_outer_iterations + 1):
        prev = hist.final
        accepted = None
        for attempt in range(cfg.max_c2_halvings + 1):
            trial = redistribute(prev.profile, prev.report.dUdm, mat, c2, t_min)
            try:
                cal = calibrate_c1(kinematics, trial, mat, load, solver_config, cfg, prev.solution.unknowns)
            except SolverError as exc:
                exc.iteration = n
                raise
            if cal.report.mass_energy_density >= prev.mass_energy_density:
                accepted = cal
                break
            log.info("iteration %d: density fell with c2=%.4g, halving", n, c2)
            if attempt < cfg.max_c2_halvings:
                c2 *= 0.5
        if accepted is None:
            hist.termination = "regression"
            return hist
        hist.records.append(
            IterationRecord(n, accepted.profile, accepted.solution, accepted.report, accepted.c1, c2)
        )
        log.info("iteration %d: %.4g J/kg (c1=%.4g, c2=%.4g)", n, hist.final.mass_energy_density, accepted.c1, c2)
        gain = (accepted.report.mass_energy_density - prev.mass_energy_density) / prev.mass_energy_density
        if gain < cfg.improvement_tol:
            hist.termination = "converged"
            return hist
    hist.termination = "max_iterations"
    return hist
