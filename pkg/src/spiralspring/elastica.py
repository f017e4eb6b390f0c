"""Large-deflection elastica of a spiral under an imposed end twist.

State along the arc coordinate S is (M, theta, x, y) with

    dM/dS     = -V cos(theta) + H sin(theta)
    dtheta/dS = kappa0(S) - M / (E I(S))
    dx/dS     = cos(theta),   dy/dS = sin(theta)

The inner end is clamped on the natural shape; the outer end is driven to
the natural end point rotated by the twist about the spiral centre. The
three unknowns (M(0), V, H) are found by shooting with Newton's method,
with continuation in the twist when a direct Newton solve fails.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .core import ArcGrid, LoadCase, Material, ThicknessProfile
from .geometry import SpiralKinematics

log = logging.getLogger(__name__)


class SolverError(RuntimeError):
    pass


class NonFiniteState(SolverError):
    def __init__(self, s: float):
        self.s = s
        super().__init__(f"non-finite state at S={s:.6g} m")


class ContinuationExhausted(SolverError):
    def __init__(self, twist: float, residuals):
        self.twist = twist
        self.residuals = tuple(float(r) for r in residuals)
        super().__init__(
            f"continuation exhausted; smallest failing twist {math.degrees(twist):.4g} deg, "
            f"last scaled residuals {self.residuals}"
        )


@dataclass(frozen=True)
class SolverConfig:
    grid_n: int = 400
    newton_tol: float = 1e-10
    max_newton_iterations: int = 25
    continuation_step: float = math.pi / 36
    max_bisections: int = 8

    def __post_init__(self):
        if self.grid_n < ArcGrid.MIN_NODES:
            raise ValueError(f"grid_n must be >= {ArcGrid.MIN_NODES}")
        if not (self.newton_tol > 0 and self.continuation_step > 0):
            raise ValueError("tolerances and steps must be > 0")
        if self.max_newton_iterations < 1 or self.max_bisections < 0:
            raise ValueError("iteration limits must be positive")


@dataclass(frozen=True, eq=False)
class ElasticaSolution:
    profile: ThicknessProfile
    material: Material
    load: LoadCase
    width: float
    m0: float
    v: float
    h: float
    M: np.ndarray
    theta: np.ndarray
    x: np.ndarray
    y: np.ndarray
    residual_norm: float

    @property
    def grid(self) -> ArcGrid:
        return self.profile.grid

    @property
    def s(self) -> np.ndarray:
        return self.profile.grid.nodes

    @property
    def unknowns(self) -> tuple[float, float, float]:
        return (self.m0, self.v, self.h)

    def conserved(self) -> np.ndarray:
        """Moment balance about the origin, M + V x - H y; constant in S."""
        return self.M + self.v * self.x - self.h * self.y

    def conservation_error(self) -> float:
        c = self.conserved()
        r1 = float(np.hypot(self.x[-1], self.y[-1]))
        scale = np.max(np.abs(self.M)) + abs(self.v * r1) + abs(self.h * r1)
        if scale == 0:
            return 0.0
        return float(np.max(np.abs(c - c[0])) / scale)


class SpiralBeam:
    """Precomputed coefficient tables for one spiral, profile and material."""

    def __init__(self, kinematics: SpiralKinematics, profile: ThicknessProfile, material: Material):
        grid = profile.grid
        if abs(grid.s_max - kinematics.s_max) > 1e-9 * kinematics.s_max:
            raise ValueError(
                f"profile grid ends at {grid.s_max:.10g} m but the spiral is {kinematics.s_max:.10g} m long"
            )
        self.kinematics = kinematics
        self.profile = profile
        self.material = material
        s = grid.nodes
        s_mid = 0.5 * (s[1:] + s[:-1])
        w = kinematics.params.width
        e = material.young_modulus
        t, t_mid = profile.values, profile.midpoints()
        kap = kinematics.initial_curvature(s)
        kap_mid = kinematics.initial_curvature(s_mid)
        inv_ei = 12.0 / (e * w * t**3)
        inv_ei_mid = 12.0 / (e * w * t_mid**3)
        self._h = np.diff(s).tolist()
        self._kap = kap.tolist()
        self._kap_mid = kap_mid.tolist()
        self._iei = inv_ei.tolist()
        self._iei_mid = inv_ei_mid.tolist()
        self.theta0 = float(kinematics.initial_tangent_angle(0.0))
        self.x0 = kinematics.params.inner_radius
        self.r1 = kinematics.params.outer_radius
        # rest state as the integrator sees it; targets are this end point
        # rotated by the twist, so zero twist is solved exactly by zero load
        self.rest_end = self.shoot((0.0, 0.0, 0.0))
        i_mid = w * t[t.size // 2] ** 3 / 12.0
        m_scale = e * i_mid / grid.s_max
        self.unknown_scale = np.array([m_scale, m_scale / self.r1, m_scale / self.r1])

    def shoot(self, unknowns, store: bool = False):
        """Classical RK4 on the grid; returns the end state or full fields."""
        m0, v, hh = (float(u) for u in unknowns)
        M, th, x, y = m0, self.theta0, self.x0, 0.0
        cos, sin = math.cos, math.sin
        kap, kapm, iei, ieim, hs = self._kap, self._kap_mid, self._iei, self._iei_mid, self._h
        out = None
        if store:
            out = np.empty((len(hs) + 1, 4))
            out[0] = (M, th, x, y)
        i = 0
        try:
            for i, h in enumerate(hs):
                c1, s1 = cos(th), sin(th)
                dm1 = -v * c1 + hh * s1
                dt1 = kap[i] - M * iei[i]
                half = 0.5 * h
                th2 = th + half * dt1
                m2 = M + half * dm1
                c2, s2 = cos(th2), sin(th2)
                dm2 = -v * c2 + hh * s2
                dt2 = kapm[i] - m2 * ieim[i]
                th3 = th + half * dt2
                m3 = M + half * dm2
                c3, s3 = cos(th3), sin(th3)
                dm3 = -v * c3 + hh * s3
                dt3 = kapm[i] - m3 * ieim[i]
                th4 = th + h * dt3
                m4 = M + h * dm3
                c4, s4 = cos(th4), sin(th4)
                dm4 = -v * c4 + hh * s4
                dt4 = kap[i + 1] - m4 * iei[i + 1]
                h6 = h / 6.0
                M += h6 * (dm1 + 2.0 * (dm2 + dm3) + dm4)
                th += h6 * (dt1 + 2.0 * (dt2 + dt3) + dt4)
                x += h6 * (c1 + 2.0 * (c2 + c3) + c4)
                y += h6 * (s1 + 2.0 * (s2 + s3) + s4)
                if out is not None:
                    out[i + 1] = (M, th, x, y)
        except (ValueError, OverflowError):
            # math.cos raises on inf
            raise NonFiniteState(float(self.profile.grid.nodes[i])) from None
        if not (math.isfinite(M) and math.isfinite(th) and math.isfinite(x) and math.isfinite(y)):
            if out is not None:
                bad = np.nonzero(~np.all(np.isfinite(out), axis=1))[0][0]
                raise NonFiniteState(float(self.profile.grid.nodes[bad]))
            raise NonFiniteState(self._first_nonfinite(unknowns))
        return out if store else (M, th, x, y)

    def _first_nonfinite(self, unknowns) -> float:
        with np.errstate(all="ignore"):
            try:
                self.shoot(unknowns, store=True)
            except NonFiniteState as exc:
                return exc.s
        return self.profile.grid.s_max

    def targets(self, twist: float):
        _, th, x, y = self.rest_end
        c, s = math.cos(twist), math.sin(twist)
        return (c * x - s * y, s * x + c * y, th + twist)

    def exact_targets(self, twist: float):
        k = self.kinematics
        phi = k.params.final_polar_angle + twist
        r1 = k.params.outer_radius
        return (r1 * math.cos(phi), r1 * math.sin(phi), float(k.tangent_angle_phi(k.params.final_polar_angle)) + twist)

    def residual(self, end, twist: float):
        tx, ty, tt = self.targets(twist)
        return (end[2] - tx, end[3] - ty, end[1] - tt)

    def scaled_residual(self, unknowns, twist: float) -> np.ndarray:
        rx, ry, rt = self.residual(self.shoot(unknowns), twist)
        return np.array([rx / self.r1, ry / self.r1, rt])

    def newton(self, start, twist: float, config: SolverConfig):
        """Returns (unknowns, residual_norm, ok)."""
        u = np.array(start, dtype=float)
        f = None
        try:
            for _ in range(config.max_newton_iterations + 1):
                f = self.scaled_residual(u, twist)
                if np.max(np.abs(f)) <= config.newton_tol:
                    return u, float(np.max(np.abs(f))), True
                jac = np.empty((3, 3))
                for k in range(3):
                    du = np.zeros(3)
                    du[k] = 1e-6 * self.unknown_scale[k]
                    jac[:, k] = (self.scaled_residual(u + du, twist) - f) / du[k]
                step = np.linalg.solve(jac, -f)
                if not np.all(np.isfinite(step)):
                    break
                u = u + step
        except (NonFiniteState, np.linalg.LinAlgError):
            pass
        norm = float(np.max(np.abs(f))) if f is not None else math.inf
        return u, norm, False

    def solve(self, load: LoadCase, config: SolverConfig, warm_start=None) -> ElasticaSolution:
        load.check(self.kinematics.params)
        target = float(load.twist)
        if warm_start is not None:
            u, norm, ok = self.newton(warm_start, target, config)
            if ok:
                return self._solution(u, norm, load)
            log.debug("warm start failed at %.4g rad, marching from zero", target)
        if target == 0.0:
            u, norm, ok = self.newton(np.zeros(3), target, config)
            if ok:
                return self._solution(u, norm, load)

        done, u_done = 0.0, np.zeros(3)
        prev = None
        direction = 1.0 if target > 0 else -1.0
        step = min(config.continuation_step, abs(target))
        bisections = 0
        last = (math.inf,) * 3
        while done != target:
            nxt = done + direction * step
            if direction * (nxt - target) > 0 or abs(nxt - target) < 1e-12:
                nxt = target
            guess = u_done
            if prev is not None and prev[0] != done:
                # secant predictor from the last two converged twists
                guess = u_done + (u_done - prev[1]) * (nxt - done) / (done - prev[0])
            u, norm, ok = self.newton(guess, nxt, config)
            if ok:
                prev = (done, u_done)
                done, u_done = nxt, u
                continue
            try:
                last = tuple(self.scaled_residual(u, nxt))
            except NonFiniteState:
                last = (math.nan,) * 3
            bisections += 1
            if bisections > config.max_bisections:
                raise ContinuationExhausted(nxt, last)
            step *= 0.5
        return self._solution(u_done, norm, load)

    def _solution(self, u, norm, load) -> ElasticaSolution:
        f = self.shoot(u, store=True)
        return ElasticaSolution(
            self.profile, self.material, load, self.kinematics.params.width, float(u[0]), float(u[1]), float(u[2]),
            f[:, 0], f[:, 1], f[:, 2], f[:, 3], norm,
        )


def integrate_ivp(kinematics, profile, material, unknowns) -> ElasticaSolution:
    """Integrate from the clamped inner end without enforcing the outer end."""
    beam = SpiralBeam(kinematics, profile, material)
    f = beam.shoot(unknowns, store=True)
    rx, ry, rt = beam.residual(f[-1], 0.0)
    norm = max(abs(rx) / beam.r1, abs(ry) / beam.r1, abs(rt))
    return ElasticaSolution(
        profile, material, LoadCase(0.0), kinematics.params.width, float(unknowns[0]), float(unknowns[1]), float(unknowns[2]),
        f[:, 0], f[:, 1], f[:, 2], f[:, 3], norm,
    )


def residuals(kinematics, candidate: ElasticaSolution, load: LoadCase):
    """(rx, ry, rtheta) of the candidate's end state against the twisted targets."""
    beam = SpiralBeam(kinematics, candidate.profile, candidate.material)
    end = (candidate.M[-1], candidate.theta[-1], candidate.x[-1], candidate.y[-1])
    return beam.residual(end, load.twist)


def solve_bvp(kinematics, profile, material, load, config=None, warm_start=None) -> ElasticaSolution:
    beam = SpiralBeam(kinematics, profile, material)
    return beam.solve(load, config or SolverConfig(), warm_start)
