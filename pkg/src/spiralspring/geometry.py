"""Archimedean spiral kinematics and printable outlines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ArcGrid, SpiralParams, ThicknessProfile

_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)


class OffsetExceedsCurvature(ValueError):
    """Half the wall thickness reaches the local radius of curvature."""

    def __init__(self, s: float, half_thickness: float, radius: float):
        self.s = s
        super().__init__(
            f"offset {half_thickness:.4g} m >= radius of curvature {radius:.4g} m at S={s:.6g} m"
        )


class SpiralKinematics:
    """Arc-length parametrisation of an Archimedean spiral.

    ``S(phi)`` is tabulated at panel boundaries by 12-point Gauss-Legendre
    quadrature of ``sqrt(r^2 + a^2)``; values between boundaries add one more
    panel integral, so the map is accurate to rounding everywhere.
    """

    def __init__(self, params: SpiralParams, panels: int = 256):
        self.params = params
        self.a = params.pitch
        self._edges = np.linspace(0.0, params.final_polar_angle, panels + 1)
        pieces = self._panel_integral(self._edges[:-1], self._edges[1:])
        self._s_edges = np.concatenate([[0.0], np.cumsum(pieces)])
        self.s_max = float(self._s_edges[-1])

    def _speed(self, phi):
        r = self.params.inner_radius + self.a * phi
        return np.sqrt(r * r + self.a * self.a)

    def _panel_integral(self, lo, hi):
        lo, hi = np.asarray(lo, float), np.asarray(hi, float)
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        nodes = mid[..., None] + half[..., None] * _GL_X
        return half * (self._speed(nodes) @ _GL_W)

    def radius(self, phi):
        return self.params.inner_radius + self.a * np.asarray(phi, float)

    def _check_phi(self, phi):
        phi = np.asarray(phi, float)
        if np.any(phi < 0) or np.any(phi > self.params.final_polar_angle):
            raise ValueError(f"phi outside [0, {self.params.final_polar_angle}]")
        return phi

    def _check_s(self, s):
        s = np.asarray(s, float)
        if np.any(s < 0) or np.any(s > self.s_max * (1 + 1e-14)):
            raise ValueError(f"S outside [0, {self.s_max}]")
        return np.clip(s, 0.0, self.s_max)

    def centerline_point(self, phi):
        phi = self._check_phi(phi)
        r = self.radius(phi)
        return r * np.cos(phi), r * np.sin(phi)

    def arc_of_phi(self, phi):
        phi = self._check_phi(phi)
        k = np.clip(np.searchsorted(self._edges, phi, side="right") - 1, 0, len(self._edges) - 2)
        out = self._s_edges[k] + self._panel_integral(self._edges[k], phi)
        return float(out) if out.ndim == 0 else out

    def phi_of_arc(self, s):
        s = self._check_s(s)
        phi = np.interp(s, self._s_edges, self._edges)
        for _ in range(50):
            step = (self.arc_of_phi(np.clip(phi, 0, self.params.final_polar_angle)) - s) / self._speed(phi)
            phi = phi - step
            if np.all(np.abs(step) <= 1e-15 * (1.0 + np.abs(phi))):
                break
        phi = np.clip(phi, 0.0, self.params.final_polar_angle)
        return float(phi) if phi.ndim == 0 else phi

    def total_arc_length(self) -> float:
        return self.s_max

    # tangent angle and curvature, as functions of the polar angle

    def tangent_angle_phi(self, phi):
        # the tangent (a cos - r sin, a sin + r cos) is (a, r) rotated by phi,
        # so phi + atan2(r, a) is already continuous across turns
        return phi + np.arctan2(self.radius(phi), self.a)

    def curvature_phi(self, phi):
        r2 = self.radius(phi) ** 2
        a2 = self.a * self.a
        return (r2 + 2.0 * a2) / (r2 + a2) ** 1.5

    def initial_tangent_angle(self, s):
        return self.tangent_angle_phi(self.phi_of_arc(s))

    def initial_curvature(self, s):
        return self.curvature_phi(self.phi_of_arc(s))

    def default_grid(self, n: int = 400) -> ArcGrid:
        return ArcGrid.uniform(self.s_max, n)


@dataclass(frozen=True, eq=False)
class Outline:
    """Edge polylines of a printed spiral, each an (n, 2) array in metres."""

    inner: np.ndarray
    outer: np.ndarray
    centerline: np.ndarray
    s: np.ndarray
    thickness: np.ndarray


def outline(k: SpiralKinematics, profile: ThicknessProfile, samples_per_node: int = 4) -> Outline:
    nodes = profile.grid.nodes
    if abs(nodes[-1] - k.s_max) > 1e-9 * k.s_max:
        raise ValueError("profile grid does not span the spiral")
    frac = np.arange(samples_per_node) / samples_per_node
    s = (nodes[:-1, None] + np.diff(nodes)[:, None] * frac).ravel()
    s = np.append(s, nodes[-1])
    phi = k.phi_of_arc(np.minimum(s, k.s_max))
    t = profile.at(s)
    kappa = k.curvature_phi(phi)
    bad = np.nonzero(0.5 * t >= 1.0 / kappa)[0]
    if bad.size:
        i = bad[0]
        raise OffsetExceedsCurvature(float(s[i]), 0.5 * t[i], 1.0 / kappa[i])
    x, y = k.centerline_point(phi)
    theta = k.tangent_angle_phi(phi)
    # left normal of a counter-clockwise spiral points toward the centre
    nx, ny = -np.sin(theta), np.cos(theta)
    half = 0.5 * t
    center = np.column_stack([x, y])
    inner = np.column_stack([x + half * nx, y + half * ny])
    outer = np.column_stack([x - half * nx, y - half * ny])
    return Outline(inner, outer, center, s, t)
