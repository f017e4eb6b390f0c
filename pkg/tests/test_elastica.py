import math

import numpy as np
import pytest

from spiralspring.analysis import total_energy
from spiralspring.core import ONYX, DEFAULT_THICKNESS, ArcGrid, LoadCase, ThicknessProfile
from spiralspring.elastica import (
    ContinuationExhausted,
    NonFiniteState,
    SolverConfig,
    SpiralBeam,
    integrate_ivp,
    residuals,
    solve_bvp,
)

from .conftest import QUARTER_TURN


def uniform_beam(kin, n):
    return SpiralBeam(kin, ThicknessProfile.uniform(kin.default_grid(n), DEFAULT_THICKNESS, 1e-3), ONYX)


class TestIntegrator:
    def test_zero_load_keeps_natural_shape(self, kin, uniform):
        sol = integrate_ivp(kin, uniform, ONYX, (0.0, 0.0, 0.0))
        phi = kin.phi_of_arc(sol.s)
        x, y = kin.centerline_point(phi)
        r1 = kin.params.outer_radius
        assert np.max(np.hypot(sol.x - x, sol.y - y)) < 1e-8 * r1
        np.testing.assert_allclose(sol.theta, kin.initial_tangent_angle(sol.s), atol=1e-8)
        assert np.all(sol.M == 0.0)

    def test_fourth_order_terminal_state(self, kin, quarter):
        ends = [np.array(uniform_beam(kin, n).shoot(quarter.unknowns)[1:]) for n in (101, 201, 401, 801)]
        d = [np.max(np.abs(b - a)) for a, b in zip(ends, ends[1:])]
        orders = [math.log2(d[i] / d[i + 1]) for i in range(2)]
        assert all(3.7 <= p <= 4.3 for p in orders), orders

    @pytest.mark.parametrize("n", [60, 400])
    def test_moment_balance_conserved_to_roundoff(self, kin, quarter, n):
        beam = uniform_beam(kin, n)
        sol = integrate_ivp(kin, beam.profile, ONYX, quarter.unknowns)
        assert sol.conservation_error() < 1e-12

    def test_non_finite_state_reported(self, beam):
        with pytest.raises(NonFiniteState) as err:
            beam.shoot((1e300, 1e308, 1e308))
        assert 0.0 <= err.value.s <= beam.kinematics.s_max

    def test_grid_must_match_spiral(self, kin):
        prof = ThicknessProfile.uniform(ArcGrid.uniform(0.5, 100), 0.007)
        with pytest.raises(ValueError):
            SpiralBeam(kin, prof, ONYX)


class TestResiduals:
    def test_rest_state_is_exact(self, kin, uniform):
        cand = integrate_ivp(kin, uniform, ONYX, (0.0, 0.0, 0.0))
        assert residuals(kin, cand, LoadCase(0.0)) == (0.0, 0.0, 0.0)

    def test_converged_solution(self, kin, quarter):
        rx, ry, rt = residuals(kin, quarter, quarter.load)
        r1 = kin.params.outer_radius
        assert abs(rx) <= 1e-8 * r1 and abs(ry) <= 1e-8 * r1 and abs(rt) <= 1e-8

    def test_discrete_targets_close_to_exact(self, beam):
        for twist in (0.0, QUARTER_TURN, -0.3):
            d = np.subtract(beam.targets(twist), beam.exact_targets(twist))
            assert np.max(np.abs(d[:2])) < 1e-8 * beam.r1
            assert abs(d[2]) < 1e-8

    def test_moment_probe_sign(self, beam, uniform):
        # at zero load a constant moment M0 rotates the tip by -M0 S_max / EI
        delta = 1e-3
        _, _, rt = beam.residual(beam.shoot((delta, 0.0, 0.0)), 0.0)
        ei = ONYX.young_modulus * 0.02 * DEFAULT_THICKNESS**3 / 12
        assert rt < 0
        assert rt / delta == pytest.approx(-uniform.grid.s_max / ei, rel=1e-9)


class TestSolve:
    def test_zero_twist(self, beam):
        sol = beam.solve(LoadCase(0.0), SolverConfig())
        assert sol.unknowns == (0.0, 0.0, 0.0)
        ei_min = ONYX.young_modulus * 0.02 * DEFAULT_THICKNESS**3 / 12
        assert np.max(np.abs(sol.M)) < 1e-12 * ei_min / beam.kinematics.s_max

    def test_quarter_turn(self, quarter):
        assert quarter.residual_norm <= 1e-10
        assert quarter.conservation_error() < 1e-6
        # a positive twist winds the coil tighter, so M < 0 raises the curvature
        assert quarter.m0 < 0
        assert np.all(quarter.theta[1:] - quarter.theta[:-1] > 0)

    def test_both_directions(self, beam, quarter):
        back = beam.solve(LoadCase(-QUARTER_TURN), SolverConfig())
        assert back.residual_norm <= 1e-10
        assert back.conservation_error() < 1e-6
        assert total_energy(back) != pytest.approx(total_energy(quarter), rel=1e-3)

    def test_warm_start_agrees(self, beam, quarter):
        warm = beam.solve(LoadCase(QUARTER_TURN), SolverConfig(), np.array(quarter.unknowns) * 1.01)
        np.testing.assert_allclose(warm.unknowns, quarter.unknowns, rtol=1e-7)

    def test_deterministic(self, kin, uniform, quarter):
        again = solve_bvp(kin, uniform, ONYX, LoadCase(QUARTER_TURN))
        assert again.unknowns == quarter.unknowns
        assert np.array_equal(again.M, quarter.M)

    def test_grid_refinement(self, kin, quarter):
        fine = uniform_beam(kin, 800).solve(LoadCase(QUARTER_TURN), SolverConfig(grid_n=800))
        assert total_energy(fine) == pytest.approx(total_energy(quarter), rel=1e-3)

    def test_continuation_exhausted(self, beam):
        cfg = SolverConfig(newton_tol=1e-30, max_newton_iterations=3, max_bisections=2)
        with pytest.raises(ContinuationExhausted) as err:
            beam.solve(LoadCase(QUARTER_TURN), cfg)
        assert 0 < err.value.twist <= math.pi / 36
        assert len(err.value.residuals) == 3

    def test_twist_beyond_spiral(self, beam):
        with pytest.raises(ValueError):
            beam.solve(LoadCase(4 * math.pi), SolverConfig())

    @pytest.mark.parametrize("kw", [{"grid_n": 49}, {"newton_tol": 0.0}, {"max_bisections": -1}])
    def test_config_validation(self, kw):
        with pytest.raises(ValueError):
            SolverConfig(**kw)
