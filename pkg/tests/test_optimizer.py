import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spiralspring.core import ONYX, ArcGrid, LoadCase, Material, ThicknessProfile, max_bending_energy_density
from spiralspring.elastica import SolverConfig
from spiralspring.optimizer import CalibrationError, OptimizerConfig, calibrate_c1, optimize, redistribute

from .conftest import QUARTER_TURN

BOUND = max_bending_energy_density(ONYX)
GRID = ArcGrid.uniform(1.0, 60)
LOAD = LoadCase(QUARTER_TURN)

thicknesses = arrays(float, 60, elements=st.floats(1e-3, 2e-2))
ratios = arrays(float, 60, elements=st.floats(0.0, 1.0))


@pytest.fixture(scope="module")
def calibrated(kin, uniform):
    return calibrate_c1(kin, uniform, ONYX, LOAD)


class TestRedistribute:
    def test_at_bound_unchanged(self):
        prof = ThicknessProfile(GRID, np.linspace(2e-3, 9e-3, 60), 1e-3)
        out = redistribute(prof, np.full(60, BOUND), ONYX, 0.5)
        assert np.array_equal(out.values, prof.values)

    def test_idle_node(self):
        prof = ThicknessProfile.uniform(GRID, 7e-3, 1e-3)
        out = redistribute(prof, np.zeros(60), ONYX, 0.5)
        np.testing.assert_allclose(out.values, 7e-3 * math.exp(-0.5), rtol=1e-15)

    def test_overstressed_growth_capped(self):
        prof = ThicknessProfile.uniform(GRID, 7e-3, 1e-3)
        out = redistribute(prof, np.full(60, 1e4 * BOUND), ONYX, 0.5)
        np.testing.assert_allclose(out.values, 7e-3 * math.exp(0.5), rtol=1e-15)

    @given(t=thicknesses, r=ratios, c2=st.floats(0.01, 5.0))
    def test_floor(self, t, r, c2):
        out = redistribute(ThicknessProfile(GRID, t, 1e-3), r * BOUND, ONYX, c2)
        assert np.all(out.values >= 1e-3)
        assert np.all(out.values <= t)

    @given(t=thicknesses, r=ratios, alpha=st.floats(0.2, 5.0))
    def test_scale_covariant(self, t, r, alpha):
        base = redistribute(ThicknessProfile(GRID, t, 1e-6), r * BOUND, ONYX, 0.5, t_min=1e-6)
        scaled = redistribute(ThicknessProfile(GRID, alpha * t, 1e-6), r * BOUND, ONYX, 0.5, t_min=1e-6)
        np.testing.assert_allclose(scaled.values, alpha * base.values, rtol=1e-13)


class TestCalibrate:
    def test_uniform_design(self, calibrated):
        assert calibrated.report.max_stress == pytest.approx(41e6, rel=5e-3)
        np.testing.assert_allclose(calibrated.profile.values, calibrated.c1 * 7e-3, rtol=1e-15)
        # the uniform spring at 90 degrees sits at about 41 MPa already
        assert calibrated.c1 == pytest.approx(1.0, abs=0.05)

    def test_fixed_point(self, kin, calibrated):
        again = calibrate_c1(kin, calibrated.profile, ONYX, LOAD, warm_start=calibrated.solution.unknowns)
        assert again.c1 == 1.0
        assert again.probes == 1

    def test_stronger_material_thicker_design(self, kin, uniform, calibrated):
        strong = Material(ONYX.young_modulus, ONYX.density, 2 * ONYX.yield_strength)
        other = calibrate_c1(kin, uniform, strong, LOAD)
        assert other.report.max_stress == pytest.approx(82e6, rel=5e-3)
        assert other.c1 > calibrated.c1

    def test_unreachable(self, kin, uniform):
        weak = Material(ONYX.young_modulus, ONYX.density, 1e6)
        with pytest.raises(CalibrationError) as err:
            calibrate_c1(kin, uniform, weak, LOAD)
        assert err.value.c1 == 0.25
        assert err.value.max_stress_ratio > 1


class TestOptimize:
    def test_history_shape(self, history):
        assert history.records[0].iteration == 0
        assert history.records[0].c2 is None
        assert [r.iteration for r in history.records] == list(range(len(history.records)))
        assert history.termination in ("converged", "regression", "max_iterations")

    def test_density_non_decreasing(self, history):
        d = history.densities()
        assert np.all(np.isfinite(d))
        assert np.all(np.diff(d) >= 0)

    def test_constraints_hold(self, history):
        cfg = history.config
        for rec in history.records[1:]:
            assert rec.max_stress <= 41e6 * (1 + cfg.c1_tol)
            assert np.max(rec.report.dUdm) <= BOUND * (1 + cfg.c1_tol) ** 2
            assert rec.profile.values.min() >= cfg.t_min

    def test_four_iterations(self, history):
        d = history.densities()
        assert d[0] == pytest.approx(45.0, rel=0.10)
        assert d[4] >= 60.0

    def test_fully_stressed(self, history):
        assert history.final.fraction_at_90 > 0.75
        assert history.records[0].fraction_at_90 < 0.5

    def test_near_optimal_start_stops_at_once(self, kin, history):
        cfg = OptimizerConfig(c2=1e-6)
        start = history.final.profile
        again = optimize(kin, start, ONYX, LOAD, SolverConfig(), cfg)
        assert len(again.records) <= 2
        assert again.final.mass_energy_density == pytest.approx(history.final.mass_energy_density, rel=1e-3)

    def test_deterministic(self, kin, uniform, history):
        cfg = OptimizerConfig(max_outer_iterations=2)
        short = optimize(kin, uniform, ONYX, LOAD, SolverConfig(), cfg)
        assert short.termination == "max_iterations"
        assert np.array_equal(short.densities(), history.densities()[:3])
        assert np.array_equal(short.final.profile.values, history.records[2].profile.values)

    def test_failure_names_iteration(self, kin, uniform):
        weak = Material(ONYX.young_modulus, ONYX.density, 1e6)
        with pytest.raises(CalibrationError) as err:
            optimize(kin, uniform, weak, LOAD)
        assert err.value.iteration == 1

    def test_rejects_thin_start(self, kin, grid):
        with pytest.raises(ValueError):
            optimize(kin, ThicknessProfile.uniform(grid, 5e-4, 4e-4), ONYX, LOAD)


class TestConfig:
    @pytest.mark.parametrize(
        "kw", [{"c2": 0.0}, {"t_min": 1e-4}, {"max_outer_iterations": 0}, {"c1_bounds": (1.0, 4.0)}]
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            OptimizerConfig(**kw)
