import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spiralspring import cantilever as cant
from spiralspring.core import ONYX, Material, max_bending_energy_density


@pytest.fixture
def case():
    return cant.CantileverCase(10.0, 0.1, 0.02, ONYX, 0.005)


class TestMoment:
    def test_ends(self, case):
        assert cant.moment(case, 0.1) == 0.0
        assert cant.moment(case, 0.0) == pytest.approx(1.0, rel=1e-15)

    def test_midpoint(self, case):
        assert cant.moment(case, 0.05) == pytest.approx(0.5, rel=1e-15)

    def test_matches_integrated_shear(self, case):
        # integrate dM/dx = -F from the free tip back toward the root
        x = np.linspace(0.0, 0.1, 1001)
        from_tip = np.concatenate([[0.0], np.cumsum(np.full(1000, case.tip_load * 1e-4))])[::-1]
        np.testing.assert_allclose(cant.moment(case, x), from_tip, atol=1e-13)

    def test_outside_beam(self, case):
        with pytest.raises(ValueError):
            cant.moment(case, 0.11)


class TestEnergyDensity:
    def test_free_end(self, case):
        assert cant.energy_density(case, 0.1) == 0.0

    def test_two_factorisations_agree(self, case):
        x = np.linspace(0.0, 0.1, 11)
        m = ONYX
        inertia = 0.02 * 0.005**3 / 12
        line = 0.5 * cant.moment(case, x) ** 2 / (m.young_modulus * inertia)
        np.testing.assert_allclose(
            cant.energy_density(case, x), line / (m.density * 0.02 * 0.005), rtol=1e-13
        )

    def test_uniform_at_yield_root(self, case):
        at_yield = cant.uniform_at_yield(case)
        assert cant.stress(at_yield, 0.0) == pytest.approx(ONYX.yield_strength, rel=1e-13)
        assert cant.energy_density(at_yield, 0.0) == pytest.approx(max_bending_energy_density(ONYX), rel=1e-13)


class TestOptimalThickness:
    def test_root_value(self, case):
        t = cant.optimal_thickness(case, 0.0)
        assert t == pytest.approx(2.705e-3, abs=5e-7)
        assert 6 * cant.moment(case, 0.0) / (0.02 * t**2) == pytest.approx(41e6, rel=1e-14)

    def test_tip_clamped(self, case):
        assert cant.optimal_thickness(case, 0.1) == case.t_min

    def test_constant_energy_density_where_unclamped(self, case):
        opt = cant.optimal_case(case)
        x = np.linspace(0.0, 0.1, 2001)
        free = cant.optimal_thickness(case, x) > case.t_min
        assert free.sum() > 1900
        np.testing.assert_allclose(
            cant.energy_density(opt, x[free]), max_bending_energy_density(ONYX), rtol=1e-12
        )

    def test_clamped_region_below_bound(self, case):
        opt = cant.optimal_case(case)
        x = np.linspace(0.0, 0.1, 2001)
        assert np.all(cant.energy_density(opt, x) <= max_bending_energy_density(ONYX) * (1 + 1e-12))


class TestTotalEnergy:
    def test_closed_form(self, case):
        inertia = 0.02 * 0.005**3 / 12
        assert cant.total_energy(case) == pytest.approx(100 * 1e-3 / (6 * 3e9 * inertia), rel=1e-15)

    def test_quadrature(self, case):
        assert cant.energy_by_quadrature(case, 20_001) == pytest.approx(cant.total_energy(case), rel=1e-8)

    def test_quadrature_second_order(self, case):
        exact = cant.total_energy(case)
        e1 = abs(cant.energy_by_quadrature(case, 101) - exact)
        e2 = abs(cant.energy_by_quadrature(case, 201) - exact)
        assert np.log2(e1 / e2) == pytest.approx(2.0, abs=0.05)

    def test_quadratic_in_load(self, case):
        doubled = cant.CantileverCase(20.0, 0.1, 0.02, ONYX, 0.005)
        assert cant.total_energy(doubled) == pytest.approx(4 * cant.total_energy(case), rel=1e-15)

    def test_needs_uniform(self, case):
        with pytest.raises(ValueError):
            cant.total_energy(cant.optimal_case(case))


class TestValidation:
    @pytest.mark.parametrize("args", [(0.0, 0.1, 0.02), (10.0, 0.0, 0.02), (10.0, 0.1, -1.0)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            cant.CantileverCase(*args, ONYX, 0.005)

    def test_table_columns(self, case):
        table = cant.profile_table(case, 11)
        assert list(table) == ["x", "M", "t_uniform", "dUdm_uniform", "t_optimal", "dUdm_optimal", "dUdm_bound"]
        assert all(v.shape == (11,) for v in table.values())


@settings(max_examples=100, deadline=None)
@given(
    load=st.floats(0.1, 100.0),
    length=st.floats(0.02, 0.5),
    width=st.floats(0.005, 0.05),
    strength=st.floats(5e6, 100e6),
)
def test_optimal_beats_uniform_at_yield(load, length, width, strength):
    mat = Material(3e9, 1200.0, strength)
    case = cant.CantileverCase(load, length, width, mat, 0.01, t_min=1e-6)
    uniform = cant.uniform_at_yield(case)
    optimal = cant.optimal_case(case)
    assert cant.mass_energy_density(optimal, 4001) > cant.mass_energy_density(uniform, 4001)
