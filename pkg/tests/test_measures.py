import math

import numpy as np
import pytest

from orliczlab.errors import DomainError, NonIntegrable
from orliczlab.measures import (
    abs_power_potential,
    build_measure,
    half_line_weight,
    potential_from_callable,
    table_potential,
    u_alpha,
    u_alpha_potential,
)


class TestUAlpha:
    def test_outer_branch(self):
        assert u_alpha(1.5, 2.0) == pytest.approx(2.0**1.5, abs=1e-12)

    def test_center_value(self):
        # 1 - (3/4) a + (1/8) a^2 at a = 1.5
        assert u_alpha(1.5, 0.0) == pytest.approx(0.15625, abs=1e-15)

    @pytest.mark.parametrize("alpha", [1.2, 1.5, 1.8])
    def test_c2_seam(self, alpha):
        # one-sided values and first two derivatives agree across |x| = 1
        from orliczlab.measures import u_alpha_d1, u_alpha_d2

        h = 1e-12
        for side in (1.0, -1.0):
            x_in, x_out = side * (1 - h), side * (1 + h)
            assert u_alpha(alpha, x_in) == pytest.approx(u_alpha(alpha, x_out), abs=1e-8)
            assert u_alpha_d1(alpha, x_in) == pytest.approx(u_alpha_d1(alpha, x_out), abs=1e-8)
            assert u_alpha_d2(alpha, x_in) == pytest.approx(u_alpha_d2(alpha, x_out), abs=1e-8)

    def test_convexity_grid(self):
        xs = np.linspace(-3, 3, 1201)
        vals = u_alpha(1.5, xs)
        assert np.all(np.diff(vals, 2) >= -1e-8)

    def test_alpha_domain(self):
        with pytest.raises(DomainError):
            u_alpha(2.5, 1.0)
        with pytest.raises(DomainError):
            u_alpha_potential(1.0)


class TestBuildMeasure:
    def test_exponential_closed_form(self, exp_measure):
        assert exp_measure.normalization == pytest.approx(2.0, rel=1e-10)
        assert exp_measure.median == pytest.approx(0.0, abs=1e-10)

    def test_nu_alpha_symmetric(self, nu15_measure):
        assert nu15_measure.median == pytest.approx(0.0, abs=1e-9)
        assert np.isfinite(nu15_measure.normalization)
        mass = nu15_measure.integrate(lambda x: np.ones_like(x))
        assert mass == pytest.approx(1.0, abs=1e-9)

    def test_heavy_tail_rejected(self):
        pot = potential_from_callable(lambda x: -np.log1p(x**2), symmetric=True, name="heavy")
        with pytest.raises(NonIntegrable):
            build_measure(pot, scale=1.0, tol=1e-9)

    def test_normalization_invariant(self, exp_measure, gauss_measure, nu15_measure):
        for m in (exp_measure, gauss_measure, nu15_measure):
            assert m.integrate(lambda x: np.ones_like(x)) == pytest.approx(1.0, abs=m.quadrature_tolerance)

    def test_cdf_median(self, nu15_measure):
        assert nu15_measure.cdf(nu15_measure.median) == pytest.approx(0.5, abs=1e-9)

    def test_quantile_cdf_duality(self, exp_measure, nu15_measure):
        ts = np.linspace(0.02, 0.98, 25)
        for m in (exp_measure, nu15_measure):
            worst = max(abs(m.cdf(m.quantile(float(t))) - t) for t in ts)
            assert worst <= 10 * m.quadrature_tolerance

    def test_symmetry(self, nu15_measure):
        xs = np.linspace(0.1, 4.0, 15)
        worst = max(abs(nu15_measure.cdf(-float(x)) - (1 - nu15_measure.cdf(float(x)))) for x in xs)
        assert worst <= 10 * nu15_measure.quadrature_tolerance

    def test_density_nonnegative(self, nu15_measure):
        xs = np.linspace(*nu15_measure.support, 500)
        assert np.all(nu15_measure.density(xs) >= 0)

    def test_gaussian_normalization(self, gauss_measure):
        assert gauss_measure.normalization == pytest.approx(math.sqrt(2 * math.pi), rel=1e-10)


class TestHalfLineWeight:
    def test_exponential_closed_form(self, exp_measure):
        # tail * inverse-density integral = (e^{-x}/2) * 2(e^x - 1) = 1 - e^{-x}
        assert half_line_weight(exp_measure, 1.0) == pytest.approx(1 - math.exp(-1), abs=1e-9)

    def test_monotone_to_one(self, exp_measure):
        xs = [1.0, 3.0, 7.0, 15.0]
        vals = [half_line_weight(exp_measure, x) for x in xs]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert vals[-1] == pytest.approx(1.0, abs=1e-6)

    def test_zero_at_median(self, exp_measure):
        assert half_line_weight(exp_measure, exp_measure.median) == 0.0

    def test_left_of_median_rejected(self, exp_measure):
        with pytest.raises(DomainError):
            half_line_weight(exp_measure, -0.5)


class TestTablePotential:
    def test_smooth_roundtrip(self):
        xs = np.linspace(-10, 10, 201)
        pot = table_potential(xs, xs**2 / 2.0)
        m = build_measure(pot, scale=1.0, tol=1e-7)
        assert m.normalization == pytest.approx(math.sqrt(2 * math.pi), rel=1e-5)

    def test_kinked_roundtrip_loose(self):
        # monotone-cubic interpolation rounds the kink of |x| at 0, so the
        # normalization only matches at interpolation fidelity
        xs = np.linspace(-8, 8, 81)
        pot = table_potential(xs, np.abs(xs))
        m = build_measure(pot, scale=1.0, tol=1e-7)
        assert m.normalization == pytest.approx(2.0, rel=1e-2)

    def test_bad_table(self):
        with pytest.raises(DomainError):
            table_potential([0, 1], [0, 1])


def test_finite_difference_derivatives():
    pot = potential_from_callable(lambda x: x**4 / 4.0, symmetric=True)
    assert pot.d1(2.0, tol=1e-9) == pytest.approx(8.0, rel=1e-5)
    assert pot.d2(2.0, tol=1e-9) == pytest.approx(12.0, rel=1e-3)
