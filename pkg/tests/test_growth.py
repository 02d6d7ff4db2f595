import math

import numpy as np
import pytest

from orliczlab.errors import DomainError
from orliczlab.growth import (
    MollifierSpec,
    check_c1c2,
    check_fcond,
    check_lambda_condition,
    f_alpha,
    f_alpha_tilde,
    growth_from_callable,
    lambda_for_cutoff,
    log_growth,
    mollify,
    rothaus_slope_bound,
)


class TestFAlpha:
    @pytest.mark.parametrize("alpha", [1.1, 1.5, 1.9])
    def test_vanishes_at_one(self, alpha):
        assert f_alpha(alpha)(1.0) == pytest.approx(0.0, abs=1e-15)

    def test_example_value(self):
        x = math.exp(2) - 1
        assert f_alpha(1.5)(x) == pytest.approx(2 ** (2 / 3) - math.log(2) ** (2 / 3), rel=1e-12)

    def test_monotone(self):
        assert f_alpha(1.5).monotone_probe()

    def test_concave_beyond_one(self):
        F = f_alpha(1.5)
        xs = np.geomspace(1.0, 1e9, 200)
        assert np.all(F.derivative2(xs) <= 1e-15)

    def test_bounded_slope(self):
        # u F'(u) stays bounded (here by beta < 1): concave-route hypothesis
        for alpha in (1.25, 1.5, 1.75):
            bound = rothaus_slope_bound(f_alpha(alpha))
            assert bound <= 2 * (1 - 1 / alpha) + 1e-9

    def test_domain(self):
        with pytest.raises(DomainError):
            f_alpha(2.5)


class TestFAlphaTilde:
    def test_zero_below_cutoff(self):
        Ft = f_alpha_tilde(1.5, 2.0)
        xs = np.linspace(0, 4.0, 50)
        assert np.all(Ft(xs) == 0.0)

    def test_continuous_at_cutoff(self):
        Ft = f_alpha_tilde(1.5, 2.0)
        assert Ft(4.0 + 1e-12) == pytest.approx(0.0, abs=1e-10)

    def test_rho_domain(self):
        with pytest.raises(DomainError):
            f_alpha_tilde(1.5, 0.9)


class TestFcond:
    def test_log_p2_k2(self):
        # x(-1/x^2) + 1.5 / x = 0.5/x > 0
        rep = check_fcond(log_growth(), 2.0, 2.0)
        assert rep.passed

    @pytest.mark.parametrize("alpha", [1.25, 1.5, 1.75])
    def test_f_alpha_damping(self, alpha):
        rep = check_fcond(f_alpha(alpha), 2.0, 5.0 - 4.0 / alpha)
        assert rep.passed
        if 5.0 - 4.0 / alpha > 2.0:
            assert "ceiling" in rep.detail

    def test_linear(self):
        lin = growth_from_callable(lambda x: np.asarray(x, dtype=float), "linear")
        assert check_fcond(lin, 2.0, 2.0).passed


class TestMollify:
    def setup_method(self):
        self.Ft = f_alpha_tilde(1.5, 2.0)
        self.spec = MollifierSpec(0.1)

    def test_bump_mass(self):
        assert self.spec.mass() == pytest.approx(1.0, abs=1e-10)

    def test_vanishes_left_of_shifted_cutoff(self):
        Fm = mollify(self.Ft, self.spec)
        assert Fm(3.9) == 0.0
        assert Fm(2.0) == 0.0

    def test_upper_bound_with_edge_slope(self):
        Fm = mollify(self.Ft, self.spec)
        edge_slope = float(self.Ft.derivative1(4.0 + 1e-9))
        xs = np.linspace(4.0, 9.0, 21)
        margin = np.min(self.Ft(xs) + self.spec.epsilon * edge_slope - Fm(xs))
        assert margin >= -1e-10

    def test_pointwise_convergence_monotone(self):
        xs = np.linspace(4.0, 9.0, 41)
        dists = []
        for eps in (0.1, 0.01, 0.001):
            Fm = mollify(self.Ft, MollifierSpec(eps))
            dists.append(float(np.max(np.abs(Fm(xs) - self.Ft(xs)))))
        assert dists[0] > dists[1] > dists[2]

    def test_damping_survives_mollification(self):
        lam = lambda_for_cutoff(1.5, 2.0)
        assert lam == pytest.approx(1.0 + (2 - 1.5) / (1.5 * math.log(4.0)), rel=1e-12)
        Fm = mollify(self.Ft, self.spec)
        rep = check_lambda_condition(Fm, lam)
        assert rep.passed

    def test_monotone_preserved(self):
        Fm = mollify(self.Ft, self.spec)
        xs = np.linspace(0.5, 20.0, 200)
        assert np.all(np.diff(Fm(xs)) >= -1e-12)

    def test_epsilon_gate(self):
        with pytest.raises(DomainError):
            mollify(self.Ft, MollifierSpec(5.0))


class TestC1C2:
    def test_equality_at_one(self):
        xs = 1.0
        beta = 2 * (1 - 1 / 1.5)
        assert math.log1p(xs) ** beta - math.log(2) ** beta == pytest.approx(0.0, abs=1e-15)

    def test_beta_one_spot_check(self):
        # log(10) - log 2 <= 8 log 2
        assert math.log(10) - math.log(2) <= 8 * math.log(2)

    @pytest.mark.parametrize("alpha", [1.0, 4 / 3, 1.5, 8 / 5, 2.0])
    def test_certificates(self, alpha):
        (c1, c2), info = check_c1c2(alpha)
        assert (c1, c2) == (1.0, 8.0)
        assert info["margin_log_bound"] >= -1e-12
        assert info["worst_square_factor"] <= 8.0
        assert info["margin_square_bound"] >= -1e-12

    def test_beta_zero_trivial(self):
        (c1, c2), info = check_c1c2(1.0)
        assert info["beta"] == 0.0
        assert info["margin_square_bound"] >= -1e-12
