import math

import numpy as np
import pytest

from orliczlab.criteria import (
    asymptotic_check,
    beckner_B,
    beckner_BT,
    capacity_half_line,
    constant_T,
    phi_sobolev_D,
    poincare_B,
    power_T,
    rosen_D,
    ttilde,
    ttilde_log,
)
from orliczlab.errors import DomainError, HypothesisViolation, UnboundedSupremum
from orliczlab.growth import log_growth
from orliczlab.measures import abs_power_potential, build_measure, u_alpha_potential


class TestPoincare:
    def test_exponential_unit_constant(self, exp_measure):
        rep = poincare_B(exp_measure)
        assert rep.constant_value == pytest.approx(1.0, abs=1e-4)
        assert (rep.bracket_lower, rep.bracket_upper) == (1.0, 4.0)
        # the exact spectral constant 4 sits inside [B, 4B] up to the B tolerance
        assert rep.constant_value - 1e-4 <= 4.0 <= 4.0 * (rep.constant_value + 1e-4)

    def test_gaussian_finite_with_extremizer(self, gauss_measure):
        rep = poincare_B(gauss_measure)
        assert 0 < rep.constant_value < 1.0
        lo, hi = gauss_measure.support
        assert lo < rep.extremizer_x < hi
        # exact constant 1 for the standard normal lies in the bracket
        assert rep.constant_value <= 1.0 <= 4.0 * rep.constant_value

    def test_subexponential_diverges(self):
        m = build_measure(abs_power_potential(0.5), scale=1.0, tol=1e-9)
        with pytest.raises(UnboundedSupremum):
            poincare_B(m)


class TestBeckner:
    def test_nu15_interior_extremizer(self, nu15_measure):
        rep = beckner_B(nu15_measure, 1.5)
        assert np.isfinite(rep.constant_value) and rep.constant_value > 0
        lo, hi = nu15_measure.support
        assert lo < rep.extremizer_x < hi
        assert (rep.bracket_lower, rep.bracket_upper) == (0.5, 20.0)

    def test_weight_shape_toward_p1(self, nu15_measure):
        # as p -> 1 the shape factor tends to 1/(1+a): monotone agreement
        tails = np.array([0.02, 0.1, 0.3, 0.5])
        for p in (1.01, 1.001):
            expo = (p - 2.0) / p
            shape = 1 - (1 + 1 / tails) ** expo
            limit = 1 / (1 + tails)
            assert np.max(np.abs(shape - limit)) < 0.02

    def test_monotone_in_p(self, nu15_measure):
        # the p-weight 1 - (1+1/a)^{(p-2)/p} decreases as p increases,
        # hence so does B(p)
        vals = [beckner_B(nu15_measure, p).constant_value for p in (1.1, 1.3, 1.5, 1.7, 1.9)]
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_p_domain(self, nu15_measure):
        with pytest.raises(DomainError):
            beckner_B(nu15_measure, 2.5)


class TestTransformedRate:
    def test_identity_rate_at_e(self):
        v = ttilde(power_T(1.0), math.e)
        assert 1 / 3 <= v <= 1.0
        # supremum approached at the p -> 1 end: 1 - 1/e
        assert v == pytest.approx(1 - math.exp(-1), rel=1e-6)

    @pytest.mark.parametrize("beta", [0.25, 0.5, 0.75, 1.0])
    def test_sandwich(self, beta):
        T = power_T(beta)
        for X in np.geomspace(math.e, 1e6, 20):
            v = ttilde(T, float(X))
            bound = float(T(np.asarray(1.0 / math.log(X))))
            assert 1 / (3 * bound) * (1 - 1e-9) <= v <= (1 / bound) * (1 + 1e-9)

    def test_constant_rate_closed_form(self):
        v, _ = ttilde_log(constant_T(1.0), math.log(10.0))
        assert v == pytest.approx(1 - 0.1, rel=1e-6)

    def test_bt_with_power_rate(self, nu15_measure):
        rep = beckner_BT(nu15_measure, power_T(2 * (1 - 1 / 1.5)))
        assert np.isfinite(rep.constant_value) and rep.constant_value > 0

    def test_constant_rate_comparable_to_poincare(self, nu15_measure):
        bt = beckner_BT(nu15_measure, constant_T(1.0)).constant_value
        pb = poincare_B(nu15_measure).constant_value
        # shape 1 - 1/X = 1/(1+a) ranges in [2/3, 1] for a <= 1/2
        assert 0.5 * pb <= bt <= pb * (1 + 1e-9)


class TestPhiSobolev:
    def test_gaussian_weight_finite(self):
        m = build_measure(abs_power_potential(2.0), scale=2.0, tol=1e-9)
        rep = phi_sobolev_D(m, log_growth(), gamma=1.0, M=0.0)
        assert np.isfinite(rep.constant_value)
        expected = 144 * 1.0 * rep.extra["B"] + 24 * (1 + 0.0 / math.log(8)) * rep.constant_value
        assert rep.extra["assembled_constant"] == pytest.approx(expected, rel=1e-12)

    def test_exponential_rejected(self, exp_measure):
        with pytest.raises(UnboundedSupremum):
            phi_sobolev_D(exp_measure, log_growth(), gamma=1.0, M=0.0)

    def test_matches_rosen_for_log_shape(self, nu15_measure):
        # the additive criterion with phi = log(1+.)^beta is the rosen sup
        beta = 2 * (1 - 1 / 1.5)
        rep = rosen_D(nu15_measure, beta)
        xs = rep.extremizer_x
        a = nu15_measure.tail(xs)
        direct = a * math.log1p(2.0 / a) ** beta * nu15_measure.inv_density_from_median(xs)
        assert rep.constant_value == pytest.approx(direct, rel=1e-9)


class TestRosen:
    def test_alpha_band(self):
        values = {}
        for a in (1.1, 1.3, 1.5, 1.7, 1.9):
            m = build_measure(u_alpha_potential(a), scale=2.0, tol=1e-9)
            values[a] = rosen_D(m, 2 * (1 - 1 / a)).constant_value
        assert all(np.isfinite(v) for v in values.values())
        assert max(values.values()) / min(values.values()) <= 10.0

    def test_final_constant_factor(self, nu15_measure):
        rep = rosen_D(nu15_measure, 2 / 3)
        assert rep.extra["K"] == 168.0
        assert rep.extra["assembled_constant"] == pytest.approx(168.0 * rep.constant_value, rel=1e-12)

    def test_exponential_diverges(self, exp_measure):
        with pytest.raises(UnboundedSupremum):
            rosen_D(exp_measure, 1.0)

    def test_beta_domain(self, nu15_measure):
        with pytest.raises(DomainError):
            rosen_D(nu15_measure, 1.5)


class TestAsymptotic:
    def test_matched_growth_satisfied(self):
        v = asymptotic_check(abs_power_potential(1.5), power_T(2 / 3))
        assert v.verdict == "satisfied"

    def test_mismatched_growth_violated(self):
        v = asymptotic_check(abs_power_potential(1.2), power_T(1.0))
        assert v.verdict == "violated"

    def test_gaussian_identity_rate_satisfied(self):
        v = asymptotic_check(abs_power_potential(2.0), power_T(1.0))
        assert v.verdict == "satisfied"


class TestExtremizers:
    def test_grid_argmax_refinement(self, nu15_measure):
        # the reported extremizer evaluates within 1e-6 relative of the sup
        rep = poincare_B(nu15_measure)
        x = rep.extremizer_x
        from orliczlab.measures import half_line_weight

        direct = half_line_weight(nu15_measure, x) if x >= nu15_measure.median else None
        if direct is not None:
            assert direct >= rep.constant_value * (1 - 1e-6)

    def test_capacity_identity(self, nu15_measure):
        for x in (0.5, 1.0, 2.5):
            cap = capacity_half_line(nu15_measure, x)
            assert cap * nu15_measure.inv_density_from_median(x) == pytest.approx(1.0, rel=1e-12)
