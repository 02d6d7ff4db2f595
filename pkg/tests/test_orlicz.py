import math

import numpy as np
import pytest

from orliczlab.errors import SingularAtZero, Unbounded
from orliczlab.growth import f_alpha
from orliczlab.orlicz import (
    OrliczSample,
    YoungFunction,
    conjugate,
    delta2_check,
    duality_sandwich_check,
    gauge_norm,
    make_pair,
    nabla2_check,
    normalize_pair,
    orlicz_dual_norm,
    power_young,
    tau_entropy,
    tau_q_young,
)


class TestConjugate:
    def test_self_dual_quadratic(self):
        star = conjugate(power_young(2.0))  # x^2/2 -> y^2/2
        ys = np.geomspace(1e-5, 1e5, 41)
        rel = np.max(np.abs(star.evaluate(ys) - ys**2 / 2) / (ys**2 / 2))
        assert rel <= 1e-6

    def test_power_three(self):
        star = conjugate(power_young(3.0))  # x^3/3 -> y^{3/2}/(3/2)
        ys = np.geomspace(1e-4, 1e4, 31)
        rel = np.max(np.abs(star.evaluate(ys) - ys**1.5 / 1.5) / (ys**1.5 / 1.5))
        assert rel <= 1e-6

    def test_tau_q_sandwich_members(self, tau_q_pair):
        for y in (1.0, 10.0, 1e3):
            prod = tau_q_pair.tau.inverse(y) * tau_q_pair.tau_star.inverse(y)
            assert y * (1 - 1e-8) <= prod <= 2 * y * (1 + 1e-8)

    def test_nonconvex_rejected(self):
        from orliczlab.errors import ConvexityViolation

        bad = YoungFunction(lambda x: np.sqrt(np.asarray(x, dtype=float)), description="sqrt")
        with pytest.raises(ConvexityViolation):
            conjugate(bad)


class TestGaugeNorm:
    def test_matches_l2_for_square(self, nu15_measure, square_pair):
        f = OrliczSample.from_callable(nu15_measure, lambda x: np.sin(x) + 0.3 * x)
        assert gauge_norm(f, square_pair) == pytest.approx(f.l2_norm(), rel=1e-9)

    def test_unit_for_constants(self, nu15_measure, square_pair, tau_q_pair):
        one = OrliczSample.from_callable(nu15_measure, lambda x: np.ones_like(x))
        for pair in (square_pair, tau_q_pair):
            assert gauge_norm(one, pair) == pytest.approx(1.0, abs=1e-9)

    def test_indicator_closed_form(self, nu15_measure, square_pair):
        # solve a * tau(1/k) = tau(1): k = sqrt(a) for tau = x^2
        ind = OrliczSample.from_callable(nu15_measure, lambda x: (x >= 0.5).astype(float))
        a = nu15_measure.tail(0.5)
        assert gauge_norm(ind, square_pair) == pytest.approx(math.sqrt(a), rel=2e-5)

    def test_scaling(self, nu15_measure, tau_q_pair):
        f = OrliczSample.from_callable(nu15_measure, lambda x: np.cos(x) + 0.2 * x**2)
        base = gauge_norm(f, tau_q_pair)
        for c in (0.3, 2.0, 17.5):
            scaled = OrliczSample(f.values * c, f.weights)
            assert gauge_norm(scaled, tau_q_pair) == pytest.approx(c * base, rel=1e-8)

    def test_fixed_point(self, nu15_measure, tau_q_pair):
        f = OrliczSample.from_callable(nu15_measure, lambda x: np.abs(x) + 0.1)
        n = gauge_norm(f, tau_q_pair, tol=1e-12)
        assert f.modular(tau_q_pair.tau, n) == pytest.approx(tau_q_pair.tau1, abs=1e-6)

    def test_upper_bound_by_modular(self, nu15_measure, tau_q_pair):
        rng = np.random.default_rng(5)
        for _ in range(10):
            a, b = rng.uniform(0.2, 3.0), rng.uniform(0, 2)
            f = OrliczSample.from_callable(nu15_measure, lambda x, a=a, b=b: a * np.abs(np.sin(x + b)))
            n = gauge_norm(f, tau_q_pair)
            assert n <= max(1.0, f.modular(tau_q_pair.tau) / tau_q_pair.tau1) + 1e-8


class TestDualNorm:
    def test_constant(self, nu15_measure, tau_q_pair):
        one = OrliczSample.from_callable(nu15_measure, lambda x: np.ones_like(x))
        assert orlicz_dual_norm(one, tau_q_pair) == pytest.approx(1.0, abs=1e-8)

    def test_indicator_unit_level_closed_form(self, nu15_measure, square_pair):
        ind = OrliczSample.from_callable(nu15_measure, lambda x: (x >= 0.8).astype(float))
        # closed form a (tau*)^{-1}(1/a) with a the mass under the sample's
        # own quadrature rule
        a = float(np.dot(ind.weights, ind.values))
        closed = a * square_pair.tau_star.inverse(1.0 / a)
        assert orlicz_dual_norm(ind, square_pair, level=1.0) == pytest.approx(closed, rel=1e-8)

    def test_dominated_by_gauge(self, nu15_measure, tau_q_pair, square_pair):
        rng = np.random.default_rng(6)
        for _ in range(6):
            a = rng.uniform(0.3, 2.0)
            f = OrliczSample.from_callable(nu15_measure, lambda x, a=a: np.abs(a * x) + 0.2)
            for pair in (tau_q_pair, square_pair):
                assert orlicz_dual_norm(f, pair) <= gauge_norm(f, pair) + 1e-8

    def test_holder(self, nu15_measure, tau_q_pair):
        rng = np.random.default_rng(7)
        star_pair = make_pair(tau_q_pair.tau_star, tau_q_pair.tau)
        for _ in range(5):
            a, b = rng.uniform(0.2, 2.0, size=2)
            f = OrliczSample.from_callable(nu15_measure, lambda x, a=a: np.abs(np.sin(a * x)) + 0.1)
            g = OrliczSample.from_callable(nu15_measure, lambda x, b=b: np.abs(np.cos(b * x)) + 0.1)
            both = float(np.dot(f.weights, np.abs(f.values * g.values)))
            assert both <= gauge_norm(f, tau_q_pair) * gauge_norm(g, star_pair) * (1 + 1e-8)


class TestNormalization:
    def test_scalar_balances_pair(self, tau_q_pair):
        norm = normalize_pair(tau_q_pair)
        assert norm.tau1 + norm.tau_star1 == pytest.approx(1.0, abs=1e-8)
        assert norm.normalized_flag

    def test_quadratic_normalizes_to_halves(self, square_pair):
        norm = normalize_pair(square_pair)
        assert norm.normalization_scalar == pytest.approx(0.5, rel=1e-12)
        assert norm.tau1 == pytest.approx(0.5, rel=1e-12)

    def test_gauge_invariant_under_scaling(self, nu15_measure, tau_q_pair):
        f = OrliczSample.from_callable(nu15_measure, lambda x: np.abs(x) + 0.3)
        norm = normalize_pair(tau_q_pair)
        assert gauge_norm(f, norm) == pytest.approx(gauge_norm(f, tau_q_pair), rel=1e-8)


class TestTauEntropy:
    def test_constant_gives_zero(self, nu15_measure, tau_q_pair):
        one = OrliczSample.from_callable(nu15_measure, lambda x: np.ones_like(x))
        pair = normalize_pair(tau_q_pair)
        assert tau_entropy(one, pair) == pytest.approx(0.0, abs=1e-10)

    def test_scale_invariance(self, nu15_measure, tau_q_pair):
        pair = normalize_pair(tau_q_pair)
        f = OrliczSample.from_callable(nu15_measure, lambda x: np.sin(x) + 0.3 * x)
        e1 = tau_entropy(f, pair)
        e2 = tau_entropy(OrliczSample(f.values * 5.0, f.weights), pair)
        assert e1 == pytest.approx(e2, abs=1e-10)

    def test_two_point_matches_direct_sum(self, tau_q_pair):
        pair = normalize_pair(tau_q_pair)
        two = OrliczSample.from_atoms([1.0, 3.0], [0.5, 0.5])
        n2 = two.l2_norm()
        lvl = pair.tau_star1
        direct = sum(
            0.5 * (v / n2) ** 2 * math.log(pair.tau_star.inverse(lvl * (v / n2) ** 2) / (v / n2))
            for v in (1.0, 3.0)
        )
        assert tau_entropy(two, pair) == pytest.approx(direct, rel=1e-10)

    def test_growth_band(self, tau_q_pair):
        # log((tau*)^{-1}(y^2 tau*(1)) / y) compared with log(y)^{2(1-1/alpha)}
        beta = 2 * (1 - 1 / 1.5)
        ys = np.geomspace(10, 1e6, 25)
        inv = tau_q_pair.tau_star.inverse(tau_q_pair.tau_star1 * ys**2)
        ratio = np.log(np.asarray(inv) / ys) / np.log(ys) ** beta
        # frozen band from a dense scan of this pair
        assert 0.25 <= ratio.min() and ratio.max() <= 1.0
        assert ratio.max() / ratio.min() <= 3.0


class TestGrowthConditions:
    def test_delta2_square(self):
        cert, fail = delta2_check(power_young(2.0, 2.0))
        assert fail is None
        K, y1 = cert
        assert K == pytest.approx(4.0, rel=1e-9)
        assert y1 == 0.0

    def test_delta2_gaussian_type_fails(self):
        with np.errstate(over="ignore"):
            tau = YoungFunction(lambda x: np.expm1(np.asarray(x, dtype=float) ** 2), description="exp")
            cert, fail = delta2_check(tau)
        assert cert is None
        assert fail > 1e6

    def test_delta2_tau_q_finite(self, tau_q_pair):
        cert, fail = delta2_check(tau_q_pair.tau)
        assert fail is None
        assert cert[0] < 50.0

    def test_nabla2_square(self):
        cert, _ = nabla2_check(power_young(2.0, 2.0))
        assert cert is not None
        l, y1 = cert
        assert l >= 2.0


def test_sandwich_all_pairs(square_pair, tau_q_pair):
    for pair in (square_pair, tau_q_pair):
        ok, lo, up = duality_sandwich_check(pair)
        assert ok, (lo, up)
