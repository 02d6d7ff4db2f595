import math

import numpy as np
import pytest

from orliczlab.errors import Disconnected, DomainError, HypothesisViolation
from orliczlab.finite import (
    FiniteSpace,
    capacity,
    capacity_median,
    complete_space,
    find_ak_lambda,
    path_space,
    poincare_exact,
    product_space,
    random_space,
    rothaus_deficit,
    two_point_space,
    verify_cutoff_tighten,
    verify_fsobcap,
    verify_hardy_reduction,
    verify_lem_ak,
    verify_tensorization,
)
from orliczlab.growth import f_alpha, f_alpha_tilde


class TestCapacity:
    def test_two_cell_path_by_hand(self):
        # f(0)=1, f(2)=0, node 1 harmonic: f(1)=1/2, energy = 1/2
        sp = path_space(3)
        res = capacity(sp, [0], [0, 1])
        assert res.value == pytest.approx(0.5, rel=1e-12)
        assert res.minimizer[1] == pytest.approx(0.5)
        assert res.recheck(sp) == pytest.approx(res.value, abs=1e-12)

    def test_series_resistance(self):
        n = 6
        sp = path_space(n + 1)
        res = capacity(sp, [0], list(range(n)))
        assert res.value == pytest.approx(1.0 / n, rel=1e-12)

    def test_plateau_equals_cut_conductance(self):
        sp = path_space(3)
        res = capacity(sp, [0, 1], [0, 1])
        assert res.value == pytest.approx(1.0)
        assert np.all(res.minimizer[:2] == 1.0)

    def test_monotonicity(self):
        rng = np.random.default_rng(0)
        sp = random_space(7, rng)
        base = capacity(sp, [0], [0, 1, 2, 3]).value
        assert capacity(sp, [0, 1], [0, 1, 2, 3]).value >= base - 1e-12      # larger inner set
        assert capacity(sp, [0], [0, 1, 2, 3, 4]).value <= base + 1e-12     # larger outer set

    def test_median_constraint(self):
        sp = path_space(4, weights=[0.25, 0.25, 0.25, 0.25])
        res = capacity_median(sp, [0])
        # best admissible outer set is {0, 1} (weight 1/2): two edges in series
        assert res.value == pytest.approx(0.5, rel=1e-12)

    def test_inner_must_be_nonempty(self):
        with pytest.raises(DomainError):
            capacity(path_space(3), [], [0, 1])


class TestPoincareExact:
    def test_two_point_by_hand(self):
        # Var = (f0-f1)^2/4, E = (f0-f1)^2: C_P = 1/4
        assert poincare_exact(two_point_space()) == pytest.approx(0.25, rel=1e-12)

    def test_complete_graph(self):
        # L = nI - J has eigenvalue n on mean-zero vectors; against the
        # weight diagonal 1/n the pencil eigenvalue is n^2
        for n in (4, 6):
            assert poincare_exact(complete_space(n)) == pytest.approx(1.0 / n**2, rel=1e-9)

    def test_disconnected(self):
        sp = FiniteSpace(np.array([0.5, 0.5]), ())
        with pytest.raises(Disconnected):
            poincare_exact(sp)


class TestHardyReduction:
    def test_random_trees_bracket(self):
        rng = np.random.default_rng(42)
        for _ in range(30):
            n = int(rng.integers(4, 9))
            sp = random_space(n, rng, tree_only=True)
            omega = tuple(int(v) for v in rng.choice(n, size=int(rng.integers(1, n)), replace=False))
            rep = verify_hardy_reduction(sp, omega)
            assert rep["bracket_ok"]
            assert rep["B"] <= rep["C"] * (1 + 1e-9)
            assert rep["C"] <= 11.1 * rep["B"]

    def test_singleton_outer_ratio_one(self):
        rng = np.random.default_rng(1)
        sp = random_space(6, rng)
        rep = verify_hardy_reduction(sp, (2,))
        assert rep["ratio"] == pytest.approx(1.0, rel=1e-9)

    def test_sharp_expected_ratio(self):
        # the sharp comparison constant is 4; fuzz should stay well below
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(25):
            sp = random_space(8, rng)
            omega = tuple(int(v) for v in rng.choice(8, size=4, replace=False))
            worst = max(worst, verify_hardy_reduction(sp, omega)["ratio"])
        assert worst <= 4.0


class TestDyadicBootstrap:
    def test_indicator_growth(self):
        rng = np.random.default_rng(3)
        seqs = [np.sort(rng.uniform(0, 0.5, size=10))[::-1] for _ in range(100)]
        F = lambda x: 1.0 if x >= 2.0 else 0.0
        out = verify_lem_ak(F, 4.0, seqs)
        assert out["passed"]

    def test_constant_sequences(self):
        F = lambda x: math.log1p(x) ** 0.5
        lam = find_ak_lambda(F)
        out = verify_lem_ak(F, lam, [np.full(8, 0.3)])
        assert out["passed"]

    def test_geometric_sequence(self):
        F = lambda x: math.log1p(x) ** 0.5
        lam = find_ak_lambda(F)
        out = verify_lem_ak(F, lam, [np.array([2.0**-k / 2 for k in range(10)])])
        assert out["passed"]

    def test_fuzz_log_power(self):
        rng = np.random.default_rng(4)
        F = lambda x: math.log1p(x) ** (2 * (1 - 1 / 1.5))
        lam = find_ak_lambda(F)
        seqs = [np.sort(rng.uniform(0, 0.5, size=12))[::-1] for _ in range(300)]
        out = verify_lem_ak(F, lam, seqs)
        assert out["passed"] and out["sequences_checked"] == 300

    def test_increasing_f_required(self):
        with pytest.raises(HypothesisViolation):
            verify_lem_ak(lambda x: 1.0 / x, 4.0, [np.full(4, 0.25)])


class TestFSobolevCapacity:
    def test_two_point_indicator(self):
        F = lambda x: 1.0 if x >= 2.0 else 0.0
        out = verify_fsobcap(two_point_space(), F, 4.0)
        assert out["passed"]

    def test_random_spaces_indicator(self):
        rng = np.random.default_rng(5)
        F = lambda x: 1.0 if x >= 2.0 else 0.0
        for _ in range(6):
            sp = random_space(int(rng.integers(4, 8)), rng)
            assert verify_fsobcap(sp, F, 4.0, rng=rng)["passed"]

    def test_log_growth(self):
        rng = np.random.default_rng(6)
        F = lambda x: math.log(x) if x >= 1 else 0.0
        lam = find_ak_lambda(F)
        sp = random_space(6, rng)
        assert verify_fsobcap(sp, F, lam, rng=rng)["passed"]


class TestTensorization:
    def test_product_gap_equals_min(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            s1 = random_space(int(rng.integers(3, 6)), rng)
            s2 = random_space(int(rng.integers(3, 6)), rng)
            lam1 = 1 / poincare_exact(s1)
            lam2 = 1 / poincare_exact(s2)
            lamp = 1 / poincare_exact(product_space(s1, s2))
            assert lamp == pytest.approx(min(lam1, lam2), abs=1e-10)

    def test_xlogx_no_violation(self):
        rng = np.random.default_rng(9)
        s1 = random_space(4, rng)
        s2 = random_space(5, rng)
        out = verify_tensorization(s1, s2, lambda x: x * np.log(np.maximum(x, 1e-300)), corpus_size=2000, rng=rng)
        assert out["passed"]

    def test_single_state_factor(self):
        one = FiniteSpace(np.array([1.0]), ())
        other = two_point_space()
        prod = product_space(one, other)
        assert poincare_exact(prod) == pytest.approx(poincare_exact(other), rel=1e-12)


class TestRothausDeficit:
    def test_small_perturbation_limit(self):
        rng = np.random.default_rng(10)
        sp = random_space(8, rng)
        F = f_alpha(1.5)
        w = sp.weights
        g = rng.normal(size=8)
        g -= np.dot(w, g)
        g /= math.sqrt(np.dot(w, g * g))
        eps = 1e-3
        f = 1 + eps * g
        m2 = float(np.dot(w, f * f))
        ft = f - float(np.dot(w, f))
        nt2 = float(np.dot(w, ft * ft))
        lhs = float(np.dot(w, f * f * F.evaluate(f * f / m2)))
        rhs = float(np.dot(w, ft * ft * F.evaluate(np.maximum(ft * ft / nt2, 1e-300))))
        ratio = (lhs - rhs) / nt2
        d1 = float(F.derivative1(np.asarray(1.0)))
        d2 = float(F.derivative2(np.asarray(1.0)))
        predicted = 4 * d1 + 2 * d2 - float(np.dot(w, g * g * F.evaluate(np.maximum(g * g, 1e-300))))
        assert ratio == pytest.approx(predicted, rel=1e-3)

    def test_corpus_maximum_stable(self):
        F = f_alpha(1.5)
        rng = np.random.default_rng(11)
        values = []
        for seed in (1, 2):
            sp = random_space(8, np.random.default_rng(seed))
            out = rothaus_deficit(sp, F, corpus_size=120, rng=np.random.default_rng(seed + 50), refine_steps=40)
            values.append(out["C_Rot_empirical"])
            assert np.isfinite(out["C_Rot_empirical"])
        assert max(values) / min(values) < 5.0

    def test_convexity_gate(self):
        from orliczlab.growth import growth_from_callable

        convex = growth_from_callable(lambda x: np.asarray(x, dtype=float) ** 2, "square")
        with pytest.raises(HypothesisViolation):
            rothaus_deficit(two_point_space(), convex, corpus_size=10)


class TestSampledFallback:
    def test_hardy_large_space_flagged(self):
        rng = np.random.default_rng(20)
        sp = random_space(20, rng)
        omega = tuple(range(18))
        rep = verify_hardy_reduction(sp, omega)
        assert rep["mode"] == "sampled, not exhaustive"
        # the extremal-eigenfunction level sets witness both bracket sides
        assert rep["bracket_ok"]

    def test_fsobcap_large_space_flagged(self):
        rng = np.random.default_rng(21)
        sp = random_space(18, rng)
        F = lambda x: 1.0 if x >= 2.0 else 0.0
        out = verify_fsobcap(sp, F, 4.0, rng=rng)
        assert out["mode"] == "sampled, not exhaustive"
        assert out["passed"]


class TestCutoffTighten:
    def test_direct_inequality(self):
        rng = np.random.default_rng(12)
        sp = random_space(7, rng)
        Ft = f_alpha_tilde(1.5, 2.0)
        # the cutoff form vanishes on [0, 2 rho] = [0, rho_t^2] with rho_t = 2
        F_eval = lambda x: float(Ft.evaluate(np.asarray(x)))
        out = verify_cutoff_tighten(sp, F_eval, rho=2.0, corpus_size=150, rng=rng)
        assert out["passed"]
