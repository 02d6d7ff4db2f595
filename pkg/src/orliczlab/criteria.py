"""One-dimensional criterion constants for Poincare, Beckner (fixed-p and
generalized), additive phi-Sobolev, and Rosen-type inequalities.

Every constant is a supremum, over half-lines anchored at the median, of a
weight of the form

    mu(tail beyond x) * shape(tail) * int_median^x 1/density,

computed on a log-spaced grid with golden-section refinement.  Each report
carries the bracketing factors of the governing comparison theorem, so a
reported B means the true inequality constant lies in
[lower_factor * B, upper_factor * B].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, HypothesisViolation, SandwichViolation, UnboundedSupremum
from .measures import LineMeasure, Potential

__all__ = [
    "CriterionReport",
    "TFunction",
    "power_T",
    "constant_T",
    "t_from_convex_rate",
    "ttilde",
    "ttilde_log",
    "poincare_B",
    "beckner_B",
    "beckner_BT",
    "phi_sobolev_D",
    "rosen_D",
    "asymptotic_check",
    "capacity_half_line",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CriterionReport:
    """A computed criterion constant with its extremizer and bracketing."""

    family: str
    constant_value: float
    extremizer_x: float
    side: str                      # plus | minus | max
    bracket_lower: float           # inequality constant >= bracket_lower * constant_value
    bracket_upper: float           # inequality constant <= bracket_upper * constant_value
    convention: str = ""
    governing_result: str = ""
    extra: dict = field(default_factory=dict)
    grid_stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "constant": self.constant_value,
            "extremizer": self.extremizer_x,
            "side": self.side,
            "bracket_lo": self.bracket_lower,
            "bracket_hi": self.bracket_upper,
            "convention": self.convention,
            "governing_result": self.governing_result,
            "extra": dict(self.extra),
            "grid_stats": dict(self.grid_stats),
        }


@dataclass(frozen=True)
class TFunction:
    """Rate function T on [0, 1] with T(0) = 0, nondecreasing."""

    evaluate: Callable[[np.ndarray], np.ndarray]
    description: str = "T"
    nondecreasing_flag: bool = True
    zero_at_zero: bool = True
    ratio_monotone_flag: bool = False   # T(x)/x non-increasing

    def __call__(self, x):
        return self.evaluate(np.asarray(x, dtype=float))

    def verify_flags(self, points: int = 200) -> None:
        xs = np.linspace(1e-9, 1.0, points)
        vals = self.evaluate(xs)
        if self.nondecreasing_flag and np.any(np.diff(vals) < -1e-12):
            raise HypothesisViolation(f"{self.description}: claimed nondecreasing but is not")
        if self.zero_at_zero and abs(float(self.evaluate(np.asarray(1e-12)))) > 1e-6:
            raise HypothesisViolation(f"{self.description}: claimed T(0)=0 but T(1e-12) is not small")
        if self.ratio_monotone_flag:
            ratio = vals / xs
            if np.any(np.diff(ratio) > 1e-6 * np.abs(ratio[:-1])):
                raise HypothesisViolation(f"{self.description}: claimed T(x)/x non-increasing but is not")


def power_T(beta: float, coefficient: float = 1.0) -> TFunction:
    """T(x) = coefficient * x^beta, 0 < beta <= 1."""
    if not 0.0 < beta <= 1.0:
        raise DomainError("power_T needs beta in (0, 1]")
    return TFunction(
        evaluate=lambda x: coefficient * np.asarray(x, dtype=float) ** beta,
        description=f"power_T({beta},{coefficient})",
        ratio_monotone_flag=True,
    )


def constant_T(value: float = 1.0) -> TFunction:
    """Constant rate; violates T(0)=0 and is flagged accordingly."""
    return TFunction(
        evaluate=lambda x: np.full_like(np.asarray(x, dtype=float), value),
        description=f"constant_T({value})",
        zero_at_zero=False,
        ratio_monotone_flag=True,
    )


def t_from_convex_rate(phi_eval, phi_prime, phi_inverse, description: str = "T(Phi)") -> TFunction:
    """T(x) = 1 / Phi'(Phi^{-1}(1/x))^2 for an increasing convex rate Phi."""

    def _t(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0
        if np.any(pos):
            y = phi_inverse(1.0 / x[pos])
            out[pos] = 1.0 / np.asarray(phi_prime(y)) ** 2
        return out

    return TFunction(evaluate=_t, description=description, ratio_monotone_flag=True)


def ttilde_log(T: TFunction, logX: float, grid_points: int = 160, refine_iters: int = 60) -> tuple:
    """sup over p in (1,2) of (1 - X^{(p-2)/p}) / T(2-p), parametrized by
    b = (2-p)/p in (0,1); X is passed as log(X) for stability.

    Returns (value, b_at_max).
    """
    if logX <= 0:
        raise DomainError("needs X > 1")

    def val(b):
        num = -np.expm1(-b * logX)
        den = T(2.0 * b / (1.0 + b))
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(den > 0, num / den, -np.inf)

    bs = np.concatenate([np.geomspace(1e-9, 0.5, grid_points // 2), np.linspace(0.5, 1.0 - 1e-9, grid_points // 2)])
    vals = val(bs)
    i = int(np.nanargmax(vals))
    lo = bs[max(i - 1, 0)]
    hi = bs[min(i + 1, bs.size - 1)]
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    for _ in range(refine_iters):
        if val(np.asarray(c)) > val(np.asarray(d)):
            b, d = d, c
            c = b - _GOLDEN * (b - a)
        else:
            a, c = c, d
            d = a + _GOLDEN * (b - a)
        if b - a < 1e-14:
            break
    bstar = 0.5 * (a + b)
    return float(max(val(np.asarray(bstar)), vals[i])), float(bstar)


def ttilde(T: TFunction, X: float) -> float:
    """The transformed rate at X >= e, with the two-sided consistency check
    1/(3 T(1/log X)) <= value <= 1/T(1/log X) asserted when T(x)/x is
    non-increasing."""
    if X < math.e:
        raise DomainError("ttilde defined for X >= e")
    value, _ = ttilde_log(T, math.log(X))
    if T.ratio_monotone_flag and T.zero_at_zero and T.nondecreasing_flag:
        bound = float(T(np.asarray(1.0 / math.log(X))))
        if bound > 0:
            if value < 1.0 / (3.0 * bound) * (1 - 1e-9) or value > (1.0 / bound) * (1 + 1e-9):
                raise SandwichViolation(f"ttilde({X}) = {value} outside [1/(3T), 1/T] with T(1/logX)={bound}")
    return value


def _sup_half_line(measure: LineMeasure, weight_of_tail: Callable[[float], float], side: str, grid_points: int = 240, refine_iters: int = 48):
    """Supremum over a half-line of tail * shape(tail) * invdensity.

    weight_of_tail maps the tail mass a in (0, 1/2] to the shape factor.
    Returns (sup, x_at_sup) and raises UnboundedSupremum when the weight is
    still rising at the truncation edge and dominates the interior.
    """
    m = measure.median
    lo_edge, hi_edge = measure.support
    if side == "plus":
        span = hi_edge - m
        xs = m + np.geomspace(span * 1e-7, span * (1.0 - 1e-9), grid_points)
        tail_fn = measure.tail
        inv_fn = lambda x: measure.inv_density_integral(m, x)
    else:
        span = m - lo_edge
        xs = m - np.geomspace(span * 1e-7, span * (1.0 - 1e-9), grid_points)
        tail_fn = measure.cdf
        inv_fn = lambda x: measure.inv_density_integral(x, m)

    def w(x):
        a = float(tail_fn(x))
        if a <= 0.0:
            return 0.0
        return a * weight_of_tail(a) * inv_fn(x)

    vals = np.array([w(x) for x in xs])
    interior = vals[: int(grid_points * 0.8)]
    interior_max = float(np.max(interior)) if interior.size else 0.0
    if vals[-1] >= 10.0 * max(interior_max, 1e-300) and vals[-1] > vals[-2] > vals[-3]:
        raise UnboundedSupremum(f"half-line weight still rising at truncation ({side} side): edge {vals[-1]:.3e} vs interior {interior_max:.3e}")
    i = int(np.argmax(vals))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, xs.size - 1)]
    if a > b:
        a, b = b, a
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = w(c), w(d)
    for _ in range(refine_iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = w(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = w(d)
        if abs(b - a) <= 1e-12 * (1.0 + abs(b)):
            break
    xstar = 0.5 * (a + b)
    best = max(float(vals[i]), w(xstar))
    return best, float(xstar if w(xstar) >= vals[i] else xs[i]), {"grid_points": int(grid_points), "edge_value": float(vals[-1]), "interior_max": interior_max}


def _two_sided(measure, weight_of_tail, family, bracket, convention, governing, extra=None):
    vp, xp, gp = _sup_half_line(measure, weight_of_tail, "plus")
    if measure.potential.symmetry_flag:
        vm, xm, gm = vp, 2.0 * measure.median - xp, gp
    else:
        vm, xm, gm = _sup_half_line(measure, weight_of_tail, "minus")
    if vp >= vm:
        value, x, side = vp, xp, "plus"
    else:
        value, x, side = vm, xm, "minus"
    ex = dict(extra or {})
    ex.update({"B_plus": vp, "B_minus": vm})
    return CriterionReport(
        family=family,
        constant_value=value,
        extremizer_x=x,
        side=side,
        bracket_lower=bracket[0],
        bracket_upper=bracket[1],
        convention=convention,
        governing_result=governing,
        extra=ex,
        grid_stats=gp,
    )


def _convention(measure: LineMeasure) -> str:
    return f"density ~ exp(-{measure.scale_in_exponent:g}*V), V={measure.potential.name}"


def poincare_B(measure: LineMeasure) -> CriterionReport:
    """Two-sided Muckenhoupt constant; the Poincare constant lies in
    [B, 4B]."""
    return _two_sided(
        measure,
        lambda a: 1.0,
        family="poincare",
        bracket=(1.0, 4.0),
        convention=_convention(measure),
        governing="muckenhoupt_two_sided_spectral_gap",
    )


def beckner_B(measure: LineMeasure, p: float) -> CriterionReport:
    """Fixed-p interpolation constant; the inequality constant lies in
    [B(p)/2, 20 B(p)]."""
    if not 1.0 < p < 2.0:
        raise DomainError("p must lie in (1, 2)")
    expo = (p - 2.0) / p

    def shape(a):
        return -math.expm1(expo * math.log1p(1.0 / a))

    rep = _two_sided(
        measure,
        shape,
        family="beckner_p",
        bracket=(0.5, 20.0),
        convention=_convention(measure),
        governing="fixed_p_capacity_bracket",
        extra={"p": p},
    )
    return rep


def beckner_BT(measure: LineMeasure, T: TFunction) -> CriterionReport:
    """Generalized interpolation constant B(T) with the transformed rate;
    the inequality constant lies in [B(T)/2, 20 B(T)]."""
    T.verify_flags()

    def shape(a):
        logX = math.log1p(1.0 / a)
        value, _ = ttilde_log(T, logX)
        if T.ratio_monotone_flag and T.zero_at_zero and logX >= 1.0:
            bound = float(T(np.asarray(1.0 / logX)))
            if bound > 0 and (value < (1 - 1e-9) / (3.0 * bound) or value > (1 + 1e-9) / bound):
                raise SandwichViolation(f"transformed rate left its two-sided band at tail={a:.3e}")
        return value

    return _two_sided(
        measure,
        shape,
        family="beckner_T",
        bracket=(0.5, 20.0),
        convention=_convention(measure),
        governing="generalized_rate_capacity_bracket",
        extra={"T": T.description},
    )


def phi_sobolev_D(measure: LineMeasure, phi, gamma: float, M: float, phi_at_8: Optional[float] = None) -> CriterionReport:
    """Additive phi-Sobolev constant D = max(D+, D-) for a concave
    nondecreasing phi with x*phi'(x) <= gamma and
    phi(xy) <= M + phi(x) + phi(y).

    The report's extra carries the assembled inequality constant
    144*gamma*B + 24*(1 + M/phi(8))*D.
    """
    lo = phi(np.asarray(8.0)) if phi_at_8 is None else phi_at_8
    lo = float(lo)
    if lo <= 0:
        raise HypothesisViolation("phi(8) must be positive")
    xs = np.geomspace(1e-3, 1e9, 200)
    slopes = xs * np.asarray(phi.derivative1(xs) if hasattr(phi, "derivative1") else np.gradient(phi(xs), xs))
    slopes = slopes[np.isfinite(slopes)]
    worst = float(np.max(slopes))
    if worst > gamma * (1 + 1e-4) + 1e-9:
        raise HypothesisViolation(f"x*phi'(x) reaches {worst:.4g} > gamma={gamma} near the scan maximum")
    # submultiplicative-shift probe on a coarse grid
    g = np.geomspace(0.1, 1e4, 25)
    lhs = phi(np.outer(g, g))
    rhs = M + phi(g)[:, None] + phi(g)[None, :]
    if np.any(lhs > rhs + 1e-9):
        raise HypothesisViolation("phi(xy) <= M + phi(x) + phi(y) fails on the probe grid")

    def shape(a):
        return float(phi(np.asarray(2.0 / a)))

    rep = _two_sided(
        measure,
        shape,
        family="phi_sobolev",
        bracket=(0.0, 24.0 * (1.0 + M / lo)),
        convention=_convention(measure),
        governing="additive_phi_capacity_criterion",
        extra={"gamma": gamma, "M": M},
    )
    b_rep = poincare_B(measure)
    total = 144.0 * gamma * b_rep.constant_value + 24.0 * (1.0 + M / lo) * rep.constant_value
    extra = dict(rep.extra)
    extra.update({"B": b_rep.constant_value, "assembled_constant": total})
    return CriterionReport(
        family=rep.family,
        constant_value=rep.constant_value,
        extremizer_x=rep.extremizer_x,
        side=rep.side,
        bracket_lower=rep.bracket_lower,
        bracket_upper=rep.bracket_upper,
        convention=rep.convention,
        governing_result=rep.governing_result,
        extra=extra,
        grid_stats=rep.grid_stats,
    )


def rosen_D(measure: LineMeasure, beta: float) -> CriterionReport:
    """Log-power entropic constant D = max(D+, D-) with the shape
    log(1 + 2/tail)^beta; the extra carries the final additive constant
    168 * D of the one-dimensional route."""
    if not 0.0 < beta <= 1.0:
        raise DomainError("beta must lie in (0, 1]")

    def shape(a):
        return math.log1p(2.0 / a) ** beta

    rep = _two_sided(
        measure,
        shape,
        family="rosen_beta",
        bracket=(0.0, 168.0),
        convention=_convention(measure),
        governing="log_power_entropy_criterion",
        extra={"beta": beta},
    )
    extra = dict(rep.extra)
    extra["assembled_constant"] = 168.0 * rep.constant_value
    extra["K"] = 168.0
    return CriterionReport(
        family=rep.family,
        constant_value=rep.constant_value,
        extremizer_x=rep.extremizer_x,
        side=rep.side,
        bracket_lower=rep.bracket_lower,
        bracket_upper=rep.bracket_upper,
        convention=rep.convention,
        governing_result=rep.governing_result,
        extra=extra,
        grid_stats=rep.grid_stats,
    )


@dataclass(frozen=True)
class AsymptoticVerdict:
    verdict: str                   # satisfied | violated | inconclusive
    ratios: tuple
    sample_points: tuple
    detail: str = ""

    def to_dict(self):
        return {"verdict": self.verdict, "ratios": list(self.ratios), "sample_points": list(self.sample_points), "detail": self.detail}


def asymptotic_check(potential: Potential, T: TFunction, scale: float = 1.0, z_value: Optional[float] = None, x_start: float = 4.0, n_samples: int = 12, growth: float = 1.9) -> AsymptoticVerdict:
    """Large-x sufficient-condition check for the generalized rate family.

    Samples theta(V + log V' + log Z) / V'^2 with theta(u) = 1/T(1/u) along
    a geometric sequence and classifies the trend; refuses to extrapolate
    when the ratio sequence is still drifting (verdict "inconclusive").
    V here is scale * potential so the convention matches the measure.
    """
    T.verify_flags()
    xs = x_start * growth ** np.arange(n_samples)
    v = scale * np.asarray(potential(xs), dtype=float)
    vp = scale * np.asarray(potential.d1(xs), dtype=float)
    vpp = scale * np.asarray(potential.d2(xs), dtype=float)
    if np.any(vp <= 0):
        return AsymptoticVerdict("violated", (), tuple(xs), "sign(x) V'(x) > 0 fails on the sample")
    curv = vpp / vp**2
    logz = math.log(z_value) if z_value else 0.0

    def theta(u):
        tu = float(T(np.asarray(1.0 / u)))
        if tu <= 0:
            return math.inf
        return 1.0 / tu

    args = v + np.log(vp) + logz
    if np.any(args <= 0):
        return AsymptoticVerdict("inconclusive", (), tuple(xs), "V + log V' + log Z not yet positive at the sample start")
    ratios = np.array([theta(a) for a in args]) / vp**2

    curv_ok = abs(curv[-1]) < 0.05 and abs(curv[-1]) <= abs(curv[0]) + 1e-12
    window = ratios[-4:]
    rising = np.all(np.diff(window) > 0) and window[-1] > 2.0 * ratios[0]
    settled = window.max() <= 1.05 * max(np.median(ratios), 1e-300) or np.all(np.diff(window) <= 1e-12 * window[:-1] + 1e-300)
    if not curv_ok:
        return AsymptoticVerdict("inconclusive", tuple(ratios), tuple(xs), f"V''/V'^2 still {curv[-1]:.3g} at the largest sample")
    if rising:
        if window[-1] > 100.0 * max(ratios[0], 1e-300):
            return AsymptoticVerdict("violated", tuple(ratios), tuple(xs), "ratio grows without sign of saturation")
        return AsymptoticVerdict("inconclusive", tuple(ratios), tuple(xs), "ratio still drifting upward")
    if settled or np.all(np.diff(window) <= 0):
        return AsymptoticVerdict("satisfied", tuple(ratios), tuple(xs), "ratio bounded along the sample")
    return AsymptoticVerdict("inconclusive", tuple(ratios), tuple(xs), "trend unclear")


def capacity_half_line(measure: LineMeasure, x: float) -> float:
    """Capacity of [x, inf) relative to the median half-line: the exact
    reciprocal of the inverse-density integral."""
    if x <= measure.median:
        raise DomainError("needs x > median")
    return 1.0 / measure.inv_density_from_median(x)
