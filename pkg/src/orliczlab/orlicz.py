"""Young functions, numerically computed complementary pairs, and the
gauge (Luxemburg) norm machinery.

Conventions.  For a complementary pair (tau, tau*) the gauge norm used here
is N_tau(f) = inf{k > 0 : I_tau(f/k) <= tau(1)}, so constants have norm 1
under a probability measure regardless of scaling of tau.  The classical
variant with level 1 instead of tau(1) is available via ``level=1.0``.
The dual-style norm sup{int |fg| dmu : N_{tau*}(g) <= 1} is estimated from
below over a parametric candidate family and is reported as a lower
estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy import optimize
from scipy.interpolate import PchipInterpolator

from .errors import ConvexityViolation, DomainError, SingularAtZero, Unbounded
from .measures import LineMeasure

__all__ = [
    "YoungFunction",
    "YoungPair",
    "OrliczSample",
    "power_young",
    "tau_q_young",
    "young_from_table",
    "conjugate",
    "make_pair",
    "normalize_pair",
    "gauge_norm",
    "orlicz_dual_norm",
    "tau_entropy",
    "delta2_check",
    "nabla2_check",
    "duality_sandwich_check",
]


@dataclass(frozen=True)
class YoungFunction:
    """Even convex function vanishing at 0, stored through its restriction
    to the nonnegative axis."""

    evaluate: Callable[[np.ndarray], np.ndarray]
    derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
    description: str = "young"

    def __call__(self, x):
        return self.evaluate(np.abs(np.asarray(x, dtype=float)))

    def d1(self, x):
        x = np.asarray(x, dtype=float)
        if self.derivative is not None:
            return self.derivative(x)
        h = 1e-6 * np.maximum(1.0, x)
        return (self.evaluate(x + h) - self.evaluate(np.maximum(x - h, 0.0))) / (x + h - np.maximum(x - h, 0.0))

    def inverse(self, y, bracket_hint: float = 1.0):
        """Monotone inversion on the nonnegative axis by bracketed root finding."""
        ys = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.empty_like(ys)
        for i, yi in enumerate(ys):
            if yi < 0:
                raise DomainError("inverse defined for nonnegative values")
            if yi == 0.0:
                out[i] = 0.0
                continue
            lo, hi = 0.0, max(bracket_hint, 1.0)
            for _ in range(400):
                if float(self.evaluate(np.asarray(hi))) >= yi:
                    break
                lo, hi = hi, hi * 2.0
            else:
                raise Unbounded("no bracket for Young inverse")
            out[i] = optimize.brentq(lambda u: float(self.evaluate(np.asarray(u))) - yi, lo, hi, xtol=1e-300, rtol=8.9e-16)
        return out if np.ndim(y) else float(out[0])

    def convexity_probe(self, grid: Optional[np.ndarray] = None, tol: float = 1e-9) -> None:
        """Midpoint convexity test; raises ConvexityViolation on failure."""
        if grid is None:
            grid = np.geomspace(1e-6, 1e6, 241)
        a, b = grid[:-1], grid[1:]
        mid = 0.5 * (a + b)
        gap = 0.5 * (self.evaluate(a) + self.evaluate(b)) - self.evaluate(mid)
        scale = np.maximum(1.0, np.abs(self.evaluate(mid)))
        worst = float(np.min(gap / scale))
        if worst < -tol:
            raise ConvexityViolation(f"midpoint convexity violated by {worst:.3e}")


def young_from_table(xs, ys, description: str = "table") -> YoungFunction:
    """Young function from samples on the nonnegative axis: monotone cubic
    in log-log coordinates with power-law extension; the convexity probe
    runs at conjugation time."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = (xs > 0) & (ys > 0)
    xs, ys = xs[keep], ys[keep]
    if xs.size < 4 or np.any(np.diff(xs) <= 0) or np.any(np.diff(ys) <= 0):
        raise DomainError("table Young function needs >= 4 increasing positive samples")
    lx, ly = np.log(xs), np.log(ys)
    interp = PchipInterpolator(lx, ly, extrapolate=False)
    slope_lo = (ly[1] - ly[0]) / (lx[1] - lx[0])
    slope_hi = (ly[-1] - ly[-2]) / (lx[-1] - lx[-2])

    def _f(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0
        clamped = np.clip(np.log(np.where(pos, x, 1.0)), lx[0], lx[-1])
        body = interp(clamped)
        below = pos & (np.log(np.maximum(x, 1e-300)) < lx[0])
        above = pos & (np.log(np.maximum(x, 1e-300)) > lx[-1])
        out[pos] = np.exp(body[pos])
        if np.any(below):
            out[below] = np.exp(ly[0] + slope_lo * (np.log(x[below]) - lx[0]))
        if np.any(above):
            out[above] = np.exp(ly[-1] + slope_hi * (np.log(x[above]) - lx[-1]))
        return out if out.ndim else float(out)

    return YoungFunction(_f, description=description)


def power_young(p: float, coefficient: float = 1.0) -> YoungFunction:
    """tau(x) = coefficient * x^p / p for p > 1."""
    if p <= 1:
        raise DomainError("power Young function needs p > 1")

    def _f(x):
        return coefficient * np.asarray(x, dtype=float) ** p / p

    def _d(x):
        return coefficient * np.asarray(x, dtype=float) ** (p - 1.0)

    return YoungFunction(_f, _d, description=f"power({p},{coefficient})")


def tau_q_young(F, q: float, p: float = 2.0) -> YoungFunction:
    """tau_q(x) = x^p * exp(q F(x^p)) built over a growth function F.

    F must expose ``evaluate`` and ``derivative1`` on the nonnegative axis
    (the fgrowth module objects qualify).
    """
    if q < 0:
        raise DomainError("q must be nonnegative")

    def _f(x):
        x = np.asarray(x, dtype=float)
        xp = x**p
        return xp * np.exp(q * F.evaluate(xp))

    def _d(x):
        scalar = np.ndim(x) == 0
        x = np.atleast_1d(np.asarray(x, dtype=float))
        xp = x**p
        corr = np.ones_like(xp)
        pos = xp > 0
        corr[pos] = 1.0 + q * xp[pos] * F.derivative1(xp[pos])
        out = p * x ** (p - 1.0) * np.exp(q * F.evaluate(xp)) * corr
        return float(out[0]) if scalar else out

    return YoungFunction(_f, _d, description=f"tau_q(p={p},q={q},F={getattr(F, 'description', 'F')})")


def _slope_bracket(tau: YoungFunction, y: float) -> float:
    """x with tau'(x) >= y, found by doubling."""
    hi = 1.0
    for _ in range(600):
        if float(tau.d1(np.asarray(hi))) >= y:
            return hi
        hi *= 2.0
    raise Unbounded("conjugate bracket expansion failed; slope stays below target")


def _conjugate_scalar(tau: YoungFunction, y: float) -> float:
    """sup_x (x y - tau(x)) for a single y > 0."""
    if y <= 0.0:
        return 0.0
    hi = _slope_bracket(tau, y)
    d = lambda u: float(tau.d1(np.asarray(u))) - y
    if d(0.0) >= 0.0:
        xstar = 0.0
    else:
        xstar = optimize.brentq(d, 0.0, hi, xtol=1e-300, rtol=8.9e-16)
    return xstar * y - float(tau.evaluate(np.asarray(xstar)))


def conjugate(tau: YoungFunction, y_min: float = 1e-12, y_max: float = 1e16, points_per_decade: int = 100) -> YoungFunction:
    """Fenchel-Legendre dual tau*(y) = sup_x (xy - tau(x)).

    Solved per grid node through the monotone slope equation tau'(x) = y and
    tabulated on a log grid; evaluation interpolates monotonically in
    log-log coordinates with power-law extension beyond the grid.  Raises
    ConvexityViolation when the sampled slope sequence is not monotone.
    """
    tau.convexity_probe()
    decades = math.log10(y_max / y_min)
    ys = np.geomspace(y_min, y_max, int(decades * points_per_decade) + 1)
    vals = np.array([_conjugate_scalar(tau, float(y)) for y in ys])
    pos = vals > 0.0
    if pos.sum() < 8:
        raise Unbounded("conjugate vanishes on the whole grid")
    ys_p, vals_p = ys[pos], vals[pos]
    if np.any(np.diff(vals_p) <= 0.0):
        raise ConvexityViolation("conjugate values are not increasing on the grid")
    ly, lv = np.log(ys_p), np.log(vals_p)
    interp = PchipInterpolator(ly, lv, extrapolate=False)
    slope_lo = (lv[1] - lv[0]) / (ly[1] - ly[0])
    slope_hi = (lv[-1] - lv[-2]) / (ly[-1] - ly[-2])

    def _eval(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        inside = (x >= ys_p[0]) & (x <= ys_p[-1])
        lo = (x < ys_p[0]) & (x > 0)
        hi = x > ys_p[-1]
        if np.any(inside):
            out[inside] = np.exp(interp(np.log(x[inside])))
        if np.any(lo):
            out[lo] = np.exp(lv[0] + slope_lo * (np.log(x[lo]) - ly[0]))
        if np.any(hi):
            out[hi] = np.exp(lv[-1] + slope_hi * (np.log(x[hi]) - ly[-1]))
        return out if out.ndim else float(out)

    # derivative of the dual at y is the maximizer x*(y); recover it from
    # the interpolant's log-slope: (tau*)'(y) = tau*(y)/y * dlog
    dinterp = interp.derivative()

    def _d(x):
        x = np.asarray(x, dtype=float)
        lx = np.log(np.clip(x, ys_p[0], ys_p[-1]))
        dlog = np.clip(dinterp(lx), 1.0, 50.0)
        return _eval(x) / np.maximum(x, 1e-300) * dlog

    return YoungFunction(_eval, _d, description=f"conjugate({tau.description})")


@dataclass(frozen=True)
class YoungPair:
    """A Young function with its complementary dual and growth certificates."""

    tau: YoungFunction
    tau_star: YoungFunction
    normalized_flag: bool = False
    normalization_scalar: float = 1.0
    delta2: Optional[tuple] = None   # (K, y1) when certified
    nabla2: Optional[tuple] = None   # (l, y1) when certified
    description: str = "pair"

    @property
    def tau1(self) -> float:
        return float(self.tau.evaluate(np.asarray(1.0)))

    @property
    def tau_star1(self) -> float:
        return float(self.tau_star.evaluate(np.asarray(1.0)))


def make_pair(tau: YoungFunction, tau_star: Optional[YoungFunction] = None, description: str = "") -> YoungPair:
    """Build a pair, computing the dual numerically when not supplied."""
    star = tau_star if tau_star is not None else conjugate(tau)
    return YoungPair(tau=tau, tau_star=star, description=description or tau.description)


def normalize_pair(pair: YoungPair) -> YoungPair:
    """Rescale tau -> c*tau so that tau(1) + tau*(1) = 1.

    Young's inequality forces c*tau(1) + c*tau*(1/c) >= c * (1 * 1/c) = 1
    for every c > 0, with equality exactly when the dual pairing is tight
    at (1, 1/c), i.e. 1/c = tau'(1).  The scalar is therefore c = 1/tau'(1)
    in closed form; the unnormalized pair stays recoverable through it.
    """
    tau, star = pair.tau, pair.tau_star
    slope = float(tau.d1(np.asarray(1.0)))
    if not np.isfinite(slope) or slope <= 0:
        raise Unbounded("tau'(1) must be positive and finite to normalize")
    c = 1.0 / slope

    new_tau = YoungFunction(lambda x, _c=c: _c * tau.evaluate(x), (lambda x, _c=c: _c * tau.d1(x)), description=f"{c:.6g}*{tau.description}")
    new_star = YoungFunction(lambda y, _c=c: _c * star.evaluate(np.asarray(y) / _c), (lambda y, _c=c: star.d1(np.asarray(y) / _c)), description=f"dual of {c:.6g}*{tau.description}")
    out = replace(pair, tau=new_tau, tau_star=new_star, normalized_flag=True, normalization_scalar=c)
    if abs(out.tau1 + out.tau_star1 - 1.0) > 1e-7:
        raise Unbounded(f"normalization check failed: tau(1)+tau*(1)={out.tau1 + out.tau_star1}")
    return out


@dataclass(frozen=True)
class OrliczSample:
    """A function paired with a probability rule (values and weights)."""

    values: np.ndarray
    weights: np.ndarray
    measure_tag: str = "atoms"

    @classmethod
    def from_callable(cls, measure: LineMeasure, fn: Callable[[np.ndarray], np.ndarray], tag: str = "") -> "OrliczSample":
        return cls(values=np.asarray(fn(measure.atom_x), dtype=float), weights=measure.atom_w, measure_tag=tag or measure.potential.name)

    @classmethod
    def from_atoms(cls, values, weights, tag: str = "atoms") -> "OrliczSample":
        v = np.asarray(values, dtype=float)
        w = np.asarray(weights, dtype=float)
        if v.shape != w.shape:
            raise DomainError("values and weights must share a shape")
        if abs(float(w.sum()) - 1.0) > 1e-8:
            raise DomainError("weights must sum to 1")
        return cls(values=v, weights=w, measure_tag=tag)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.dot(self.weights, self.values**2)))

    def modular(self, tau: YoungFunction, k: float = 1.0) -> float:
        """I_tau(f/k) = int tau(|f|/k) dmu."""
        return float(np.dot(self.weights, tau(np.abs(self.values) / k)))


def gauge_norm(f: OrliczSample, pair: YoungPair, level: Optional[float] = None, tol: float = 1e-10, max_iter: int = 60) -> float:
    """Luxemburg gauge N(f) = inf{k : I_tau(f/k) <= level}, level = tau(1).

    Bisection on k with geometric bracket expansion seeded at the L2 norm;
    I_tau(f/k) is non-increasing in k so the root is simple.
    """
    target = pair.tau1 if level is None else float(level)
    if not np.any(f.values):
        return 0.0
    k0 = max(f.l2_norm(), 1e-300)
    hi = k0
    for _ in range(1100):
        if f.modular(pair.tau, hi) <= target:
            break
        hi *= 2.0
    else:
        raise Unbounded("gauge bracket expansion failed upward")
    lo = hi if hi < k0 else k0
    for _ in range(1100):
        if f.modular(pair.tau, lo) >= target:
            break
        lo *= 0.5
    else:
        return 0.0  # modular stays below the level for every scaling
    for _ in range(max_iter):
        mid = math.sqrt(lo * hi)
        if f.modular(pair.tau, mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * hi:
            break
    return hi


def orlicz_dual_norm(f: OrliczSample, pair: YoungPair, level: Optional[float] = None, n_candidates: int = 25) -> float:
    """Lower estimate of sup{int |fg| dmu : N_{tau*}(g) <= 1}.

    Candidates: the constant 1, indicator plateaus of |f| level sets, and
    slope-shaped g = tau'(|f|/lambda), each rescaled to unit dual gauge.
    Always at most the gauge norm of f (up to root-finding slack).
    """
    target = pair.tau_star1 if level is None else float(level)
    av = np.abs(f.values)
    w = f.weights
    # constant candidate at exact unit dual gauge: g = (tau*)^{-1}(target)
    c0 = float(pair.tau_star.inverse(target))
    best = float(np.dot(w, av)) * c0
    gauge_star = lambda g: gauge_norm(OrliczSample(g, w, f.measure_tag), YoungPair(pair.tau_star, pair.tau), level=target)

    qs = np.quantile(av[av > 0], np.linspace(0.05, 0.98, 12)) if np.any(av > 0) else []
    for q in qs:
        g = (av >= q).astype(float)
        mass = float(np.dot(w, g))
        if mass <= 0:
            continue
        c = float(pair.tau_star.inverse(target / mass))
        cand = float(np.dot(w, av * g * c))
        nstar = gauge_star(g * c)
        if nstar > 0:
            best = max(best, cand / max(nstar, 1.0))
    nf = gauge_norm(f, pair)
    if nf > 0:
        for lam in np.geomspace(nf * 0.2, nf * 5.0, n_candidates):
            g = pair.tau.d1(av / lam)
            if not np.all(np.isfinite(g)) or not np.any(g > 0):
                continue
            nstar = gauge_star(g)
            if nstar <= 0 or not np.isfinite(nstar):
                continue
            best = max(best, float(np.dot(w, av * g)) / nstar)
    return best


def tau_entropy(f: OrliczSample, pair: YoungPair, zero_probe: float = 1e-8) -> float:
    """Entropy functional int fh^2 log((tau*)^{-1}(tau*(1) fh^2) / |fh|) dmu
    with fh = f / ||f||_2; invariant under scaling of f.

    Raises SingularAtZero when the integrand fails to extend continuously
    at the origin (probed on a small-argument grid).
    """
    n2 = f.l2_norm()
    if n2 <= 0:
        raise DomainError("tau_entropy needs a nonzero sample")
    level = pair.tau_star1

    def integrand_of(y):
        y = np.asarray(y, dtype=float)
        out = np.zeros_like(y)
        pos = y > 0
        if np.any(pos):
            inv = pair.tau_star.inverse(level * y[pos] ** 2)
            out[pos] = y[pos] ** 2 * np.log(np.asarray(inv) / y[pos])
        return out

    probe = integrand_of(np.geomspace(zero_probe, 1e-2, 24))
    if not np.all(np.isfinite(probe)) or np.max(np.abs(probe)) > 1.0:
        raise SingularAtZero("entropy integrand does not vanish near 0")

    yh = np.abs(f.values) / n2
    return float(np.dot(f.weights, integrand_of(yh)))


def delta2_check(tau: YoungFunction, y_min: float = 1e-6, y_max: float = 1e9, points: int = 400):
    """Scan for tau(2y) <= K tau(y) beyond an onset y1.

    Returns (K, y1) on success or None with the worst ratio attached via a
    second return value: (None, worst_ratio) signals failure.
    """
    ys = np.geomspace(y_min, y_max, points)
    with np.errstate(over="ignore", invalid="ignore"):
        ratio = tau.evaluate(2.0 * ys) / tau.evaluate(ys)
    finite = np.isfinite(ratio)
    if not finite.all():
        return None, float(np.nanmax(ratio[finite])) if finite.any() else math.inf
    k_top = float(np.max(ratio[-max(8, points // 10):]))
    tail_rising = ratio[-1] > 4.0 * np.median(ratio) and ratio[-1] >= np.max(ratio) * (1 - 1e-12) and ratio[-1] > ratio[-2] > ratio[-3]
    if tail_rising:
        return None, float(ratio[-1])
    # smallest onset achieving the top-of-scan constant (with tiny slack)
    K = max(1.0 + 1e-12, float(np.max(ratio[-max(8, points // 10):])) * (1 + 1e-12))
    ok = ratio <= K
    idx = np.where(~ok)[0]
    y1 = 0.0 if idx.size == 0 else float(ys[idx[-1] + 1]) if idx[-1] + 1 < ys.size else None
    if y1 is None:
        return None, float(ratio[-1])
    return (K, y1), None


def nabla2_check(tau: YoungFunction, y_min: float = 1e-6, y_max: float = 1e9, points: int = 300):
    """Scan for 2*l*tau(y) <= tau(l*y) for some l > 1 beyond an onset."""
    ys = np.geomspace(y_min, y_max, points)
    for l in (2.0, 3.0, 4.0, 8.0):
        with np.errstate(over="ignore"):
            ratio = tau.evaluate(l * ys) / np.maximum(tau.evaluate(ys), 1e-300)
        ok = ratio >= 2.0 * l
        if ok[-1]:
            idx = np.where(~ok)[0]
            y1 = 0.0 if idx.size == 0 else float(ys[min(idx[-1] + 1, ys.size - 1)])
            return (l, y1), None
    return None, float(np.min(ratio))


def duality_sandwich_check(pair: YoungPair, y_values: Optional[np.ndarray] = None, rel_slack: float = 1e-7):
    """Verify y <= tau^{-1}(y) (tau*)^{-1}(y) <= 2y on a log grid.

    Returns the worst lower and upper relative margins (>= -rel_slack each
    when the pair is consistent).
    """
    if y_values is None:
        y_values = np.geomspace(1e-6, 1e6, 40)
    lower_margin = math.inf
    upper_margin = math.inf
    for y in y_values:
        prod = float(pair.tau.inverse(y)) * float(pair.tau_star.inverse(y))
        lower_margin = min(lower_margin, prod / y - 1.0)
        upper_margin = min(upper_margin, 2.0 - prod / y)
    ok = bool(lower_margin >= -rel_slack and upper_margin >= -rel_slack)
    return ok, float(lower_margin), float(upper_margin)
