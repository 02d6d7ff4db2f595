"""Growth functions F for F-Sobolev inequalities and their executable
hypothesis checkers.

The two built-in families are the shifted iterated-log power

    f_alpha:   F(x) = log(1+x)^beta - log(2)^beta,     beta = 2(1 - 1/alpha),

which vanishes at 1, and its cutoff variant

    f_alpha_tilde:  F(x) = 0 on [0, 2*rho],
                    log(x)^beta - log(2*rho)^beta beyond,

plus log and user-supplied functions.  Checkers certify the differential
condition x F'' + (2 + 1/p - k/2) F' >= 0, the mollified variant, the pair
of logarithmic comparison constants (c1, c2), and the bounded-slope
hypothesis sup u F'(u).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

__all__ = [
    "FGrowth",
    "MollifierSpec",
    "f_alpha",
    "f_alpha_tilde",
    "log_growth",
    "growth_from_callable",
    "check_fcond",
    "mollify",
    "check_c1c2",
    "rothaus_slope_bound",
    "lambda_for_cutoff",
    "check_lambda_condition",
    "CheckReport",
]


@dataclass(frozen=True)
class FGrowth:
    """A non-decreasing growth function on [0, inf) with derivatives.

    ``cutoff_rho`` marks cutoff-type functions vanishing on [0, 2*rho];
    their seam at 2*rho is a non-smooth locus and derivatives there are
    one-sided.  ``c1``/``c2`` hold certified comparison constants
    F(x) <= c1*log(x) and F(x^2) <= c2*F(x) for x >= 1, when known.
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    derivative1: Callable[[np.ndarray], np.ndarray]
    derivative2: Callable[[np.ndarray], np.ndarray]
    description: str = "F"
    nondecreasing_flag: bool = True
    value_at_1: Optional[float] = None
    cutoff_rho: Optional[float] = None
    c1: Optional[float] = None
    c2: Optional[float] = None

    def __call__(self, x):
        return self.evaluate(np.asarray(x, dtype=float))

    def monotone_probe(self, grid: Optional[np.ndarray] = None, tol: float = 1e-10) -> bool:
        if grid is None:
            grid = np.geomspace(1e-8, 1e9, 300)
        vals = self.evaluate(grid)
        return bool(np.all(np.diff(vals) >= -tol * np.maximum(1.0, np.abs(vals[:-1]))))


def f_alpha(alpha: float) -> FGrowth:
    """Shifted log-power growth with exponent beta = 2(1 - 1/alpha)."""
    if not 1.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (1, 2), got {alpha}")
    beta = 2.0 * (1.0 - 1.0 / alpha)
    l2b = math.log(2.0) ** beta

    def _f(x):
        x = np.asarray(x, dtype=float)
        return np.log1p(x) ** beta - l2b

    def _d1(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = beta * np.log1p(x) ** (beta - 1.0) / (1.0 + x)
        return np.where(x > 0, out, np.inf if beta < 1 else 1.0)

    def _d2(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            l = np.log1p(x)
            out = beta * l ** (beta - 2.0) * ((beta - 1.0) - l) / (1.0 + x) ** 2
        return np.where(x > 0, out, -np.inf)

    return FGrowth(_f, _d1, _d2, description=f"f_alpha({alpha})", value_at_1=0.0, c1=1.0, c2=8.0)


def f_alpha_tilde(alpha: float, rho: float) -> FGrowth:
    """Cutoff log-power growth, zero on [0, 2*rho], continuous at the seam."""
    if not 1.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (1, 2), got {alpha}")
    if rho <= 1.0:
        raise DomainError("rho must exceed 1")
    beta = 2.0 * (1.0 - 1.0 / alpha)
    edge = math.log(2.0 * rho) ** beta

    def _f(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            body = np.log(np.maximum(x, 2.0 * rho)) ** beta - edge
        return np.where(x <= 2.0 * rho, 0.0, body)

    def _d1(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            body = beta * np.log(np.maximum(x, 2.0 * rho)) ** (beta - 1.0) / np.maximum(x, 2.0 * rho)
        return np.where(x <= 2.0 * rho, 0.0, body)

    def _d2(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            l = np.log(np.maximum(x, 2.0 * rho))
            body = beta * l ** (beta - 2.0) * ((beta - 1.0) - l) / np.maximum(x, 2.0 * rho) ** 2
        return np.where(x <= 2.0 * rho, 0.0, body)

    return FGrowth(_f, _d1, _d2, description=f"f_alpha_tilde({alpha},{rho})", value_at_1=0.0, cutoff_rho=rho)


def log_growth() -> FGrowth:
    def _f(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return np.log(x)

    return FGrowth(
        _f,
        lambda x: 1.0 / np.asarray(x, dtype=float),
        lambda x: -1.0 / np.asarray(x, dtype=float) ** 2,
        description="log",
        value_at_1=0.0,
    )


def growth_from_callable(fn: Callable, name: str = "custom", h: float = 1e-5) -> FGrowth:
    """Wrap a plain callable; derivatives fall back to central differences."""

    def _d1(x):
        x = np.asarray(x, dtype=float)
        step = h * np.maximum(1.0, x)
        return (fn(x + step) - fn(np.maximum(x - step, 0.0))) / (x + step - np.maximum(x - step, 0.0))

    def _d2(x):
        x = np.asarray(x, dtype=float)
        step = (h * np.maximum(1.0, x)) ** 0.5 * np.maximum(1.0, x) ** 0.5
        return (fn(x + step) - 2.0 * fn(x) + fn(np.maximum(x - step, 0.0))) / step**2

    return FGrowth(lambda x: np.asarray(fn(np.asarray(x, dtype=float))), _d1, _d2, description=name)


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a grid-verified inequality."""

    passed: bool
    worst_margin: float
    worst_location: float
    detail: str = ""


def check_fcond(F: FGrowth, p: float, k: float, grid: Optional[np.ndarray] = None) -> CheckReport:
    """Grid check of x F''(x) + (2 + 1/p - k/2) F'(x) >= 0.

    The ceiling k <= 4(p-1)/p is required for the curvature conclusion on
    the whole x^p e^{qF(x^p)} family (the q=0 member forces it); it is
    reported in the detail rather than enforced, since the displayed
    differential inequality itself is meaningful for any k.  Cutoff seams
    are skipped (non-smooth locus).
    """
    if p <= 1:
        raise DomainError("p must exceed 1")
    if grid is None:
        grid = np.geomspace(1e-6, 1e9, 600)
    ceiling_ok = k <= 4.0 * (p - 1.0) / p + 1e-12
    detail = "" if ceiling_ok else f"k={k:g} exceeds ceiling 4(p-1)/p={4*(p-1)/p:g}; curvature conclusion clamps there"
    if F.cutoff_rho is not None:
        seam = 2.0 * F.cutoff_rho
        grid = grid[np.abs(grid / seam - 1.0) > 1e-6]
        detail = (detail + "; " if detail else "") + f"seam at {seam:g} skipped (non-smooth locus)"
    coef = 2.0 + 1.0 / p - k / 2.0
    vals = grid * F.derivative2(grid) + coef * F.derivative1(grid)
    finite = np.isfinite(vals)
    vals, locs = vals[finite], grid[finite]
    i = int(np.argmin(vals))
    return CheckReport(passed=bool(vals[i] >= -1e-12), worst_margin=float(vals[i]), worst_location=float(locs[i]), detail=detail)


# fixed polynomial bump (1 - (2t+1)^2)^4 on [-1, 0], unit mass
_BUMP_NORM = 315.0 / 128.0
_GL64_NODES, _GL64_WEIGHTS = np.polynomial.legendre.leggauss(64)


@dataclass(frozen=True)
class MollifierSpec:
    """Rescaled bump g_eps(t) = (1/eps) g(t/eps) supported on [-eps, 0]."""

    epsilon: float

    def __post_init__(self):
        if self.epsilon <= 0:
            raise DomainError("epsilon must be positive")

    def bump(self, t):
        """Unit-mass profile on [-1, 0]."""
        t = np.asarray(t, dtype=float)
        s = 2.0 * t + 1.0
        core = _BUMP_NORM * (1.0 - s**2) ** 4
        return np.where((t >= -1.0) & (t <= 0.0), core, 0.0)

    def density(self, y):
        return self.bump(np.asarray(y, dtype=float) / self.epsilon) / self.epsilon

    def mass(self) -> float:
        half = 0.5 * self.epsilon
        nodes = -half + half * _GL64_NODES
        return float(np.sum(half * _GL64_WEIGHTS * self.density(nodes)))


def _convolve(F: FGrowth, spec: MollifierSpec, x: np.ndarray, order: int = 0) -> np.ndarray:
    """(F * g_eps)(x) and derivatives, integrating in y over [-eps, 0].

    Splits the quadrature interval at the cutoff seam so the rule only ever
    sees smooth integrands.  order 1 and 2 differentiate F (one-sided values
    at the seam do not matter on a null set).
    """
    eps = spec.epsilon
    deriv = {0: F.evaluate, 1: F.derivative1, 2: F.derivative2}[order]
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    seam = 2.0 * F.cutoff_rho if F.cutoff_rho is not None else None
    for i, xi in enumerate(x):
        pieces = [(-eps, 0.0)]
        if seam is not None and xi - seam > -eps and xi - seam < 0.0:
            cut = xi - seam
            pieces = [(-eps, cut), (cut, 0.0)]
        total = 0.0
        for a, b in pieces:
            half = 0.5 * (b - a)
            mid = 0.5 * (a + b)
            ys = mid + half * _GL64_NODES
            total += float(np.sum(half * _GL64_WEIGHTS * deriv(xi - ys) * spec.density(ys)))
        out[i] = total
    return out


def mollify(F: FGrowth, spec: MollifierSpec) -> FGrowth:
    """Smooth convolution F * g_eps of a cutoff-type growth function.

    Vanishes exactly on [0, 2*rho - eps]; requires eps < 2*rho - 1.
    """
    if F.cutoff_rho is None:
        raise DomainError("mollify expects a cutoff-type growth function")
    if spec.epsilon >= 2.0 * F.cutoff_rho - 1.0:
        raise DomainError("epsilon too large for the cutoff")
    left_edge = 2.0 * F.cutoff_rho - spec.epsilon

    def _f0(x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        vals = _convolve(F, spec, xs, order=0)
        vals = np.where(xs <= left_edge, 0.0, vals)
        return vals if np.ndim(x) else float(vals[0])

    def _f1(x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        vals = _convolve(F, spec, xs, order=1)
        vals = np.where(xs <= left_edge, 0.0, vals)
        return vals if np.ndim(x) else float(vals[0])

    def _f2(x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        vals = _convolve(F, spec, xs, order=2)
        vals = np.where(xs <= left_edge, 0.0, vals)
        return vals if np.ndim(x) else float(vals[0])

    return FGrowth(
        _f0,
        _f1,
        _f2,
        description=f"mollified({F.description}, eps={spec.epsilon})",
        value_at_1=0.0,
        cutoff_rho=None,
    )


def lambda_for_cutoff(alpha: float, rho: float) -> float:
    """Damping coefficient 1 + (2 - alpha)/(alpha log(2 rho)) for the
    cutoff family; x F'' + lambda F' >= 0 holds off the seam."""
    return 1.0 + (2.0 - alpha) / (alpha * math.log(2.0 * rho))


def check_lambda_condition(F: FGrowth, lam: float, grid: Optional[np.ndarray] = None, skip_seam: Optional[float] = None) -> CheckReport:
    """Grid check of x F''(x) + lambda F'(x) >= 0."""
    if grid is None:
        grid = np.geomspace(1e-3, 1e9, 500)
    if skip_seam is not None:
        grid = grid[np.abs(grid / skip_seam - 1.0) > 1e-6]
    vals = grid * F.derivative2(grid) + lam * F.derivative1(grid)
    finite = np.isfinite(vals)
    vals, locs = vals[finite], grid[finite]
    i = int(np.argmin(vals))
    return CheckReport(passed=bool(vals[i] >= -1e-10), worst_margin=float(vals[i]), worst_location=float(locs[i]))


def check_c1c2(alpha: float, x_max: float = 1e9, points: int = 400):
    """Certify the two logarithmic comparison bounds for beta = 2(1-1/alpha):

        log(1+x)^beta - log(2)^beta <= 1 * log(x),       x >= 1,
        log(1+x^2)^beta - log(2)^beta
            <= 8 * (log(1+x)^beta - log(2)^beta),        x >= 1,

    returning ((c1, c2), worst margins) with c1 = 1 and c2 = 8.
    """
    if not 1.0 <= alpha <= 2.0:
        raise DomainError("alpha must lie in [1, 2]")
    beta = 2.0 * (1.0 - 1.0 / alpha)
    xs = np.geomspace(1.0, x_max, points)
    l2b = math.log(2.0) ** beta
    lhs1 = np.log1p(xs) ** beta - l2b
    margin1 = float(np.min(np.log(np.maximum(xs, 1.0)) - lhs1))
    lhs2 = np.log1p(xs**2) ** beta - l2b
    rhs2 = np.log1p(xs) ** beta - l2b
    with np.errstate(invalid="ignore", divide="ignore"):
        factor = np.where(rhs2 > 0, lhs2 / np.maximum(rhs2, 1e-300), 1.0)
    worst_factor = float(np.max(factor))
    margin2 = float(np.min(8.0 * rhs2 - lhs2))
    return (1.0, 8.0), {"margin_log_bound": margin1, "worst_square_factor": worst_factor, "margin_square_bound": margin2, "beta": beta}


def rothaus_slope_bound(F: FGrowth, x_max: float = 1e9, points: int = 500) -> float:
    """Empirical sup of u F'(u) on (0, x_max]; the bounded-slope hypothesis
    of the concave tightening route.  Labeled empirical."""
    us = np.geomspace(1e-9, x_max, points)
    vals = us * F.derivative1(us)
    vals = vals[np.isfinite(vals)]
    return float(np.max(vals))
