"""One-dimensional Boltzmann measures e^{-scale*V(x)} dx / Z.

A :class:`LineMeasure` is built once by adaptive quadrature on a truncated
domain and is immutable afterwards.  It exposes the density, CDF, quantile,
median, the inverse-density integral from the median, and a fixed set of
quadrature atoms used for Orlicz-type integrals against the measure.

The exponent convention is explicit: ``scale=1`` for densities written as
e^{-V}, ``scale=2`` for densities written as e^{-2V}.  Constants computed
downstream record which convention produced them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, NonIntegrable, QuadratureFailure

__all__ = [
    "Potential",
    "LineMeasure",
    "build_measure",
    "u_alpha",
    "u_alpha_d1",
    "u_alpha_d2",
    "half_line_weight",
    "abs_power_potential",
    "u_alpha_potential",
    "table_potential",
    "potential_from_callable",
]

# Expansion caps for the tail probe.
_PROBE_MAX_X = 1e8
_GRID_CELLS = 1500
_ATOMS_PER_CELL = 4


@dataclass(frozen=True)
class Potential:
    """A confining potential V with optional analytic derivatives.

    ``evaluate`` must accept scalars and numpy arrays.  When derivatives are
    not supplied they fall back to central differences with step
    h = tol^(1/3) * max(1, |x|).
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    derivative1: Optional[Callable[[np.ndarray], np.ndarray]] = None
    derivative2: Optional[Callable[[np.ndarray], np.ndarray]] = None
    growth_exponent_hint: Optional[float] = None
    symmetry_flag: bool = False
    name: str = "custom"
    breakpoints: tuple = ()

    def __call__(self, x):
        return self.evaluate(x)

    def d1(self, x, tol: float = 1e-9):
        if self.derivative1 is not None:
            return self.derivative1(x)
        h = tol ** (1.0 / 3.0) * np.maximum(1.0, np.abs(x))
        return (self.evaluate(x + h) - self.evaluate(x - h)) / (2.0 * h)

    def d2(self, x, tol: float = 1e-9):
        if self.derivative2 is not None:
            return self.derivative2(x)
        h = tol ** (1.0 / 3.0) * np.maximum(1.0, np.abs(x))
        return (self.evaluate(x + h) - 2.0 * self.evaluate(x) + self.evaluate(x - h)) / h**2


def u_alpha(alpha: float, x):
    """C^2 convex interpolation of |x|^alpha, quartic inside |x| <= 1.

    Outside the unit interval the value is |x|^alpha exactly; inside it is
    the unique even quartic matching value and two derivatives at |x| = 1.
    Requires 1 < alpha < 2.
    """
    if not 1.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (1, 2), got {alpha}")
    x = np.asarray(x, dtype=float)
    a4 = alpha * (alpha - 2.0) / 8.0
    a2 = alpha * (4.0 - alpha) / 4.0
    a0 = 1.0 - 0.75 * alpha + 0.125 * alpha**2
    inner = a4 * x**4 + a2 * x**2 + a0
    outer = np.abs(x) ** alpha
    out = np.where(np.abs(x) <= 1.0, inner, outer)
    return out if out.ndim else float(out)


def u_alpha_d1(alpha: float, x):
    x = np.asarray(x, dtype=float)
    a4 = alpha * (alpha - 2.0) / 8.0
    a2 = alpha * (4.0 - alpha) / 4.0
    inner = 4.0 * a4 * x**3 + 2.0 * a2 * x
    outer = alpha * np.abs(x) ** (alpha - 1.0) * np.sign(x)
    out = np.where(np.abs(x) <= 1.0, inner, outer)
    return out if out.ndim else float(out)


def u_alpha_d2(alpha: float, x):
    x = np.asarray(x, dtype=float)
    a4 = alpha * (alpha - 2.0) / 8.0
    a2 = alpha * (4.0 - alpha) / 4.0
    inner = 12.0 * a4 * x**2 + 2.0 * a2
    with np.errstate(divide="ignore"):
        outer = alpha * (alpha - 1.0) * np.abs(x) ** (alpha - 2.0)
    out = np.where(np.abs(x) <= 1.0, inner, outer)
    return out if out.ndim else float(out)


def abs_power_potential(exponent: float, coefficient: float = 1.0) -> Potential:
    """V(x) = coefficient * |x|^exponent (kink at 0 for exponent < 2)."""
    if exponent <= 0 or coefficient <= 0:
        raise DomainError("exponent and coefficient must be positive")

    def _v(x):
        return coefficient * np.abs(np.asarray(x, dtype=float)) ** exponent

    def _d1(x):
        x = np.asarray(x, dtype=float)
        return coefficient * exponent * np.abs(x) ** (exponent - 1.0) * np.sign(x)

    def _d2(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return coefficient * exponent * (exponent - 1.0) * np.abs(x) ** (exponent - 2.0)

    return Potential(
        evaluate=_v,
        derivative1=_d1,
        derivative2=_d2,
        growth_exponent_hint=exponent,
        symmetry_flag=True,
        name=f"abs_power({exponent},{coefficient})",
        breakpoints=(0.0,),
    )


def u_alpha_potential(alpha: float) -> Potential:
    """The smoothed |x|^alpha potential, exact outside |x| = 1."""
    if not 1.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (1, 2), got {alpha}")
    return Potential(
        evaluate=lambda x: u_alpha(alpha, x),
        derivative1=lambda x: u_alpha_d1(alpha, x),
        derivative2=lambda x: u_alpha_d2(alpha, x),
        growth_exponent_hint=alpha,
        symmetry_flag=True,
        name=f"u_alpha({alpha})",
        breakpoints=(-1.0, 1.0),
    )


def table_potential(xs: Sequence[float], vs: Sequence[float]) -> Potential:
    """Potential sampled on a grid; monotone-cubic inside, linear tails."""
    from scipy.interpolate import PchipInterpolator

    xs = np.asarray(xs, dtype=float)
    vs = np.asarray(vs, dtype=float)
    if xs.ndim != 1 or xs.size < 4 or np.any(np.diff(xs) <= 0):
        raise DomainError("table potential needs >= 4 strictly increasing nodes")
    interp = PchipInterpolator(xs, vs, extrapolate=False)
    slope_lo = (vs[1] - vs[0]) / (xs[1] - xs[0])
    slope_hi = (vs[-1] - vs[-2]) / (xs[-1] - xs[-2])

    def _v(x):
        x = np.asarray(x, dtype=float)
        out = interp(x)
        out = np.where(x < xs[0], vs[0] + slope_lo * (x - xs[0]), out)
        out = np.where(x > xs[-1], vs[-1] + slope_hi * (x - xs[-1]), out)
        return out if out.ndim else float(out)

    sym = bool(np.allclose(interp(np.abs(xs)), interp(np.abs(-xs)), atol=1e-12))
    return Potential(evaluate=_v, symmetry_flag=sym, name="table", breakpoints=tuple(xs[:: max(1, xs.size // 8)]))


def potential_from_callable(fn: Callable, symmetric: bool = False, name: str = "custom") -> Potential:
    return Potential(evaluate=lambda x: np.asarray(fn(np.asarray(x, dtype=float))), symmetry_flag=symmetric, name=name)


@dataclass(frozen=True)
class LineMeasure:
    """Probability measure e^{-scale*V(x)} dx / Z on a truncated line.

    Immutable after construction; every evaluation method is reentrant.
    """

    potential: Potential
    scale_in_exponent: float
    normalization: float           # Z, for the unnormalized weight e^{-scale*V}
    median: float
    quadrature_tolerance: float
    grid: np.ndarray = field(repr=False)
    cdf_nodes: np.ndarray = field(repr=False)
    tail_nodes: np.ndarray = field(repr=False)      # backward cumulative, cancellation-free tails
    inv_cells: np.ndarray = field(repr=False)       # per-cell integrals of e^{scale*V}
    atom_x: np.ndarray = field(repr=False)
    atom_w: np.ndarray = field(repr=False)
    tail_beyond: tuple = (0.0, 0.0)                 # discarded mass fractions (left, right)

    # -- pointwise quantities -------------------------------------------------

    def log_density(self, x):
        return -self.scale_in_exponent * self.potential(x) - math.log(self.normalization)

    def density(self, x):
        return np.exp(self.log_density(x))

    def _unnorm(self, x):
        return np.exp(-self.scale_in_exponent * self.potential(x))

    def _inv_unnorm(self, x):
        return np.exp(self.scale_in_exponent * self.potential(x))

    def cdf(self, x):
        """Exact CDF: cached node value plus a local adaptive refinement.

        Mass discarded by the left truncation (a < tol/100 fraction) is
        added back so left tails stay positive near the edge.
        """
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(xs)
        for i, xi in enumerate(xs):
            if xi <= self.grid[0]:
                out[i] = self.tail_beyond[0]
            elif xi >= self.grid[-1]:
                out[i] = 1.0
            else:
                j = int(np.searchsorted(self.grid, xi, side="right")) - 1
                val, _ = integrate.quad(self._unnorm, self.grid[j], xi, epsabs=self.quadrature_tolerance * 1e-3, epsrel=1e-12, limit=200)
                out[i] = min(1.0, self.tail_beyond[0] + self.cdf_nodes[j] + val / self.normalization)
        return out if np.ndim(x) else float(out[0])

    def quantile(self, t):
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any((ts <= 0.0) | (ts >= 1.0)):
            raise DomainError("quantile defined on (0, 1)")
        out = np.empty_like(ts)
        for i, ti in enumerate(ts):
            j = int(np.searchsorted(self.cdf_nodes, ti, side="right")) - 1
            j = min(max(j, 0), self.grid.size - 2)
            lo, hi = self.grid[j], self.grid[j + 1]
            flo, fhi = self.cdf_nodes[j] - ti, self.cdf_nodes[j + 1] - ti
            if flo > 0 or fhi < 0:   # node table bracket failed; widen
                lo, hi = self.grid[0], self.grid[-1]
            out[i] = optimize.brentq(lambda u: self.cdf(u) - ti, lo, hi, xtol=1e-13, rtol=8.9e-16)
        return out if np.ndim(t) else float(out[0])

    def tail(self, x):
        """mu([x, +inf)), computed from the backward cumulative (no 1-cdf
        cancellation).  The right truncation remainder estimate keeps tails
        positive up to the edge."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(xs)
        for i, xi in enumerate(xs):
            if xi <= self.grid[0]:
                out[i] = 1.0
            elif xi >= self.grid[-1]:
                out[i] = self.tail_beyond[1]
            else:
                j = int(np.searchsorted(self.grid, xi, side="right")) - 1
                val, _ = integrate.quad(self._unnorm, xi, self.grid[j + 1], epsabs=self.quadrature_tolerance * 1e-3, epsrel=1e-12, limit=200)
                out[i] = self.tail_beyond[1] + self.tail_nodes[j + 1] + val / self.normalization
        return out if np.ndim(x) else float(out[0])

    def inv_density_integral(self, a: float, b: float) -> float:
        """Integral of 1/density over [a, b] inside the truncated domain."""
        if b < a:
            return -self.inv_density_integral(b, a)
        a = max(a, self.grid[0])
        b = min(b, self.grid[-1])
        ja = int(np.searchsorted(self.grid, a, side="right")) - 1
        jb = int(np.searchsorted(self.grid, b, side="right")) - 1
        ja = min(max(ja, 0), self.grid.size - 2)
        jb = min(max(jb, 0), self.grid.size - 2)
        if ja == jb:
            val, _ = integrate.quad(self._inv_unnorm, a, b, epsabs=0.0, epsrel=1e-11, limit=200)
            return self.normalization * val
        head, _ = integrate.quad(self._inv_unnorm, a, self.grid[ja + 1], epsabs=0.0, epsrel=1e-11, limit=200)
        tail_, _ = integrate.quad(self._inv_unnorm, self.grid[jb], b, epsabs=0.0, epsrel=1e-11, limit=200)
        mid = float(np.sum(self.inv_cells[ja + 1 : jb]))
        return self.normalization * (head + tail_ + mid)

    def inv_density_from_median(self, x: float) -> float:
        """Integral of 1/density between the median and x (signed distance)."""
        if x >= self.median:
            return self.inv_density_integral(self.median, x)
        return self.inv_density_integral(x, self.median)

    # -- integrals against the measure ----------------------------------------

    def integrate(self, fn: Callable[[np.ndarray], np.ndarray]) -> float:
        """Integral of fn against the measure on the fixed atom rule."""
        return float(np.dot(self.atom_w, fn(self.atom_x)))

    @property
    def support(self):
        return float(self.grid[0]), float(self.grid[-1])

    def export_rows(self, n: int = 200):
        """(x, density, cdf) rows on an evenly spaced grid, for CSV dumps."""
        xs = np.linspace(self.grid[0], self.grid[-1], n)
        return np.column_stack([xs, self.density(xs), self.cdf(xs)])


def _tail_probe(potential: Potential, scale: float, tol: float):
    """Locate truncation points so the discarded tail mass is < tol/100.

    Uses the local slope bound: for increasing s*V beyond x, the remaining
    mass is at most e^{-s V(x)} / (s V'(x)).  Raises NonIntegrable when the
    bound never decays.
    """
    v0_x = 0.0
    v_min = float(potential(v0_x))
    for probe in (-1.0, 1.0, -3.0, 3.0):
        v_min = min(v_min, float(potential(probe)))
    cuts = []
    discards = []
    for direction in (-1.0, 1.0):
        x = direction * max(1.0, abs(v0_x) + 1.0)
        budget = math.log(100.0 / tol) / scale + v_min + 5.0 / scale
        ok = False
        while abs(x) < _PROBE_MAX_X:
            v = float(potential(x))
            slope = float(potential.d1(x, tol)) * direction
            if v >= budget and slope > 0:
                bound = math.exp(-scale * (v - v_min)) / (scale * slope)
                if bound < tol / 100.0:
                    ok = True
                    # absolute (unnormalized) remainder estimate beyond x
                    discards.append(bound * math.exp(-scale * v_min))
                    break
            if v < v_min - 1.0 and abs(x) > 100.0:
                raise NonIntegrable(f"potential decreases along x -> {direction:+.0f}inf; weight e^{{-{scale}V}} diverges")
            x *= 1.5
        if not ok:
            raise NonIntegrable(f"tail probe failed toward {direction:+.0f}inf (non-integrable or pathologically slow decay)")
        cuts.append(x)
    return cuts[0], cuts[1], discards[0], discards[1]


# 4-point Gauss-Legendre rule on [-1, 1]
_GL_NODES = np.array([-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526])
_GL_WEIGHTS = np.array([0.34785484513745385, 0.6521451548625461, 0.6521451548625461, 0.34785484513745385])


def build_measure(potential: Potential, scale: float = 1.0, tol: float = 1e-9, grid_cells: int = _GRID_CELLS) -> LineMeasure:
    """Construct a LineMeasure for e^{-scale*V} dx / Z.

    Raises NonIntegrable when the tail probe detects divergence and
    QuadratureFailure when normalization cannot reach the tolerance.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    if scale <= 0:
        raise DomainError("scale must be positive")
    x_lo, x_hi, disc_lo, disc_hi = _tail_probe(potential, scale, tol)

    knots = sorted({x_lo, x_hi, 0.0, *(b for b in potential.breakpoints if x_lo < b < x_hi)})
    grid_parts = []
    span = x_hi - x_lo
    for a, b in zip(knots[:-1], knots[1:]):
        n = max(8, int(round(grid_cells * (b - a) / span)))
        grid_parts.append(np.linspace(a, b, n + 1)[:-1])
    grid = np.append(np.concatenate(grid_parts), x_hi)

    unnorm = lambda x: np.exp(-scale * potential(x))
    cell_mass = np.empty(grid.size - 1)
    err_total = 0.0
    for j in range(grid.size - 1):
        val, err = integrate.quad(unnorm, grid[j], grid[j + 1], epsabs=tol * 1e-4, epsrel=1e-12, limit=200)
        cell_mass[j] = val
        err_total += err
    z = float(np.sum(cell_mass))
    if not np.isfinite(z) or z <= 0:
        raise QuadratureFailure("normalization integral is not finite")
    if err_total > tol * max(1.0, z):
        raise QuadratureFailure(f"normalization error estimate {err_total:.3e} exceeds tol*Z")

    cdf_nodes = np.concatenate([[0.0], np.cumsum(cell_mass)]) / z
    cdf_nodes[-1] = 1.0
    tail_nodes = np.concatenate([np.cumsum(cell_mass[::-1])[::-1], [0.0]]) / z
    tail_nodes[0] = 1.0

    inv_unnorm = lambda x: np.exp(scale * potential(x))
    inv_cells = np.empty(grid.size - 1)
    for j in range(grid.size - 1):
        val, _ = integrate.quad(inv_unnorm, grid[j], grid[j + 1], epsabs=0.0, epsrel=1e-11, limit=200)
        inv_cells[j] = val

    # fixed atoms: per-cell Gauss-Legendre nodes weighted by the density
    half = 0.5 * np.diff(grid)
    mid = 0.5 * (grid[:-1] + grid[1:])
    atom_x = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    atom_w = (half[:, None] * _GL_WEIGHTS[None, :] * unnorm(mid[:, None] + half[:, None] * _GL_NODES[None, :]) / z).ravel()

    measure = LineMeasure(
        potential=potential,
        scale_in_exponent=scale,
        normalization=z,
        median=0.0,  # placeholder, fixed below
        quadrature_tolerance=tol,
        grid=grid,
        cdf_nodes=cdf_nodes,
        tail_nodes=tail_nodes,
        inv_cells=inv_cells,
        atom_x=atom_x,
        atom_w=atom_w,
        tail_beyond=(disc_lo / z, disc_hi / z),
    )
    med = float(optimize.brentq(lambda u: measure.cdf(u) - 0.5, x_lo, x_hi, xtol=1e-13, rtol=8.9e-16))
    object.__setattr__(measure, "median", med)
    return measure


def half_line_weight(measure: LineMeasure, x: float) -> float:
    """Muckenhoupt half-line weight mu([x, inf)) * int_m^x 1/density.

    Requires x >= median; returns 0 at the median.
    """
    m = measure.median
    if x < m:
        raise DomainError("half_line_weight needs x >= median")
    if x == m:
        return 0.0
    return float(measure.tail(x)) * measure.inv_density_from_median(x)
