"""Isoperimetric profiles and dimension-free lower bounds.

For a symmetric log-concave measure on the line the profile is exact:
half-lines are extremal, so I(t) = density(quantile(t)).  Lower bounds for
products come from two inputs that survive tensorization:

* an Orlicz contraction certificate N_{tau_{kt}}(P_t f) <= C ||f||_2 over
  a horizon, which controls small and large sets through the growth
  function F (with its comparison constants c1, c2), and
* a spectral gap, which controls middle sets through the Buser-type bound
  mu_s(boundary) >= ((1 - 1/e)/sqrt(2)) sqrt(lambda) t (1 - t).

The assembly reproduces the constants K1..K4 of the two-regime merge and
returns a single K with    profile >= K * L_alpha    claimed uniformly in
the number of factors, where
L_alpha(t) = min(t, 1-t) log^{1 - 1/alpha}(1 / min(t, 1-t)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, NotLogConcave
from .measures import LineMeasure

__all__ = [
    "IsoProfile",
    "HyperboundCertificate",
    "bobkov_profile",
    "l_alpha",
    "profile_band",
    "isop_from_hyperbound",
    "cheeger_lower",
    "assemble_dimension_free",
    "CHEEGER_PREFACTOR",
]

CHEEGER_PREFACTOR = (1.0 - math.exp(-1.0)) / math.sqrt(2.0)


@dataclass(frozen=True)
class IsoProfile:
    """Isoperimetric profile I on (0, 1)."""

    measure: LineMeasure = field(repr=False)
    source: str = "bobkov_exact"

    def __call__(self, t):
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.array([float(self.measure.density(self.measure.quantile(ti))) for ti in ts])
        return out if np.ndim(t) else float(out[0])


def _log_concavity_probe(measure: LineMeasure, points: int = 241, tol: float = 1e-8) -> None:
    lo, hi = measure.support
    xs = np.linspace(lo * 0.9, hi * 0.9, points)
    ld = measure.log_density(xs)
    second = np.diff(ld, 2) / (xs[1] - xs[0]) ** 2
    if np.any(second > tol):
        raise NotLogConcave(f"log-density second difference reaches {float(np.max(second)):.3e} > 0")


def bobkov_profile(measure: LineMeasure) -> IsoProfile:
    """Exact profile of a symmetric log-concave line measure:
    I(t) = density(quantile(t)) (half-lines are extremal)."""
    if not measure.potential.symmetry_flag:
        raise DomainError("exact profile requires a symmetric measure")
    _log_concavity_probe(measure)
    return IsoProfile(measure=measure, source="bobkov_exact")


def l_alpha(alpha: float, t) -> float:
    """min(t,1-t) log^{1-1/alpha}(1/min(t,1-t)); the comparison profile."""
    if not 1.0 <= alpha <= 2.0:
        raise DomainError("alpha must lie in [1, 2]")
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any((ts <= 0.0) | (ts >= 1.0)):
        raise DomainError("t must lie in (0, 1)")
    m = np.minimum(ts, 1.0 - ts)
    out = m * np.log(1.0 / m) ** (1.0 - 1.0 / alpha)
    return out if np.ndim(t) else float(out[0])


def profile_band(profile: IsoProfile, alpha: float, t_grid: Optional[np.ndarray] = None) -> tuple:
    """Empirical (inf, sup) of I(t) / L_alpha(t) over a t grid."""
    if t_grid is None:
        t_grid = np.concatenate([np.geomspace(1e-6, 0.5, 60), 1.0 - np.geomspace(1e-6, 0.45, 30)])
    ratios = []
    for t in t_grid:
        la = l_alpha(alpha, float(t))
        if la > 0:
            ratios.append(profile(float(t)) / la)
    return float(np.min(ratios)), float(np.max(ratios))


@dataclass(frozen=True)
class HyperboundCertificate:
    """Orlicz contraction certificate N_{tau_{k t}}(P_t f) <= C ||f||_2
    for t in [0, horizon], with the growth comparison constants."""

    C: float
    k: float
    horizon: float
    alpha: float
    c1: float = 1.0
    c2: float = 8.0

    def __post_init__(self):
        if self.C < 1.0:
            raise DomainError("certificate constant C must be >= 1")
        if self.k <= 0 or self.horizon <= 0:
            raise DomainError("k and horizon must be positive")

    @property
    def beta(self) -> float:
        return 2.0 * (1.0 - 1.0 / self.alpha)

    def growth(self, y: float) -> float:
        """F(y) = log(1+y)^beta - log(2)^beta."""
        return math.log1p(y) ** self.beta - math.log(2.0) ** self.beta

    def smallness_threshold(self) -> float:
        """Required level of F(1/a): c2 log(2 C^2) / min(k * horizon, 1/c1)."""
        return self.c2 * math.log(2.0 * self.C**2) / min(self.k * self.horizon, 1.0 / self.c1)

    def front_constant(self) -> float:
        """K1 = (1/4) sqrt(k / (c2 log(2 C^2)))."""
        return 0.25 * math.sqrt(self.k / (self.c2 * math.log(2.0 * self.C**2)))


def isop_from_hyperbound(cert: HyperboundCertificate, a: float):
    """Boundary lower bound for a set of measure a:

        (1/4) sqrt(k / (c2 log(2C^2))) * a * sqrt(F(1/a))

    when F(1/a) meets the smallness threshold (or symmetrically for 1-a);
    returns None outside the admissible range.
    """
    if not 0.0 < a < 1.0:
        raise DomainError("a must lie in (0, 1)")
    thr = cert.smallness_threshold()
    small = min(a, 1.0 - a)
    if cert.growth(1.0 / small) < thr:
        return None
    return cert.front_constant() * small * math.sqrt(cert.growth(1.0 / small))


def cheeger_lower(lambda_value: float, t) -> float:
    """Buser-direction bound ((1-1/e)/sqrt(2)) sqrt(lambda) t (1-t)."""
    if lambda_value <= 0:
        raise DomainError("lambda must be positive")
    ts = np.asarray(t, dtype=float)
    out = CHEEGER_PREFACTOR * math.sqrt(lambda_value) * ts * (1.0 - ts)
    return out if np.ndim(t) else float(out)


def assemble_dimension_free(alpha: float, cert: Optional[HyperboundCertificate], C_P: float) -> dict:
    """Merge the contraction route with the Cheeger route into a single
    constant K with  profile >= K * L_alpha  for all product powers.

    Bookkeeping (all exposed for audit):
      K1 = front constant of the contraction bound,
      K2 = sqrt(smallness threshold) (sets where the bound applies),
      K3 = Cheeger constant ((1-1/e)/sqrt(2)) sqrt(1/C_P),
      K4 = min(K1, K3/K2),
      K  = 1 / (1/K3 + 1/K4)
    using sqrt(A - B) >= sqrt(A) - sqrt(B) and log(1 + 1/m) >= log(1/m) to
    absorb the shifted logarithm.  At alpha = 1 the growth term vanishes
    and K reduces to the pure Cheeger constant K3.
    """
    if not 1.0 <= alpha <= 2.0:
        raise DomainError("alpha must lie in [1, 2]")
    if C_P <= 0:
        raise DomainError("C_P must be positive")
    lam = 1.0 / C_P
    K3 = CHEEGER_PREFACTOR * math.sqrt(lam)
    if alpha == 1.0 or cert is None:
        return {"alpha": alpha, "K": K3, "K1": None, "K2": None, "K3": K3, "K4": None, "route": "cheeger_only"}
    K1 = cert.front_constant()
    K2 = math.sqrt(cert.smallness_threshold())
    K4 = min(K1, K3 / K2)
    K = 1.0 / (1.0 / K3 + 1.0 / K4)
    return {"alpha": alpha, "K": K, "K1": K1, "K2": K2, "K3": K3, "K4": K4, "route": "contraction+cheeger"}
