"""Hypercontractivity schedules driven by homogeneous F-Sobolev budgets.

Given a budget (C_F, C~_F) for

    int f^2 F(f^2 / mu(f^2)) dmu <= C_F int |grad f|^2 dmu + C~_F int f^2 dmu

and certified coefficients k(q), l(q), m for the Young scale
tau_q(x) = x^p e^{q F(x^p)}, the exponent schedule solves

    q'(t) = k(q) / (l(q) * C_F),   q(0) = 0,

and the semigroup norm bound carries the prefactor
exp((1/p) [m q(t) + C~_F int_0^{q(t)} l(u) du]).  The converse direction
reads (C_F, C~_F) off a contraction estimate at t = 0, and the tightening
arithmetic removes the additive defect using a spectral-gap constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, MissingRothausConstant, NonpositiveCurvature, StiffnessFailure
from .growth import FGrowth, check_fcond, f_alpha, log_growth

__all__ = [
    "SobolevBudget",
    "Schedule",
    "budget_for_log",
    "budget_for_f_alpha",
    "integrate_schedule",
    "converse_fsobolev",
    "tighten",
    "spectral_from_fsobolev",
]


@dataclass(frozen=True)
class SobolevBudget:
    """F-Sobolev constants plus the certified Young-scale coefficients."""

    C_F: float
    C_tilde_F: float
    p: float
    F: FGrowth
    k_of_q: Callable[[float], float]
    l_of_q: Callable[[float], float]
    m_const: float
    provenance: str = "user"

    def __post_init__(self):
        if self.C_F <= 0:
            raise DomainError("C_F must be positive")
        if self.p <= 1:
            raise DomainError("p must exceed 1")
        if self.m_const < 0 or self.C_tilde_F < 0:
            raise DomainError("m and C~_F must be nonnegative")
        ceiling = 4.0 * (self.p - 1.0) / self.p
        for q in (0.0, 0.5, 1.0, 2.0, 5.0):
            k = self.k_of_q(q)
            l = self.l_of_q(q)
            if k > ceiling + 1e-12:
                raise DomainError(f"k({q})={k} exceeds the curvature ceiling 4(p-1)/p={ceiling}")
            if k < 0 or l <= 0:
                raise DomainError("k must be nonnegative and l positive")


def budget_for_log(C_LS: float, p: float = 2.0, C_tilde: float = 0.0) -> SobolevBudget:
    """Classical logarithmic budget: k = 4(p-1)/p, l(q) = 1/(q+1), m = 0."""
    k = 4.0 * (p - 1.0) / p
    return SobolevBudget(
        C_F=C_LS,
        C_tilde_F=C_tilde,
        p=p,
        F=log_growth(),
        k_of_q=lambda q: k,
        l_of_q=lambda q: 1.0 / (q + 1.0),
        m_const=0.0,
        provenance="log-sobolev",
    )


def budget_for_f_alpha(alpha: float, C_F: float, p: float = 2.0, C_tilde: float = 0.0) -> SobolevBudget:
    """Budget for the shifted log-power family.

    The differential condition certifies the damping constant 5 - 4/alpha,
    but the curvature ceiling 4(p-1)/p binds at q = 0 (the scale's base
    member x^p), so the usable k is the minimum of the two.  l = 1 and
    m = 1 because x F(x) >= -1 on (0, 1).
    """
    F = f_alpha(alpha)
    k_raw = 5.0 - 4.0 / alpha
    rep = check_fcond(F, p, k_raw)
    if not rep.passed:
        raise DomainError(f"differential condition failed for alpha={alpha}: {rep}")
    k = min(k_raw, 4.0 * (p - 1.0) / p)
    return SobolevBudget(
        C_F=C_F,
        C_tilde_F=C_tilde,
        p=p,
        F=F,
        k_of_q=lambda q: k,
        l_of_q=lambda q: 1.0,
        m_const=1.0,
        provenance=f"f_alpha({alpha})",
    )


@dataclass(frozen=True)
class Schedule:
    """Tabulated exponent schedule with its norm prefactor."""

    t: np.ndarray
    q: np.ndarray
    prefactor: np.ndarray          # exp(r(t))
    budget: SobolevBudget = field(repr=False)

    def q_at(self, t: float) -> float:
        return float(np.interp(t, self.t, self.q))

    def prefactor_at(self, t: float) -> float:
        return float(np.interp(t, self.t, self.prefactor))

    def rows(self):
        return np.column_stack([self.t, self.q, self.prefactor])

    def rate_margin(self) -> float:
        """max over interior nodes of q' - k(q)/(l(q) C_F) via one-sided
        differences; <= 0 up to discretization for a valid schedule."""
        dq = np.diff(self.q) / np.diff(self.t)
        worst = -math.inf
        for i, slope in enumerate(dq):
            qmid = 0.5 * (self.q[i] + self.q[i + 1])
            cap = self.budget.k_of_q(qmid) / (self.budget.l_of_q(qmid) * self.budget.C_F)
            worst = max(worst, slope - cap)
        return worst


def _rhs(budget: SobolevBudget, q: float) -> float:
    return budget.k_of_q(q) / (budget.l_of_q(q) * budget.C_F)


def integrate_schedule(budget: SobolevBudget, horizon: float, rel_tol: float = 1e-9, max_nodes: int = 200_000) -> Schedule:
    """Integrate q' = k(q)/(l(q) C_F) with q(0) = 0 on [0, horizon].

    Classic fourth-order stepper with step doubling; the local error
    controls the step at rel_tol per unit step.  The prefactor exponent
    r = (1/p)(m q + C~_F int_0^q l) is integrated alongside
    (dr/dt = (1/p)(m + C~_F l(q)) q').
    """
    if horizon <= 0:
        raise DomainError("horizon must be positive")

    def deriv(state):
        q = state[0]
        qdot = _rhs(budget, q)
        rdot = (budget.m_const + budget.C_tilde_F * budget.l_of_q(q)) * qdot / budget.p
        return np.array([qdot, rdot])

    def rk4(state, h):
        k1 = deriv(state)
        k2 = deriv(state + 0.5 * h * k1)
        k3 = deriv(state + 0.5 * h * k2)
        k4 = deriv(state + h * k3)
        return state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    ts = [0.0]
    qs = [0.0]
    rs = [0.0]
    state = np.array([0.0, 0.0])
    t = 0.0
    h = horizon / 1024.0
    while t < horizon:
        h = min(h, horizon - t)
        if h < horizon * 1e-15:
            raise StiffnessFailure("step control underflowed")
        full = rk4(state, h)
        half = rk4(rk4(state, 0.5 * h), 0.5 * h)
        err = float(np.max(np.abs(full - half))) / max(1.0, float(np.max(np.abs(half))))
        tol_here = rel_tol * max(h / horizon, 1e-12)
        if err > tol_here:
            h *= 0.5
            continue
        state = half
        t += h
        ts.append(t)
        qs.append(state[0])
        rs.append(state[1])
        if err < tol_here / 32.0:
            h *= 2.0
        if len(ts) > max_nodes:
            raise StiffnessFailure("node budget exhausted")
    return Schedule(t=np.array(ts), q=np.array(qs), prefactor=np.exp(np.array(rs)), budget=budget)


def converse_fsobolev(p: float, q_rate: float, r0: float = 0.0, r_rate: float = 0.0) -> tuple:
    """Read the homogeneous budget off a contraction estimate at t = 0:

        C_F = 4(p-1) / (p q'(0)),   C~_F = p r'(0) e^{r(0)} / q'(0).
    """
    if q_rate <= 0:
        raise DomainError("q'(0) must be positive")
    if p <= 1:
        raise DomainError("p must exceed 1")
    c_f = 4.0 * (p - 1.0) / (p * q_rate)
    c_tilde = p * r_rate * math.exp(r0) / q_rate
    return c_f, c_tilde


def tighten(C_F: float, C_tilde_F: float, C_P: float, mode: str = "cutoff", rho: Optional[float] = None, C_Rot: Optional[float] = None) -> float:
    """Remove the additive defect of an F-Sobolev inequality.

    cutoff mode (F vanishing below rho^2):
        ((rho+1)/rho)^2 * (C_F + C_P * C~_F)
    for the shifted function F(t rho^2/(rho+1)^2); rothaus mode (concave F
    with bounded u F'(u)):
        C_F + C_P * (C~_F + C_Rot)
    where C_Rot is an empirical curvature constant (finite-space search).
    """
    if C_P < 0 or C_F < 0 or C_tilde_F < 0:
        raise DomainError("constants must be nonnegative")
    if mode == "cutoff":
        if rho is None or rho <= 0:
            raise DomainError("cutoff mode needs rho > 0")
        return ((rho + 1.0) / rho) ** 2 * (C_F + C_P * C_tilde_F)
    if mode == "rothaus":
        if C_Rot is None:
            raise MissingRothausConstant("rothaus mode needs an empirical curvature constant")
        return C_F + C_P * (C_tilde_F + C_Rot)
    raise DomainError(f"unknown tighten mode {mode!r}")


def spectral_from_fsobolev(F: FGrowth) -> float:
    """Poincare upper bound extracted from a tight F-Sobolev inequality
    with constant 1: expanding around constants gives

        (4 F'(1) + 2 F''(1)) Var(g) <= int |grad g|^2,

    so C_P <= 1 / (4F'(1) + 2F''(1)), equivalently 1/(2 Phi''(1)) for
    Phi(x) = x F(x).  Raises when the curvature is nonpositive.
    """
    d1 = float(F.derivative1(np.asarray(1.0)))
    d2 = float(F.derivative2(np.asarray(1.0)))
    curv = 4.0 * d1 + 2.0 * d2
    if curv <= 0:
        raise NonpositiveCurvature(f"4F'(1)+2F''(1) = {curv} <= 0")
    return 1.0 / curv
