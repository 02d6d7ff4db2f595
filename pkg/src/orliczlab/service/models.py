"""Pydantic request/response models for the compute service.

All request models reject unknown keys, so a mistyped field fails loudly
instead of being silently ignored.
"""

from __future__ import annotations

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PotentialSpec(StrictModel):
    """Potential given by name + parameters or by a sampled table."""

    kind: Literal["abs_power", "u_alpha", "table"] = "u_alpha"
    alpha: Optional[float] = Field(default=None, description="exponent for u_alpha / abs_power")
    coefficient: float = 1.0
    table_x: Optional[List[float]] = None
    table_v: Optional[List[float]] = None


class MeasureSpec(StrictModel):
    potential: PotentialSpec
    scale: float = Field(default=1.0, description="1 for e^{-V}, 2 for e^{-2V}")
    tol: float = 1e-9


class MeasureRequest(StrictModel):
    measure: MeasureSpec
    csv_points: int = 0


class MeasureResponse(StrictModel):
    normalization: float
    median: float
    support: Tuple[float, float]
    convention: str
    mass_error: float
    rows: Optional[List[Tuple[float, float, float]]] = None


class GrowthSpec(StrictModel):
    kind: Literal["f_alpha", "f_alpha_tilde", "log", "table"] = "f_alpha"
    alpha: Optional[float] = None
    rho: Optional[float] = None
    table_x: Optional[List[float]] = None
    table_y: Optional[List[float]] = None


class YoungSpec(StrictModel):
    kind: Literal["power", "tau_q", "table"] = "power"
    p: float = 2.0
    coefficient: float = 1.0
    q: float = 1.0
    growth: Optional[GrowthSpec] = None
    table_x: Optional[List[float]] = None
    table_y: Optional[List[float]] = None


class OrliczRequest(StrictModel):
    young: YoungSpec
    normalize: bool = False
    sandwich_points: int = 40


class OrliczResponse(StrictModel):
    description: str
    tau_at_1: float
    tau_star_at_1: float
    normalization_scalar: Optional[float] = None
    delta2: Optional[Tuple[float, float]] = None
    delta2_failure_ratio: Optional[float] = None
    nabla2: Optional[Tuple[float, float]] = None
    sandwich_ok: bool
    sandwich_lower_margin: float
    sandwich_upper_margin: float


class CriteriaRequest(StrictModel):
    measure: MeasureSpec
    family: Literal["poincare", "beckner_p", "beckner_T", "phi_sobolev", "rosen_beta"]
    p: Optional[float] = None
    beta: Optional[float] = Field(default=None, description="rosen/beckner_T exponent; 'auto' = 2(1-1/alpha) when omitted and the potential has alpha")
    gamma: float = 1.0
    M: float = 0.0


class CriterionReportModel(StrictModel):
    family: str
    constant: float
    extremizer: float
    side: str
    bracket_lo: float
    bracket_hi: float
    convention: str
    governing_result: str
    extra: dict
    grid_stats: dict


class ScheduleRequest(StrictModel):
    growth: GrowthSpec
    p: float = 2.0
    C_F: float
    C_tilde_F: float = 0.0
    horizon: float = 1.0
    points: int = 64


class ScheduleResponse(StrictModel):
    rows: List[Tuple[float, float, float]]   # (t, q, prefactor)
    rate_margin: float
    provenance: str


class SimulateRequest(StrictModel):
    alpha: float
    t: float
    x_values: List[float]
    n_traj: int = 20000
    step: float = 1e-3
    seed: int = 2026
    beta_split: float = 0.5


class SimulateRow(StrictModel):
    x: float
    estimate: float
    stderr: float
    envelope: float


class SimulateResponse(StrictModel):
    rows: List[SimulateRow]
    martingale_estimate: float
    martingale_stderr: float


class RateSpec(StrictModel):
    kind: Literal["power"] = "power"
    exponent: float = 1.5
    coefficient: float = 1.0


class ConcentrationRequest(StrictModel):
    rate: RateSpec
    C_T: Optional[float] = Field(default=None, description="when omitted, run the self-consistency pipeline to derive it")
    t_values: List[float]


class ConcentrationRow(StrictModel):
    t: float
    bound: float
    regime: str
    y_star: Optional[float] = None


class ConcentrationResponse(StrictModel):
    C_T: float
    rows: List[ConcentrationRow]
    selfconsistency: Optional[dict] = None


class IsoperimetryRequest(StrictModel):
    alpha: float
    tol: float = 1e-9
    t_points: int = 100


class IsoperimetryResponse(StrictModel):
    route: dict
    assembly: dict
    rows: List[dict]


class SpaceSpec(StrictModel):
    weights: List[float]
    edges: List[Tuple[int, int, float]]


class OracleRequest(StrictModel):
    space: SpaceSpec
    check: Literal["capacity", "poincare", "hardy", "fsobcap", "tensorization", "rothaus", "lem_ak"]
    inner: Optional[List[int]] = None
    outer: Optional[List[int]] = None
    second_space: Optional[SpaceSpec] = None
    growth: Optional[GrowthSpec] = None
    seed: int = 2026
    corpus_size: int = 2000


class OracleResponse(StrictModel):
    check: str
    result: dict
    convention: str


class VerifyRequest(StrictModel):
    level: Literal["quick", "full"] = "quick"
    seed: int = 2026
    fault: Optional[str] = None


class ErrorBody(StrictModel):
    category: Literal["hypothesis_violation", "error"]
    error_type: str
    message: str
