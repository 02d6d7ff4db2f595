"""FastAPI service wrapping the numerical core.

Hypothesis violations (unbounded suprema, failed probes, estimator
disagreement) map to HTTP 422 with category "hypothesis_violation";
domain and configuration faults map to HTTP 400.  The CLI translates
these into exit codes 2 and 1 respectively.
"""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..concentration import TailEnvelope, convex_rate_envelope, power_rate, selfconsistency_check, tail_bound
from ..criteria import beckner_B, beckner_BT, phi_sobolev_D, poincare_B, power_T, rosen_D
from ..errors import (
    ConvexityViolation,
    DomainError,
    HypothesisViolation,
    NotLogConcave,
    OrliczLabError,
    SandwichViolation,
    StepTooCoarse,
    UnboundedSupremum,
)
from ..finite import (
    DISCRETE_GRADIENT_CONVENTION,
    FiniteSpace,
    capacity,
    find_ak_lambda,
    poincare_exact,
    rothaus_deficit,
    verify_fsobcap,
    verify_hardy_reduction,
    verify_lem_ak,
    verify_tensorization,
)
from ..growth import FGrowth, f_alpha, f_alpha_tilde, log_growth
from ..langevin import TrajectoryBatch, WellMethodParams, estimate_weight_mean, simulate_pt, smoothed_well, well_envelope
from ..measures import LineMeasure, Potential, abs_power_potential, build_measure, table_potential, u_alpha_potential
from ..orlicz import (
    YoungFunction,
    delta2_check,
    duality_sandwich_check,
    make_pair,
    nabla2_check,
    normalize_pair,
    power_young,
    tau_q_young,
    young_from_table,
)
from ..pipeline import alpha_isoperimetry
from ..schedule import budget_for_f_alpha, budget_for_log, integrate_schedule
from ..verify import canonical_json, verify_suite
from . import models as m


def _jsonable(obj):
    """Round-trip through the canonical serializer: plain Python types."""
    import json

    return json.loads(canonical_json(obj))

_VIOLATIONS = (HypothesisViolation, UnboundedSupremum, SandwichViolation, NotLogConcave, ConvexityViolation, StepTooCoarse)

app = FastAPI(title="orliczlab", version=__version__)


@app.exception_handler(OrliczLabError)
async def _domain_error_handler(request: Request, exc: OrliczLabError):
    if isinstance(exc, _VIOLATIONS):
        body = m.ErrorBody(category="hypothesis_violation", error_type=type(exc).__name__, message=str(exc))
        return JSONResponse(status_code=422, content=body.model_dump())
    body = m.ErrorBody(category="error", error_type=type(exc).__name__, message=str(exc))
    return JSONResponse(status_code=400, content=body.model_dump())


def build_potential(spec: m.PotentialSpec) -> Potential:
    if spec.kind == "abs_power":
        if spec.alpha is None:
            raise DomainError("abs_power potential needs alpha")
        return abs_power_potential(spec.alpha, spec.coefficient)
    if spec.kind == "u_alpha":
        if spec.alpha is None:
            raise DomainError("u_alpha potential needs alpha")
        return u_alpha_potential(spec.alpha)
    if spec.table_x is None or spec.table_v is None:
        raise DomainError("table potential needs table_x and table_v")
    return table_potential(spec.table_x, spec.table_v)


def build_line_measure(spec: m.MeasureSpec) -> LineMeasure:
    return build_measure(build_potential(spec.potential), scale=spec.scale, tol=spec.tol)


def build_growth(spec: m.GrowthSpec) -> FGrowth:
    if spec.kind == "f_alpha":
        if spec.alpha is None:
            raise DomainError("f_alpha needs alpha")
        return f_alpha(spec.alpha)
    if spec.kind == "f_alpha_tilde":
        if spec.alpha is None or spec.rho is None:
            raise DomainError("f_alpha_tilde needs alpha and rho")
        return f_alpha_tilde(spec.alpha, spec.rho)
    if spec.kind == "table":
        if spec.table_x is None or spec.table_y is None:
            raise DomainError("table growth needs table_x and table_y")
        from scipy.interpolate import PchipInterpolator

        interp = PchipInterpolator(np.asarray(spec.table_x, dtype=float), np.asarray(spec.table_y, dtype=float))
        from ..growth import growth_from_callable

        return growth_from_callable(lambda x: np.asarray(interp(np.clip(x, spec.table_x[0], spec.table_x[-1]))), "table")
    return log_growth()


def build_young(spec: m.YoungSpec) -> YoungFunction:
    if spec.kind == "power":
        return power_young(spec.p, spec.coefficient)
    if spec.kind == "table":
        if spec.table_x is None or spec.table_y is None:
            raise DomainError("table Young function needs table_x and table_y")
        return young_from_table(spec.table_x, spec.table_y)
    if spec.growth is None:
        raise DomainError("tau_q needs a growth spec")
    return tau_q_young(build_growth(spec.growth), q=spec.q, p=spec.p)


def build_space(spec: m.SpaceSpec) -> FiniteSpace:
    return FiniteSpace(np.asarray(spec.weights, dtype=float), tuple((int(u), int(v), float(c)) for (u, v, c) in spec.edges))


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/measure", response_model=m.MeasureResponse)
def measure_endpoint(req: m.MeasureRequest):
    mea = build_line_measure(req.measure)
    mass = mea.integrate(lambda x: np.ones_like(x))
    rows = None
    if req.csv_points > 0:
        rows = [tuple(map(float, r)) for r in mea.export_rows(req.csv_points)]
    return m.MeasureResponse(
        normalization=mea.normalization,
        median=mea.median,
        support=mea.support,
        convention=f"density ~ exp(-{mea.scale_in_exponent:g}*V), V={mea.potential.name}",
        mass_error=abs(mass - 1.0),
        rows=rows,
    )


@app.post("/orlicz", response_model=m.OrliczResponse)
def orlicz_endpoint(req: m.OrliczRequest):
    tau = build_young(req.young)
    pair = make_pair(tau)
    scalar = None
    if req.normalize:
        pair = normalize_pair(pair)
        scalar = pair.normalization_scalar
    d2, d2fail = delta2_check(pair.tau)
    n2, _ = nabla2_check(pair.tau)
    ys = np.geomspace(1e-6, 1e6, req.sandwich_points)
    ok, lo, up = duality_sandwich_check(pair, ys)
    return m.OrliczResponse(
        description=pair.tau.description,
        tau_at_1=pair.tau1,
        tau_star_at_1=pair.tau_star1,
        normalization_scalar=scalar,
        delta2=None if d2 is None else (float(d2[0]), float(d2[1])),
        delta2_failure_ratio=d2fail,
        nabla2=None if n2 is None else (float(n2[0]), float(n2[1])),
        sandwich_ok=bool(ok),
        sandwich_lower_margin=float(lo),
        sandwich_upper_margin=float(up),
    )


def _auto_beta(req: m.CriteriaRequest) -> float:
    if req.beta is not None:
        return req.beta
    alpha = req.measure.potential.alpha
    if alpha is None:
        raise DomainError("beta omitted and the potential has no alpha to derive it from")
    return 2.0 * (1.0 - 1.0 / alpha)


@app.post("/criteria", response_model=m.CriterionReportModel)
def criteria_endpoint(req: m.CriteriaRequest):
    mea = build_line_measure(req.measure)
    if req.family == "poincare":
        rep = poincare_B(mea)
    elif req.family == "beckner_p":
        if req.p is None:
            raise DomainError("beckner_p needs p")
        rep = beckner_B(mea, req.p)
    elif req.family == "beckner_T":
        rep = beckner_BT(mea, power_T(_auto_beta(req)))
    elif req.family == "phi_sobolev":
        rep = phi_sobolev_D(mea, log_growth(), gamma=req.gamma, M=req.M)
    else:
        rep = rosen_D(mea, _auto_beta(req))
    d = _jsonable(rep.to_dict())
    return m.CriterionReportModel(
        family=d["family"],
        constant=d["constant"],
        extremizer=d["extremizer"],
        side=d["side"],
        bracket_lo=d["bracket_lo"],
        bracket_hi=d["bracket_hi"],
        convention=d["convention"],
        governing_result=d["governing_result"],
        extra=d["extra"],
        grid_stats=d["grid_stats"],
    )


@app.post("/schedule", response_model=m.ScheduleResponse)
def schedule_endpoint(req: m.ScheduleRequest):
    if req.growth.kind == "log":
        budget = budget_for_log(req.C_F, req.p, req.C_tilde_F)
    elif req.growth.kind == "f_alpha":
        if req.growth.alpha is None:
            raise DomainError("f_alpha needs alpha")
        budget = budget_for_f_alpha(req.growth.alpha, req.C_F, p=req.p, C_tilde=req.C_tilde_F)
    else:
        raise DomainError("schedules are certified for the log and f_alpha growth families only")
    sched = integrate_schedule(budget, req.horizon)
    take = np.unique(np.linspace(0, sched.t.size - 1, min(req.points, sched.t.size)).astype(int))
    rows = [(float(sched.t[i]), float(sched.q[i]), float(sched.prefactor[i])) for i in take]
    return m.ScheduleResponse(rows=rows, rate_margin=sched.rate_margin(), provenance=budget.provenance)


@app.post("/simulate", response_model=m.SimulateResponse)
def simulate_endpoint(req: m.SimulateRequest):
    batch = TrajectoryBatch(seed=req.seed, step=req.step, n_traj=req.n_traj)
    params = WellMethodParams(alpha=req.alpha, dimension=1, beta_split=req.beta_split)
    well = smoothed_well(req.alpha)
    rows = []
    for x in req.x_values:
        mc, err = estimate_weight_mean([x], req.t, batch, well)
        rows.append(m.SimulateRow(x=x, estimate=mc, stderr=err, envelope=well_envelope(params, [x], req.t)))
    mart = simulate_pt(lambda z: np.ones_like(z), [req.x_values[0] if req.x_values else 1.0], req.t, batch, well)
    return m.SimulateResponse(rows=rows, martingale_estimate=mart.weighted, martingale_stderr=mart.weighted_err)


@app.post("/concentration", response_model=m.ConcentrationResponse)
def concentration_endpoint(req: m.ConcentrationRequest):
    phi = power_rate(req.rate.exponent, req.rate.coefficient)
    selfcc = None
    if req.C_T is None:
        res = selfconsistency_check(phi)
        env: TailEnvelope = res["envelope"]
        selfcc = _jsonable({k: v for k, v in res.items() if k != "envelope"})
        c_t = env.C_T
    else:
        env = convex_rate_envelope(phi, req.C_T)
        c_t = req.C_T
    rows = []
    for t in req.t_values:
        r = tail_bound(env, float(t))
        rows.append(m.ConcentrationRow(t=r["t"], bound=r["bound"], regime=r["regime"], y_star=r["y_star"]))
    return m.ConcentrationResponse(C_T=c_t, rows=rows, selfconsistency=selfcc)


@app.post("/isoperimetry", response_model=m.IsoperimetryResponse)
def isoperimetry_endpoint(req: m.IsoperimetryRequest):
    half = max(req.t_points // 2, 5)
    t_grid = np.concatenate([np.geomspace(1e-4, 0.5, half), np.linspace(0.5, 1.0 - 1e-4, req.t_points - half + 1)[1:]])
    out = alpha_isoperimetry(req.alpha, tol=req.tol, t_grid=t_grid)
    return m.IsoperimetryResponse(route=_jsonable(out["route"]), assembly=_jsonable(out["assembly"]), rows=_jsonable(out["rows"]))


@app.post("/oracle", response_model=m.OracleResponse)
def oracle_endpoint(req: m.OracleRequest):
    space = build_space(req.space)
    rng = np.random.default_rng(req.seed)
    if req.check == "capacity":
        if not req.inner or req.outer is None:
            raise DomainError("capacity needs inner and outer sets")
        res = capacity(space, req.inner, req.outer)
        result = {"value": res.value, "minimizer": [float(v) for v in res.minimizer], "recheck": res.recheck(space)}
    elif req.check == "poincare":
        result = {"C_P": poincare_exact(space)}
    elif req.check == "hardy":
        if req.outer is None:
            raise DomainError("hardy needs the outer set")
        result = verify_hardy_reduction(space, req.outer)
        result = {k: (list(v) if isinstance(v, tuple) else v) for k, v in result.items()}
    elif req.check == "fsobcap":
        F_ind = lambda x: 1.0 if x >= 2.0 else 0.0
        result = verify_fsobcap(space, F_ind, 4.0, rng=rng)
        result = {k: (list(v) if isinstance(v, tuple) else v) for k, v in result.items()}
    elif req.check == "tensorization":
        if req.second_space is None:
            raise DomainError("tensorization needs second_space")
        other = build_space(req.second_space)
        result = verify_tensorization(space, other, lambda x: x * np.log(np.maximum(x, 1e-300)), corpus_size=req.corpus_size, rng=rng)
    elif req.check == "lem_ak":
        F_log = lambda x: math.log1p(x) ** 0.5
        lam = find_ak_lambda(F_log)
        seqs = [np.sort(rng.uniform(0.0, 0.5, size=10))[::-1] for _ in range(req.corpus_size)]
        result = verify_lem_ak(F_log, lam, seqs)
        result["lambda"] = lam
    else:
        growth = build_growth(req.growth) if req.growth else f_alpha(1.5)
        result = rothaus_deficit(space, growth, corpus_size=min(req.corpus_size, 400), rng=rng)
    return m.OracleResponse(check=req.check, result=_jsonable(result), convention=DISCRETE_GRADIENT_CONVENTION)


@app.post("/verify")
def verify_endpoint(req: m.VerifyRequest):
    return verify_suite(level=req.level, seed=req.seed, fault=req.fault)
