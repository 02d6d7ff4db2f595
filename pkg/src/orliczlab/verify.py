"""Acceptance battery: every checkable claim of the toolkit as a
deterministic pass/fail criterion.

The quick level runs everything except the two heavy Monte Carlo
criteria; the full level runs all fifteen at production sizes.  Outputs
contain no wall-clock data, so identical seeds give byte-identical
reports.
"""

from __future__ import annotations

import json
import math
from typing import Callable, Optional

import numpy as np

from . import __version__
from .criteria import poincare_B, power_T, rosen_D, ttilde_log
from .errors import OrliczLabError
from .finite import (
    find_ak_lambda,
    poincare_exact,
    product_space,
    random_space,
    verify_fsobcap,
    verify_hardy_reduction,
    verify_lem_ak,
    verify_tensorization,
)
from .growth import check_c1c2, f_alpha
from .isoperimetry import CHEEGER_PREFACTOR, bobkov_profile, cheeger_lower, l_alpha
from .langevin import (
    TrajectoryBatch,
    WellMethodParams,
    estimate_weight_mean,
    locate_hyperbound_threshold,
    quadratic_well,
    simulate_pt,
    smoothed_well,
    well_envelope,
)
from .measures import abs_power_potential, build_measure, u_alpha_potential
from .orlicz import OrliczSample, duality_sandwich_check, gauge_norm, make_pair, power_young, tau_q_young
from .pipeline import alpha_isoperimetry
from .schedule import budget_for_log, integrate_schedule

__all__ = ["verify_suite", "run_criterion", "CRITERIA", "canonical_json"]


def canonical_json(obj) -> str:
    """Stable serialization: sorted keys, fixed separators, plain floats."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=False)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, float) and (math.isnan(obj) or math.isinf(obj)):
        return repr(obj)
    return obj


def _standard_pairs():
    """Five pairs used across the gauge criteria, heaviest ones last."""
    pairs = [
        make_pair(power_young(2.0, 2.0), power_young(2.0, 0.5), description="square"),
        make_pair(power_young(2.0), power_young(2.0), description="half_square"),
        make_pair(power_young(3.0), power_young(1.5), description="cubic"),
        make_pair(tau_q_young(f_alpha(1.5), q=1.0), description="tau_q(1.5,1)"),
        make_pair(tau_q_young(f_alpha(1.25), q=0.5), description="tau_q(1.25,0.5)"),
    ]
    return pairs


def _test_functions(measure, rng, count):
    fns = []
    for _ in range(count):
        a = rng.uniform(0.2, 2.0)
        b = rng.uniform(-1.5, 1.5)
        c = rng.uniform(0.0, 1.2)
        kind = rng.integers(0, 3)
        if kind == 0:
            fns.append(lambda x, a=a, b=b: a * np.abs(np.sin(x + b)) + 0.1)
        elif kind == 1:
            fns.append(lambda x, a=a, c=c: a * np.exp(-c * x**2) + 0.05 * np.abs(x))
        else:
            fns.append(lambda x, a=a, b=b: np.abs(b + a * x))
    return [OrliczSample.from_callable(measure, f) for f in fns]


def crit_orlicz_fixed_point(level: str, seed: int) -> dict:
    rng = np.random.default_rng(seed + 1)
    nu = build_measure(u_alpha_potential(1.5), 2.0, 1e-9)
    pairs = _standard_pairs()
    n_fn = 50 if level == "full" else 20
    samples = _test_functions(nu, rng, n_fn)
    worst_fp = 0.0
    worst_unit = 0.0
    one = OrliczSample.from_callable(nu, lambda x: np.ones_like(x))
    for pair in pairs:
        worst_unit = max(worst_unit, abs(gauge_norm(one, pair) - 1.0))
        for s in samples:
            n = gauge_norm(s, pair, tol=1e-12)
            if n > 0:
                worst_fp = max(worst_fp, abs(s.modular(pair.tau, n) - pair.tau1))
    return {
        "passed": bool(worst_fp <= 1e-6 and worst_unit <= 1e-9),
        "worst_fixed_point_gap": worst_fp,
        "worst_unit_norm_gap": worst_unit,
        "pairs": len(pairs),
        "functions": n_fn,
    }


def crit_duality_sandwich(level: str, seed: int) -> dict:
    ys = np.geomspace(1e-6, 1e6, 40)
    worst_lo = math.inf
    worst_up = math.inf
    for pair in _standard_pairs():
        ok, lo, up = duality_sandwich_check(pair, ys)
        worst_lo = min(worst_lo, lo)
        worst_up = min(worst_up, up)
    return {
        "passed": bool(worst_lo >= -1e-7 and worst_up >= -1e-7),
        "worst_lower_margin": worst_lo,
        "worst_upper_margin": worst_up,
        "y_points": 40,
    }


def crit_muckenhoupt_exponential(level: str, seed: int) -> dict:
    m = build_measure(abs_power_potential(1.0), 1.0, 1e-9)
    rep = poincare_B(m)
    b = rep.constant_value
    tol = 1e-4
    contains = (b - tol) <= 4.0 <= 4.0 * (b + tol)
    return {
        "passed": bool(abs(b - 1.0) <= tol and contains),
        "B": b,
        "bracket": [b, 4.0 * b],
        "exact_spectral_constant": 4.0,
    }


def crit_rate_transform_sandwich(level: str, seed: int) -> dict:
    violations = 0
    worst = 0.0
    for beta in (0.25, 0.5, 0.75, 1.0):
        T = power_T(beta)
        for X in np.geomspace(math.e, 1e6, 25):
            v, _ = ttilde_log(T, math.log(X))
            bound = float(T(np.asarray(1.0 / math.log(X))))
            lo, up = 1.0 / (3.0 * bound), 1.0 / bound
            if not (lo * (1 - 1e-9) <= v <= up * (1 + 1e-9)):
                violations += 1
            worst = max(worst, max(lo / v - 1.0, v / up - 1.0))
    return {"passed": bool(violations == 0), "violations": violations, "worst_overshoot": worst}


def crit_rosen_uniformity(level: str, seed: int) -> dict:
    alphas = (1.1, 1.3, 1.5, 1.7, 1.9)
    values = {}
    for a in alphas:
        nu = build_measure(u_alpha_potential(a), 2.0, 1e-9)
        values[str(a)] = rosen_D(nu, 2.0 * (1.0 - 1.0 / a)).constant_value
    ratio = max(values.values()) / min(values.values())
    return {"passed": bool(all(np.isfinite(list(values.values()))) and ratio <= 10.0), "D_by_alpha": values, "max_over_min": ratio}


def crit_gross_recovery(level: str, seed: int) -> dict:
    worst = 0.0
    C = 2.0
    for p in (1.5, 2.0, 3.0):
        sch = integrate_schedule(budget_for_log(C, p), horizon=3.0 * C)
        exact = np.expm1(4.0 * (p - 1.0) * sch.t / (p * C))
        rel = float(np.max(np.abs(sch.q - exact) / np.maximum(np.abs(exact), 1e-12)))
        worst = max(worst, rel)
    return {"passed": bool(worst <= 1e-6), "worst_relative_error": worst, "p_values": [1.5, 2.0, 3.0]}


def crit_well_envelope(level: str, seed: int) -> dict:
    n_traj = 100_000 if level == "full" else 20_000
    batch = TrajectoryBatch(seed=seed + 7, step=1e-3, n_traj=n_traj)
    params = WellMethodParams(alpha=1.5, dimension=1, beta_split=0.5)
    well = smoothed_well(1.5)
    cells = []
    ok = True
    for x in (3.0, 5.0, 8.0):
        for t in (0.5, 1.0):
            mc, err = estimate_weight_mean([x], t, batch, well)
            env = well_envelope(params, [x], t)
            below = mc <= env + 3.0 * err
            ok = ok and below
            cells.append({"x": x, "t": t, "mc": mc, "stderr": err, "envelope": env, "below": bool(below)})
    return {"passed": bool(ok), "cells": cells, "n_traj": n_traj}


def crit_hyperbound_threshold(level: str, seed: int) -> dict:
    rows = []
    ok = True
    for alpha in (1.25, 1.5, 1.75):
        beta = 2.0 * (1.0 - 1.0 / alpha)
        found = locate_hyperbound_threshold(alpha, lambda v, b=beta: v**b)
        target = 1.0 / alpha**2
        rel = abs(found - target) / target
        ok = ok and rel <= 0.05
        rows.append({"alpha": alpha, "threshold": found, "target": target, "relative_error": rel})
    return {"passed": bool(ok), "rows": rows}


def crit_ou_oracle(level: str, seed: int) -> dict:
    n_traj = 40_000 if level == "full" else 8_000
    batch = TrajectoryBatch(seed=seed + 9, step=1e-3, n_traj=n_traj)
    well = quadratic_well(1.0)
    cells = []
    ok = True
    for x in (0.5, 1.0, -0.7):
        for t in (0.25, 0.5, 1.0):
            est = simulate_pt(lambda z: z, [x], t, batch, well)
            exact = x * math.exp(-2.0 * t)
            sw = abs(est.weighted - exact) / max(est.weighted_err, 1e-300)
            sd = abs(est.direct - exact) / max(est.direct_err, 1e-300)
            good = sw <= 3.0 and sd <= 3.0
            ok = ok and good
            cells.append({"x": x, "t": t, "exact": exact, "weighted": est.weighted, "weighted_sigma": sw, "direct": est.direct, "direct_sigma": sd, "ok": bool(good)})
    est1 = simulate_pt(lambda z: np.ones_like(z), [1.2], 0.5, batch, smoothed_well(1.5))
    unit_ok = abs(est1.weighted - 1.0) <= 3.0 * max(est1.weighted_err, 1e-300)
    ok = ok and unit_ok
    return {"passed": bool(ok), "cells": cells, "unit_estimate": est1.weighted, "unit_stderr": est1.weighted_err, "n_traj": n_traj}


def crit_isoperimetry_domination(level: str, seed: int) -> dict:
    rows = []
    ok = True
    t_grid = np.concatenate([np.geomspace(1e-4, 0.5, 60), np.linspace(0.5, 1.0 - 1e-4, 41)[1:]])
    for alpha in (1.25, 1.5, 1.75):
        res = alpha_isoperimetry(alpha, t_grid=t_grid)
        K = res["assembly"]["K"]
        viol = sum(1 for r in res["rows"] if r["assembled"] > r["profile"] + 1e-12)
        ok = ok and (K > 0) and viol == 0
        rows.append({"alpha": alpha, "K": K, "grid_points": len(res["rows"]), "violations": viol})
    return {"passed": bool(ok), "rows": rows}


def crit_cheeger_arithmetic(level: str, seed: int) -> dict:
    value = cheeger_lower(1.0, 0.5)
    target = CHEEGER_PREFACTOR * 0.25
    ok_value = abs(value - target) <= 1e-6
    lam = 0.25
    ts = np.linspace(0.01, 0.99, 99)
    dominated = bool(np.all(cheeger_lower(lam, ts) <= np.minimum(ts, 1 - ts) + 1e-12))
    return {"passed": bool(ok_value and dominated), "value": value, "target": target, "exponential_dominated": dominated}


def crit_finite_oracle_bracket(level: str, seed: int) -> dict:
    rng = np.random.default_rng(seed + 12)
    n_spaces = 100 if level == "full" else 30
    worst_ratio = 0.0
    hardy_viol = 0
    for _ in range(n_spaces):
        n = int(rng.integers(4, 11))
        sp = random_space(n, rng)
        k = int(rng.integers(1, n))
        omega = tuple(int(v) for v in rng.choice(n, size=k, replace=False))
        rep = verify_hardy_reduction(sp, omega)
        worst_ratio = max(worst_ratio, rep["ratio"])
        if not rep["bracket_ok"]:
            hardy_viol += 1
    n_seq = 1000 if level == "full" else 200
    seqs = [np.sort(rng.uniform(0.0, 0.5, size=10))[::-1] for _ in range(n_seq)]
    F_log = lambda x: math.log1p(x) ** 0.5
    lam = find_ak_lambda(F_log)
    ak = verify_lem_ak(F_log, lam, seqs)
    fsob_viol = 0
    n_fsob = 12 if level == "full" else 5
    F_ind = lambda x: 1.0 if x >= 2.0 else 0.0
    for _ in range(n_fsob):
        sp = random_space(int(rng.integers(5, 9)), rng)
        rep = verify_fsobcap(sp, F_ind, 4.0, rng=rng)
        if not rep["passed"]:
            fsob_viol += 1
    return {
        "passed": bool(hardy_viol == 0 and ak["passed"] and fsob_viol == 0 and worst_ratio <= 11.1),
        "hardy_spaces": n_spaces,
        "hardy_violations": hardy_viol,
        "worst_C_over_B": worst_ratio,
        "ak_sequences": n_seq,
        "ak_passed": bool(ak["passed"]),
        "fsobcap_spaces": n_fsob,
        "fsobcap_violations": fsob_viol,
    }


def crit_tensorization(level: str, seed: int) -> dict:
    rng = np.random.default_rng(seed + 13)
    n_pairs = 20 if level == "full" else 8
    worst_gap = 0.0
    for _ in range(n_pairs):
        s1 = random_space(int(rng.integers(3, 6)), rng)
        s2 = random_space(int(rng.integers(3, 6)), rng)
        lam1 = 1.0 / poincare_exact(s1)
        lam2 = 1.0 / poincare_exact(s2)
        lamp = 1.0 / poincare_exact(product_space(s1, s2))
        worst_gap = max(worst_gap, abs(lamp - min(lam1, lam2)))
    corpus = 10_000 if level == "full" else 2_000
    s1 = random_space(4, rng)
    s2 = random_space(5, rng)
    rep = verify_tensorization(s1, s2, lambda x: x * np.log(np.maximum(x, 1e-300)), corpus_size=corpus, rng=rng)
    return {
        "passed": bool(worst_gap <= 1e-10 and rep["passed"]),
        "eigen_pairs": n_pairs,
        "worst_eigen_gap": worst_gap,
        "corpus": corpus,
        "xlogx_fraction_of_bound": rep["worst_fraction_of_bound"],
    }


def crit_growth_certificates(level: str, seed: int) -> dict:
    worst_margin1 = math.inf
    worst_factor = 0.0
    worst_margin2 = math.inf
    for beta_idx in range(5):
        alpha_of_beta = lambda b: 2.0 / (2.0 - b)
        beta = 0.25 * beta_idx
        (c1, c2), info = check_c1c2(alpha_of_beta(beta))
        worst_margin1 = min(worst_margin1, info["margin_log_bound"])
        worst_factor = max(worst_factor, info["worst_square_factor"])
        worst_margin2 = min(worst_margin2, info["margin_square_bound"])
    return {
        "passed": bool(worst_margin1 >= -1e-12 and worst_factor <= 8.0 and worst_margin2 >= -1e-12),
        "worst_log_margin": worst_margin1,
        "worst_square_factor": worst_factor,
        "worst_square_margin": worst_margin2,
        "c1": 1.0,
        "c2": 8.0,
    }


def _determinism_payload(seed: int) -> str:
    parts = {
        "muckenhoupt": crit_muckenhoupt_exponential("quick", seed),
        "gross": crit_gross_recovery("quick", seed),
        "cheeger": crit_cheeger_arithmetic("quick", seed),
        "growth": crit_growth_certificates("quick", seed),
        "finite": crit_finite_oracle_bracket("quick", seed),
    }
    return canonical_json(parts)


def crit_determinism(level: str, seed: int) -> dict:
    first = _determinism_payload(seed)
    second = _determinism_payload(seed)
    return {"passed": bool(first == second), "payload_bytes": len(first)}


CRITERIA = (
    (1, "orlicz_fixed_point", crit_orlicz_fixed_point, False),
    (2, "duality_sandwich", crit_duality_sandwich, False),
    (3, "muckenhoupt_exponential", crit_muckenhoupt_exponential, False),
    (4, "rate_transform_sandwich", crit_rate_transform_sandwich, False),
    (5, "rosen_uniformity", crit_rosen_uniformity, False),
    (6, "gross_recovery", crit_gross_recovery, False),
    (7, "well_envelope_monte_carlo", crit_well_envelope, True),
    (8, "hyperbound_threshold", crit_hyperbound_threshold, False),
    (9, "ou_oracle_monte_carlo", crit_ou_oracle, True),
    (10, "isoperimetry_domination", crit_isoperimetry_domination, False),
    (11, "cheeger_arithmetic", crit_cheeger_arithmetic, False),
    (12, "finite_oracle_bracket", crit_finite_oracle_bracket, False),
    (13, "tensorization", crit_tensorization, False),
    (14, "growth_certificates", crit_growth_certificates, False),
    (15, "determinism", crit_determinism, False),
)


def run_criterion(cid: int, level: str = "quick", seed: int = 2026, fault: Optional[str] = None) -> dict:
    """Run one criterion; `fault` names a criterion to corrupt (test
    fixture for fault injection)."""
    entry = next((e for e in CRITERIA if e[0] == cid), None)
    if entry is None:
        raise KeyError(f"unknown criterion {cid}")
    _, name, fn, _ = entry
    try:
        out = fn(level, seed)
    except OrliczLabError as exc:
        out = {"passed": False, "error": f"{type(exc).__name__}: {exc}"}
    if fault == name:
        out = dict(out)
        out["passed"] = False
        out["fault_injected"] = True
    out.update({"id": cid, "name": name})
    return _plain(out)


def verify_suite(level: str = "quick", seed: int = 2026, fault: Optional[str] = None) -> dict:
    """Run the battery; quick skips the Monte Carlo criteria."""
    if level not in ("quick", "full"):
        raise ValueError("level must be quick or full")
    results = []
    for cid, name, fn, heavy in CRITERIA:
        if heavy and level == "quick":
            results.append({"id": cid, "name": name, "passed": None, "skipped": "monte carlo criterion; run level=full"})
            continue
        results.append(run_criterion(cid, level, seed, fault))
    ran = [r for r in results if r.get("passed") is not None]
    return {
        "level": level,
        "seed": seed,
        "version": __version__,
        "criteria": results,
        "all_passed": bool(all(r["passed"] for r in ran)),
        "ran": len(ran),
        "skipped": len(results) - len(ran),
    }
