"""Command-line client for the compute service.

The CLI builds a request payload, sends it to the FastAPI app (in-process
by default, or to a remote server via --server), and writes the JSON
report (plus optional CSV).  Every report embeds the resolved
configuration; identical configuration and seed give byte-identical
reports.

Exit codes: 0 success, 2 hypothesis violation (or failed verification),
1 configuration or runtime error.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from typing import Optional

from .errors import ConfigError
from .verify import canonical_json

DEFAULT_SEED_ENV = "ORLICZLAB_SEED"


def _default_seed() -> int:
    try:
        return int(os.environ.get(DEFAULT_SEED_ENV, "2026"))
    except ValueError:
        return 2026


# one source of truth for options: (name, type, default, help)
_SPECS = {
    "measure": [
        ("measure", str, "u_alpha:1.5", "potential token: u_alpha:A | nu_alpha:A | abs_power:E[:C] | table:PATH"),
        ("scale", float, None, "exponent scale (defaults: 2 for u_alpha/nu_alpha, 1 for abs_power/table)"),
        ("tol", float, 1e-9, "quadrature tolerance"),
        ("csv-points", int, 200, "rows in the CSV dump (0 disables)"),
    ],
    "orlicz": [
        ("young", str, "power:2", "Young token: power:P[:C] | tau_q:P:Q:F (F = f_alpha:A | f_alpha_tilde:A:R | log)"),
        ("normalize", int, 0, "1 to rescale so tau(1)+tau*(1)=1"),
    ],
    "criteria": [
        ("measure", str, "nu_alpha:1.5", "potential token"),
        ("scale", float, None, "exponent scale override"),
        ("tol", float, 1e-9, "quadrature tolerance"),
        ("family", str, "rosen", "poincare | beckner | beckner_T | phi_sobolev | rosen"),
        ("p", float, 1.5, "fixed p for the beckner family"),
        ("beta", str, "auto", "exponent for rosen/beckner_T ('auto' = 2(1-1/alpha))"),
        ("gamma", float, 1.0, "slope bound for phi_sobolev"),
        ("big-m", float, 0.0, "submultiplicative shift for phi_sobolev"),
    ],
    "schedule": [
        ("F", str, "f_alpha:1.5", "growth token: f_alpha:A | log"),
        ("p", float, 2.0, "base exponent"),
        ("CF", float, None, "F-Sobolev constant (required)"),
        ("Ctilde", float, 0.0, "defective constant"),
        ("horizon", float, 1.0, "integration horizon"),
        ("points", int, 64, "rows in the schedule dump"),
    ],
    "simulate": [
        ("alpha", float, 1.5, "well exponent"),
        ("t", float, 1.0, "time horizon"),
        ("x", str, "3,5,8", "comma-separated start points"),
        ("n-traj", int, 20000, "trajectories"),
        ("step", float, 1e-3, "Euler step"),
        ("seed", int, None, "RNG seed (default: env or 2026)"),
        ("beta-split", float, 0.5, "envelope split parameter"),
    ],
    "concentration": [
        ("phi", str, "power:1.5", "convex rate token power:E[:C]"),
        ("CT", float, None, "generalized inequality constant (omit to self-derive)"),
        ("t", str, "1,2,4,8", "comma-separated deviation levels"),
    ],
    "isoperimetry": [
        ("alpha", float, 1.5, "well exponent"),
        ("tol", float, 1e-9, "quadrature tolerance"),
        ("t-points", int, 100, "profile grid size"),
    ],
    "oracle": [
        ("space", str, None, "path to a space file (state/edge lines); required"),
        ("check", str, "poincare", "capacity | poincare | hardy | fsobcap | tensorization | rothaus | lem_ak"),
        ("inner", str, "", "comma-separated inner set"),
        ("outer", str, "", "comma-separated outer set"),
        ("second-space", str, "", "path to the second space (tensorization)"),
        ("seed", int, None, "RNG seed"),
        ("corpus-size", int, 2000, "corpus / sequence count"),
    ],
    "verify": [
        ("level", str, "quick", "quick | full"),
        ("seed", int, None, "RNG seed"),
        ("fault", str, "", "criterion name to corrupt (fault-injection fixture)"),
    ],
}

_COMMON = [
    ("server", str, "", "base URL of a running service (default: in-process)"),
    ("output", str, "", "write the JSON report here (default: stdout)"),
    ("csv", str, "", "write row data as CSV here"),
    ("config", str, "", "INI config file ([run] command=...; one section per command)"),
]


def _dest(name: str) -> str:
    return name.replace("-", "_")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orliczlab", description="functional-inequality toolkit for 1-D Boltzmann measures")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, specs in _SPECS.items():
        p = sub.add_parser(cmd)
        for name, typ, default, help_ in specs + _COMMON:
            p.add_argument(f"--{name}", type=typ, default=default, help=help_, dest=_dest(name))
    return parser


def load_config(path: str, command: str) -> dict:
    """INI config: [run] picks the command; [<command>] holds options.
    Unknown sections or keys raise ConfigError naming the offender."""
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    known_sections = {"run", *(_SPECS.keys())}
    for section in cp.sections():
        if section not in known_sections:
            raise ConfigError(f"unknown config section [{section}]")
    out = {}
    if cp.has_section("run"):
        for key, val in cp.items("run"):
            if key != "command":
                raise ConfigError(f"unknown key '{key}' in [run]")
            if val not in _SPECS:
                raise ConfigError(f"unknown command '{val}' in [run]")
            out["command"] = val
    section = out.get("command", command)
    if section and cp.has_section(section):
        allowed = { _dest(n): t for n, t, _, _ in _SPECS[section] + _COMMON }
        for key, val in cp.items(section):
            dkey = _dest(key)
            if dkey not in allowed:
                raise ConfigError(f"unknown key '{key}' in [{section}]")
            try:
                out[dkey] = allowed[dkey](val)
            except ValueError as exc:
                raise ConfigError(f"bad value for '{key}' in [{section}]: {exc}") from exc
    return out


def _parse_token(token: str, what: str):
    parts = token.split(":")
    return parts[0], parts[1:]


def _measure_payload(measure_token: str, scale: Optional[float], tol: float) -> dict:
    kind, args = _parse_token(measure_token, "measure")
    if kind == "nu_alpha":
        if len(args) != 1:
            raise ConfigError("nu_alpha token needs one parameter: nu_alpha:ALPHA")
        return {"potential": {"kind": "u_alpha", "alpha": float(args[0])}, "scale": scale if scale is not None else 2.0, "tol": tol}
    if kind == "u_alpha":
        if len(args) != 1:
            raise ConfigError("u_alpha token needs one parameter: u_alpha:ALPHA")
        return {"potential": {"kind": "u_alpha", "alpha": float(args[0])}, "scale": scale if scale is not None else 2.0, "tol": tol}
    if kind == "abs_power":
        if not 1 <= len(args) <= 2:
            raise ConfigError("abs_power token: abs_power:EXPONENT[:COEFFICIENT]")
        coeff = float(args[1]) if len(args) == 2 else 1.0
        return {"potential": {"kind": "abs_power", "alpha": float(args[0]), "coefficient": coeff}, "scale": scale if scale is not None else 1.0, "tol": tol}
    if kind == "table":
        if len(args) != 1:
            raise ConfigError("table token: table:PATH (CSV rows x,V)")
        import numpy as np

        data = np.loadtxt(args[0], delimiter=",")
        return {"potential": {"kind": "table", "table_x": data[:, 0].tolist(), "table_v": data[:, 1].tolist()}, "scale": scale if scale is not None else 1.0, "tol": tol}
    raise ConfigError(f"unknown measure kind '{kind}'")


def _growth_payload(token: str) -> dict:
    kind, args = _parse_token(token, "growth")
    if kind == "f_alpha":
        return {"kind": "f_alpha", "alpha": float(args[0])}
    if kind == "f_alpha_tilde":
        return {"kind": "f_alpha_tilde", "alpha": float(args[0]), "rho": float(args[1])}
    if kind == "log":
        return {"kind": "log"}
    raise ConfigError(f"unknown growth kind '{kind}'")


def _young_payload(token: str) -> dict:
    kind, args = _parse_token(token, "young")
    if kind == "power":
        out = {"kind": "power", "p": float(args[0])}
        if len(args) > 1:
            out["coefficient"] = float(args[1])
        return out
    if kind == "tau_q":
        return {"kind": "tau_q", "p": float(args[0]), "q": float(args[1]), "growth": _growth_payload(":".join(args[2:]))}
    raise ConfigError(f"unknown Young kind '{kind}'")


def _int_list(text: str):
    return [int(v) for v in text.split(",") if v.strip() != ""]


def _float_list(text: str):
    return [float(v) for v in text.split(",") if v.strip() != ""]


def load_space_file(path: str) -> dict:
    """Space file: lines 'state INDEX WEIGHT' and 'edge U V CONDUCTANCE';
    '#' starts a comment."""
    states = {}
    edges = []
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                if parts[0] == "state" and len(parts) == 3:
                    states[int(parts[1])] = float(parts[2])
                elif parts[0] == "edge" and len(parts) == 4:
                    edges.append((int(parts[1]), int(parts[2]), float(parts[3])))
                else:
                    raise ConfigError(f"{path}:{lineno}: cannot parse '{line}'")
    except OSError as exc:
        raise ConfigError(f"cannot read space file: {exc}") from exc
    if not states:
        raise ConfigError(f"{path}: no states")
    n = max(states) + 1
    weights = [states.get(i) for i in range(n)]
    if any(w is None for w in weights):
        raise ConfigError(f"{path}: states must be contiguous 0..{n-1}")
    return {"weights": weights, "edges": edges}


def build_request(args) -> tuple:
    """(endpoint path, payload, csv row extractor) for the parsed args."""
    cmd = args.command
    seed_default = _default_seed()
    if cmd == "measure":
        payload = {"measure": _measure_payload(args.measure, args.scale, args.tol), "csv_points": args.csv_points}
        return "/measure", payload, lambda body: (("x", "density", "cdf"), body.get("rows") or [])
    if cmd == "orlicz":
        payload = {"young": _young_payload(args.young), "normalize": bool(args.normalize)}
        return "/orlicz", payload, None
    if cmd == "criteria":
        family = {"rosen": "rosen_beta", "beckner": "beckner_p"}.get(args.family, args.family)
        payload = {"measure": _measure_payload(args.measure, args.scale, args.tol), "family": family}
        if family == "beckner_p":
            payload["p"] = args.p
        if family in ("rosen_beta", "beckner_T") and args.beta != "auto":
            payload["beta"] = float(args.beta)
        if family == "phi_sobolev":
            payload["gamma"] = args.gamma
            payload["M"] = args.big_m
        return "/criteria", payload, None
    if cmd == "schedule":
        if args.CF is None:
            raise ConfigError("schedule needs --CF (an F-Sobolev constant)")
        payload = {"growth": _growth_payload(args.F), "p": args.p, "C_F": args.CF, "C_tilde_F": args.Ctilde, "horizon": args.horizon, "points": args.points}
        return "/schedule", payload, lambda body: (("t", "q", "prefactor"), body["rows"])
    if cmd == "simulate":
        payload = {
            "alpha": args.alpha,
            "t": args.t,
            "x_values": _float_list(args.x),
            "n_traj": args.n_traj,
            "step": args.step,
            "seed": args.seed if args.seed is not None else seed_default,
            "beta_split": args.beta_split,
        }
        return "/simulate", payload, lambda body: (("x", "estimate", "stderr", "envelope"), [(r["x"], r["estimate"], r["stderr"], r["envelope"]) for r in body["rows"]])
    if cmd == "concentration":
        kind, rate_args = _parse_token(args.phi, "rate")
        if kind != "power":
            raise ConfigError("rate token must be power:EXPONENT[:COEFFICIENT]")
        rate = {"kind": "power", "exponent": float(rate_args[0])}
        if len(rate_args) > 1:
            rate["coefficient"] = float(rate_args[1])
        payload = {"rate": rate, "t_values": _float_list(args.t)}
        if args.CT is not None:
            payload["C_T"] = args.CT
        return "/concentration", payload, lambda body: (("t", "bound", "regime"), [(r["t"], r["bound"], r["regime"]) for r in body["rows"]])
    if cmd == "isoperimetry":
        payload = {"alpha": args.alpha, "tol": args.tol, "t_points": args.t_points}
        return "/isoperimetry", payload, lambda body: (("t", "profile", "l_alpha", "assembled"), [(r["t"], r["profile"], r["l_alpha"], r["assembled"]) for r in body["rows"]])
    if cmd == "oracle":
        if not args.space:
            raise ConfigError("oracle needs --space FILE")
        payload = {
            "space": load_space_file(args.space),
            "check": args.check,
            "seed": args.seed if args.seed is not None else seed_default,
            "corpus_size": args.corpus_size,
        }
        if args.inner:
            payload["inner"] = _int_list(args.inner)
        if args.outer:
            payload["outer"] = _int_list(args.outer)
        if args.second_space:
            payload["second_space"] = load_space_file(args.second_space)
        return "/oracle", payload, None
    if cmd == "verify":
        if args.level not in ("quick", "full"):
            raise ConfigError("verify --level must be quick or full")
        payload = {"level": args.level, "seed": args.seed if args.seed is not None else seed_default}
        if args.fault:
            payload["fault"] = args.fault
        return "/verify", payload, None
    raise ConfigError(f"unknown command {cmd}")


def post(path: str, payload: dict, server: str = "") -> tuple:
    """POST to the in-process app or a remote server; (status, body)."""
    if server:
        import httpx

        resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=3600.0)
        return resp.status_code, resp.json()
    from fastapi.testclient import TestClient

    from .service.app import app

    with TestClient(app, raise_server_exceptions=False) as client:
        resp = client.post(path, json=payload)
        return resp.status_code, resp.json()


def write_csv(path: str, header, rows) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # pre-scan for --config so its values become defaults
    try:
        pre, _ = parser.parse_known_args(argv)
    except SystemExit:
        return 1
    try:
        if getattr(pre, "config", ""):
            overrides = load_config(pre.config, pre.command)
            cmd = overrides.pop("command", pre.command)
            if cmd != pre.command and pre.command not in argv:
                raise ConfigError(f"config selects command '{cmd}' but CLI invoked '{pre.command}'")
            base = [pre.command] + argv[1:] if argv and argv[0] in _SPECS else argv
            args = parser.parse_args(base)
            for key, val in overrides.items():
                # CLI flags win: only fill values the user left at default
                if f"--{key.replace('_', '-')}" not in argv:
                    setattr(args, key, val)
        else:
            args = parser.parse_args(argv)
        path, payload, row_fn = build_request(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        status, body = post(path, payload, args.server)
    except Exception as exc:  # connection failures, bad server
        print(f"request failed: {exc}", file=sys.stderr)
        return 1

    resolved = {k: v for k, v in vars(args).items() if k not in ("config", "output", "csv", "server")}
    report = {"endpoint": path, "config": resolved, "status_code": status, "result": body}
    text = canonical_json(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)

    if status == 422 and isinstance(body, dict) and body.get("category") == "hypothesis_violation":
        return 2
    if status != 200:
        if status == 422:  # pydantic validation errors: bad request shape
            return 1
        return 1
    if args.csv and row_fn is not None:
        header, rows = row_fn(body)
        if rows:
            write_csv(args.csv, header, rows)
    if args.command == "verify" and not body.get("all_passed", False):
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
