"""Command-line front end: config handling and structured data emission.

Commands: ``frozen``, ``upo find``, ``simulate``, ``eta-scan``,
``critical-rates``.  A JSON config file supplies the run parameters; flags
override individual keys.  Exit codes: 0 success (including empty result
sets), 2 config error, 3 numerical failure.

All floating-point output is printed with 15 significant digits.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import sys
from typing import Any

from .errors import Blowup, ConfigError, NumericalError
from .frozen import equilibrium_eigenvalues, locate_hopf
from .integrate import IntegratorConfig, integrate, integrate_with_events
from .poincare import DEFAULT_SECTION, MIN_FLIGHT_TIME, return_map
from .shift import ShiftKind, ShiftProfile, eval_shift
from .system import (
    NonautonomousSpec,
    RosslerParams,
    equilibria,
    vector_field_frozen,
    vector_field_nonautonomous,
)
from .tracking import (
    ConfirmConfig,
    GapMode,
    PullbackRunConfig,
    RefineConfig,
    find_critical_rates,
    resolve_z_init,
    scan_eta,
)
from .upo import find_fixed_point, seed_guess_from_recurrence

DEFAULT_CONFIG: dict[str, Any] = {
    "system": {"a": 0.2, "b": 0.2, "c": 5.7},
    "shift": {
        "kind": "tanh",
        "lambda_minus": -0.2,
        "lambda_plus": 0.2,
        "delta": 0.001,
    },
    "rate": {"r": None, "scan": {"r_min": 0.9, "r_max": 1.0, "samples": 201}},
    "run": {"z_init": [-0.007, 0.035, -0.035], "t_start": -30.0, "T": 150.0},
    "integrate": {"rtol": 1e-12, "atol": 1e-12, "h_max": 0.1, "max_steps": 100_000_000},
    "refine": {"tol_r": 1e-9, "tol_eta": 1e-6, "max_iter": 80},
    "confirm": {"shadow_periods": 3, "tube_eps": 0.05},
    "gap_mode": "unstable_coefficient",
}


def fmt(x: float) -> str:
    return f"{x:.15g}"


def _round_floats(obj):
    """Round every float in a JSON-ready structure to 15 significant digits."""
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def emit_json(obj, out: str | None) -> None:
    text = json.dumps(_round_floats(obj), indent=2)
    if out in (None, "-"):
        print(text)
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _merge_config(base: dict, override: dict, path: str = "") -> dict:
    """Deep-merge ``override`` into ``base``, rejecting unknown keys."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        here = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"unknown config key: {here}")
        if isinstance(base[key], dict) and not isinstance(value, dict):
            raise ConfigError(f"config key {here} must be an object")
        if isinstance(base[key], dict) and isinstance(value, dict):
            merged[key] = _merge_config(base[key], value, here)
        else:
            merged[key] = value
    return merged


def load_config(path: str | None) -> dict:
    if path is None:
        return copy.deepcopy(DEFAULT_CONFIG)
    try:
        with open(path) as fh:
            user = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(user, dict):
        raise ConfigError("config root must be a JSON object")
    return _merge_config(DEFAULT_CONFIG, user)


def _apply_overrides(config: dict, args: argparse.Namespace) -> dict:
    pairs = {
        "a": ("system", "a"),
        "b": ("system", "b"),
        "c": ("system", "c"),
        "rate": ("rate", "r"),
        "r_min": ("rate", "scan", "r_min"),
        "r_max": ("rate", "scan", "r_max"),
        "samples": ("rate", "scan", "samples"),
        "t_start": ("run", "t_start"),
        "horizon": ("run", "T"),
        "rtol": ("integrate", "rtol"),
        "atol": ("integrate", "atol"),
        "gap_mode": ("gap_mode",),
        "tube_eps": ("confirm", "tube_eps"),
        "shadow_periods": ("confirm", "shadow_periods"),
    }
    for attr, keys in pairs.items():
        value = getattr(args, attr, None)
        if value is None:
            continue
        target = config
        for key in keys[:-1]:
            target = target[key]
        target[keys[-1]] = value
    z_init = getattr(args, "z_init", None)
    if z_init is not None:
        if z_init.strip() == "auto":
            config["run"]["z_init"] = "auto"
        else:
            try:
                parts = [float(p) for p in z_init.split(",")]
            except ValueError:
                raise ConfigError(f"--z-init must be 'auto' or x,y,z; got {z_init!r}")
            if len(parts) != 3:
                raise ConfigError("--z-init needs exactly three components")
            config["run"]["z_init"] = parts
    return config


# -- typed views of the validated config ------------------------------------

def _shift_from(config: dict) -> ShiftProfile:
    raw = config["shift"]
    try:
        kind = ShiftKind(raw["kind"])
    except ValueError:
        valid = ", ".join(k.value for k in ShiftKind)
        raise ConfigError(f"shift.kind must be one of {valid}; got {raw['kind']!r}")
    return ShiftProfile(kind, float(raw["lambda_minus"]), float(raw["lambda_plus"]),
                        None if raw["delta"] is None else float(raw["delta"]))


def _integ_from(config: dict) -> IntegratorConfig:
    raw = config["integrate"]
    return IntegratorConfig(
        rtol=float(raw["rtol"]),
        atol=float(raw["atol"]),
        h_max=float(raw["h_max"]),
        max_steps=int(raw["max_steps"]),
    )


def _spec_from(config: dict, rate: float) -> NonautonomousSpec:
    return NonautonomousSpec(
        b=float(config["system"]["b"]),
        c=float(config["system"]["c"]),
        shift=_shift_from(config),
        rate=rate,
    )


def _run_from(config: dict, spec: NonautonomousSpec) -> PullbackRunConfig:
    raw = config["run"]
    z_init = resolve_z_init(spec, raw["z_init"])
    return PullbackRunConfig(
        z_init=z_init,
        t_start=float(raw["t_start"]),
        T=float(raw["T"]),
        integ=_integ_from(config),
    )


def _gap_modes(config: dict) -> list[GapMode]:
    raw = config["gap_mode"]
    if raw == "both":
        return [GapMode.UNSTABLE_COEFFICIENT, GapMode.STABLE_PROJECTION]
    try:
        return [GapMode(raw)]
    except ValueError:
        raise ConfigError(
            "gap_mode must be unstable_coefficient, stable_projection or both; "
            f"got {raw!r}"
        )


def _require_rate(config: dict) -> float:
    r = config["rate"]["r"]
    if r is None:
        raise ConfigError("this command needs a fixed rate: set rate.r or pass --rate")
    if not float(r) > 0.0:
        raise ConfigError(f"rate must be positive, got {r}")
    return float(r)


def _scan_range(config: dict) -> tuple[float, float, int]:
    scan = config["rate"]["scan"]
    r_min, r_max, samples = float(scan["r_min"]), float(scan["r_max"]), int(scan["samples"])
    if not r_min < r_max:
        raise ConfigError(f"need r_min < r_max, got [{r_min}, {r_max}]")
    if samples < 2:
        raise ConfigError(f"need at least 2 scan samples, got {samples}")
    return r_min, r_max, samples


def _jobs(args) -> int:
    if getattr(args, "jobs", None):
        return max(1, int(args.jobs))
    env = os.environ.get("RATETIP_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"RATETIP_JOBS must be an integer, got {env!r}")
    return os.cpu_count() or 1


def _solve_future_orbit(config: dict):
    spec = _spec_from(config, rate=1.0)
    params = spec.future_params()
    cfg = _integ_from(config)
    guess = seed_guess_from_recurrence(params, cfg)
    return find_fixed_point(params, guess, cfg)


# -- commands ----------------------------------------------------------------

def cmd_frozen(config: dict, args) -> int:
    a = float(config["system"]["a"])
    p = RosslerParams(a, float(config["system"]["b"]), float(config["system"]["c"]))
    eqs = equilibria(p)
    eig = equilibrium_eigenvalues(p)
    payload = {
        "params": {"a": p.a, "b": p.b, "c": p.c},
        "equilibria": [list(map(float, e)) for e in eqs],
        "inner_equilibrium": list(map(float, eqs[0])),
        "eigenvalues": [[float(v.real), float(v.imag)] for v in eig],
    }
    if args.hopf:
        lo, hi = args.hopf_range
        payload["hopf"] = {"a_hb": locate_hopf(p.b, p.c, (lo, hi)), "bracket": [lo, hi]}
    emit_json(payload, args.out)
    return 0


def cmd_upo_find(config: dict, args) -> int:
    a = float(config["system"]["a"])
    p = RosslerParams(a, float(config["system"]["b"]), float(config["system"]["c"]))
    cfg = _integ_from(config)
    guess = seed_guess_from_recurrence(p, cfg)
    orbit = find_fixed_point(p, guess, cfg)

    image, _ = return_map(p, orbit.gamma, cfg)
    residual = math.hypot(image.u - orbit.gamma.u, image.v - orbit.gamma.v)
    payload = {
        "params": {"a": p.a, "b": p.b, "c": p.c},
        "gamma": [orbit.gamma.u, orbit.gamma.v],
        "period": orbit.period,
        "lambda_s": orbit.lambda_s,
        "lambda_u": orbit.lambda_u,
        "v_s": [float(orbit.v_s[0]), float(orbit.v_s[1])],
        "v_u": [float(orbit.v_u[0]), float(orbit.v_u[1])],
        "residual": residual,
    }
    emit_json(payload, args.out)

    if args.orbit_csv:
        fld = lambda t, s: vector_field_frozen(p, s)
        res = integrate(fld, 0.0, orbit.period, orbit.gamma.lift(), cfg,
                        sample_dt=orbit.period / 400.0)
        with open(args.orbit_csv, "w") as fh:
            fh.write("t,x,y,z\n")
            for s in res.samples:
                fh.write(f"{fmt(s.t)},{fmt(s.state[0])},{fmt(s.state[1])},{fmt(s.state[2])}\n")
    return 0


def cmd_simulate(config: dict, args) -> int:
    r = _require_rate(config)
    spec = _spec_from(config, r)
    run = _run_from(config, spec)
    fld = lambda t, s: vector_field_nonautonomous(spec, t, s)

    status = "ok"
    try:
        res = integrate_with_events(fld, run.t_start, run.T, run.z_init_array(),
                                    run.integ, DEFAULT_SECTION.event_spec(),
                                    sample_dt=args.sample_dt)
        t_end = res.t
    except Blowup as exc:
        status = "blowup"
        res = exc.partial
        t_end = exc.t
    samples = res.samples if res is not None else []
    events = res.events if res is not None else []
    crossings = [
        (i, t_ev, DEFAULT_SECTION.project(s_ev))
        for i, (t_ev, s_ev) in enumerate(
            ev for ev in events if ev[0] - run.t_start > MIN_FLIGHT_TIME
        )
    ]

    os.makedirs(args.out_dir, exist_ok=True)
    traj_path = os.path.join(args.out_dir, "trajectory.csv")
    with open(traj_path, "w") as fh:
        fh.write("t,x,y,z\n")
        for s in samples:
            fh.write(f"{fmt(s.t)},{fmt(s.state[0])},{fmt(s.state[1])},{fmt(s.state[2])}\n")
    cross_path = os.path.join(args.out_dir, "crossings.csv")
    with open(cross_path, "w") as fh:
        fh.write("n,t,x,z\n")
        for n, t_ev, pt in crossings:
            fh.write(f"{n},{fmt(t_ev)},{fmt(pt.u)},{fmt(pt.v)}\n")
    shift_path = os.path.join(args.out_dir, "shift.csv")
    with open(shift_path, "w") as fh:
        fh.write("t,a\n")
        for s in samples:
            fh.write(f"{fmt(s.t)},{fmt(eval_shift(spec.shift, spec.rate * s.t))}\n")

    emit_json(
        {
            "status": status,
            "r": r,
            "n_crossings": len(crossings),
            "t_end": t_end,
            "files": {"trajectory": traj_path, "crossings": cross_path, "shift": shift_path},
        },
        args.out,
    )
    return 0


def _write_scan_csv(rows, meta: dict, out: str | None) -> None:
    lines = [f"# {key}={value}" for key, value in meta.items()]
    lines.append("r,eta,n_crossings,t_last,status")
    for row in rows:
        eta = fmt(row.eta) if math.isfinite(row.eta) else "nan"
        t_last = fmt(row.t_last) if math.isfinite(row.t_last) else "nan"
        lines.append(f"{fmt(row.r)},{eta},{row.n_crossings},{t_last},{row.status}")
    text = "\n".join(lines) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def cmd_eta_scan(config: dict, args) -> int:
    modes = _gap_modes(config)
    if len(modes) != 1:
        raise ConfigError("eta-scan emits a single CSV; pick one gap mode, not 'both'")
    mode = modes[0]
    r_min, r_max, samples = _scan_range(config)
    spec = _spec_from(config, rate=r_min)
    run = _run_from(config, spec)
    orbit = _solve_future_orbit(config)
    rows = scan_eta(spec, run, orbit, r_min, r_max, samples, mode, jobs=_jobs(args))
    meta = {
        "T": fmt(run.T),
        "t_start": fmt(run.t_start),
        "z_init": ",".join(fmt(v) for v in run.z_init),
        "mode": mode.value,
        "gamma": f"{fmt(orbit.gamma.u)},{fmt(orbit.gamma.v)}",
    }
    _write_scan_csv(rows, meta, args.out)
    return 0


def cmd_critical_rates(config: dict, args) -> int:
    modes = _gap_modes(config)
    r_min, r_max, samples = _scan_range(config)
    spec = _spec_from(config, rate=r_min)
    run = _run_from(config, spec)
    orbit = _solve_future_orbit(config)
    refine = RefineConfig(
        tol_r=float(config["refine"]["tol_r"]),
        tol_eta=float(config["refine"]["tol_eta"]),
        max_iter=int(config["refine"]["max_iter"]),
    )
    confirm = ConfirmConfig(
        shadow_periods=int(config["confirm"]["shadow_periods"]),
        tube_eps=float(config["confirm"]["tube_eps"]),
    )
    jobs = _jobs(args)

    def roots_for(mode: GapMode):
        found = find_critical_rates(
            spec, run, orbit, r_min, r_max, samples, mode, refine, confirm, jobs
        )
        return [
            {
                "r_c": rt.r_c,
                "eta_at_root": rt.eta_at_root,
                "n_crossings": rt.n_crossings,
                "confirmed": rt.confirmed,
                "shadow_periods": rt.shadow_periods,
            }
            for rt in found
        ]

    payload = {
        "metadata": {
            "params": {"b": spec.b, "c": spec.c},
            "shift": {
                "kind": spec.shift.kind.value,
                "lambda_minus": spec.shift.lambda_minus,
                "lambda_plus": spec.shift.lambda_plus,
                "delta": spec.shift.delta,
            },
            "T": run.T,
            "t_start": run.t_start,
            "z_init": list(run.z_init),
            "mode": config["gap_mode"],
            "tolerances": {
                "rtol": run.integ.rtol,
                "atol": run.integ.atol,
                "tol_r": refine.tol_r,
                "tol_eta": refine.tol_eta,
            },
            "scan": {"r_min": r_min, "r_max": r_max, "samples": samples},
            "gamma": [orbit.gamma.u, orbit.gamma.v],
        },
    }
    if len(modes) == 1:
        payload["roots"] = roots_for(modes[0])
    else:
        payload["roots"] = {mode.value: roots_for(mode) for mode in modes}
    emit_json(payload, args.out)
    return 0


# -- argument parsing ---------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--out", "-o", default=None, help="output path (default stdout)")
    parser.add_argument("--jobs", type=int, default=None,
                        help="worker processes for scans (env RATETIP_JOBS)")
    parser.add_argument("--a", type=float, default=None, help="frozen parameter a")
    parser.add_argument("--b", type=float, default=None)
    parser.add_argument("--c", type=float, default=None)
    parser.add_argument("--rate", "-r", type=float, default=None, help="shift rate r")
    parser.add_argument("--r-min", dest="r_min", type=float, default=None)
    parser.add_argument("--r-max", dest="r_max", type=float, default=None)
    parser.add_argument("--samples", type=int, default=None)
    parser.add_argument("--T", dest="horizon", type=float, default=None, help="horizon time T")
    parser.add_argument("--t-start", dest="t_start", type=float, default=None)
    parser.add_argument("--z-init", dest="z_init", default=None,
                        help='"auto" or comma-separated x,y,z')
    parser.add_argument("--rtol", type=float, default=None)
    parser.add_argument("--atol", type=float, default=None)
    parser.add_argument("--gap-mode", dest="gap_mode", default=None,
                        choices=["unstable_coefficient", "stable_projection", "both"])
    parser.add_argument("--tube-eps", dest="tube_eps", type=float, default=None)
    parser.add_argument("--shadow-periods", dest="shadow_periods", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratetip",
        description="Critical-rate / weak-tracking analysis of the shifted Rossler system",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_frozen = sub.add_parser("frozen", help="equilibria and eigenvalues of the frozen system")
    _add_common(p_frozen)
    p_frozen.add_argument("--hopf", action="store_true", help="also locate the Hopf point")
    p_frozen.add_argument("--hopf-range", nargs=2, type=float, default=(-0.05, 0.05),
                          metavar=("LO", "HI"))
    p_frozen.set_defaults(func=cmd_frozen)

    p_upo = sub.add_parser("upo", help="periodic-orbit commands")
    upo_sub = p_upo.add_subparsers(dest="subcommand", required=True)
    p_find = upo_sub.add_parser("find", help="locate the period-one orbit")
    _add_common(p_find)
    p_find.add_argument("--orbit-csv", default=None,
                        help="also write one period of the orbit as CSV (t,x,y,z)")
    p_find.set_defaults(func=cmd_upo_find)

    p_sim = sub.add_parser("simulate", help="one nonautonomous run at fixed r")
    _add_common(p_sim)
    p_sim.add_argument("--out-dir", default=".", help="directory for CSV outputs")
    p_sim.add_argument("--sample-dt", dest="sample_dt", type=float, default=0.05)
    p_sim.set_defaults(func=cmd_simulate)

    p_scan = sub.add_parser("eta-scan", help="gap function over a rate grid (CSV)")
    _add_common(p_scan)
    p_scan.set_defaults(func=cmd_eta_scan)

    p_roots = sub.add_parser("critical-rates", help="scan + refine + confirm roots of eta")
    _add_common(p_roots)
    p_roots.set_defaults(func=cmd_critical_rates)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        config = _apply_overrides(config, args)
        return args.func(config, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
