"""``sfclab`` command line.

Subcommands ``simulate``, ``bode``, ``tune``, ``check``, ``classify``, ``ik``
and ``tables``. Results go to ``--out`` (written atomically) and a JSON
summary goes to stdout. Failures print one JSON line to stderr and exit with
a code that identifies the failure class.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .config import (
    load_scenario,
    params_to_dict,
    read_json,
    requirements_from_dict,
    resolve_controller,
    scenario_from_dict,
)
from .controllers import SfcParams, steady_internal_velocity
from .describing import BodeCurve, bandwidth_analytic, describing_gain, describing_phase, input_amplitude
from .errors import (
    ConfigError,
    DivergenceError,
    DomainError,
    InfeasibleRequirements,
    NotFoundError,
    NumericError,
)
from .forces import ForceSetBounds, classify
from .kinematics import DlsConfig, dls_pseudoinverse, planar_jacobian
from .sim import (
    SimConfig,
    bode_to_csv,
    numeric_bandwidth,
    numeric_bode,
    numeric_time_constant,
    run,
    run_coupled,
    write_atomic,
)
from .stability import (
    CoupledCheckInput,
    coupled_stability_check,
    detect_oscillation,
    sample_time_check,
    stable_dt_limit,
    worst_case_amplitude,
)
from .tables import build_table
from .tuning import tune, verify_tuning

EXIT_OK = 0
EXIT_VIOLATED = 2
EXIT_INVALID = 3
EXIT_DIVERGED = 4
EXIT_NOT_FOUND = 5
EXIT_INFEASIBLE = 6
EXIT_NUMERIC = 7
EXIT_IO = 8

ANALYSES = ("step-metrics", "energy", "classify", "bode")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "exit_code": code, "message": message}, sort_keys=True) + "\n")
    return code


def _write(path, text: str) -> None:
    try:
        write_atomic(path, text)
    except OSError as exc:
        raise _OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc


class _OutputError(Exception):
    pass


def _controller(args, required=True):
    """Controller from ``--preset`` (name or file) or ``--config`` params file."""
    if args.preset is not None:
        return resolve_controller(args.preset)
    if args.config is not None:
        return resolve_controller(read_json(args.config))
    if required:
        raise ConfigError("no controller given; use --preset or --config")
    return None, None


def _float_list(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse number list {text!r}") from exc
    if not values or not all(math.isfinite(v) for v in values):
        raise ConfigError(f"cannot parse number list {text!r}")
    return values


# ---------------------------------------------------------------- simulate


def _step_metrics(trace) -> dict:
    out = {"final_v_output": float(trace.v_output[-1]), "peak_v_output": float(np.max(np.abs(trace.v_output)))}
    try:
        out["time_constant_s"] = numeric_time_constant(trace)
    except NotFoundError:
        out["time_constant_s"] = None
    return out


def _energy(trace) -> dict:
    return {
        "work_in_j": float(trace.work_in[-1]),
        "dissipated_j": float(trace.dissipated[-1]),
        "storage_change_j": float(trace.storage[-1] - trace.storage[0]),
        "energy_defect_j": trace.energy_defect(),
    }


def cmd_simulate(args) -> int:
    if args.config is not None:
        scenario = load_scenario(args.config, controller_override=args.preset)
    elif args.preset is not None:
        if args.force_n is None:
            raise ConfigError("without --config, simulate needs --preset and --force-n")
        scenario = scenario_from_dict(
            {
                "name": f"{args.preset}-step",
                "controller": args.preset,
                "input": {"kind": "step", "force_n": args.force_n},
                "duration_s": args.duration_s,
                **({"dt_s": args.dt_s} if args.dt_s is not None else {}),
            }
        )
    else:
        raise ConfigError("simulate needs --config or --preset")
    sim = scenario.sim
    if args.dt_s is not None and args.config is not None:
        sim = SimConfig(sim.controller, sim.input, args.dt_s, sim.duration, sim.initial_state)
    for name in scenario.analyses:
        if name not in ANALYSES:
            raise NotFoundError(f"unknown analysis {name!r}; available: {', '.join(ANALYSES)}")
    trace = run(sim) if scenario.human is None else run_coupled(sim, scenario.human)
    p = sim.controller
    peak_force = float(np.max(np.abs(trace.f_ext)))
    v_ref = abs(steady_internal_velocity(p, peak_force)) if peak_force > 0 else None
    osc = detect_oscillation(trace.accel, trace.v_internal, v_ref)
    summary = {
        "status": "ok",
        "scenario": scenario.name,
        "steps": len(trace) - 1,
        "dt_s": sim.dt,
        "final_v_output": float(trace.v_output[-1]),
        "peak_v_output": float(np.max(np.abs(trace.v_output))),
        "oscillatory": osc.oscillatory,
        "divergent": osc.divergent,
        "sign_changes": osc.sign_changes,
        "analyses": {},
    }
    for name in scenario.analyses:
        if name == "step-metrics":
            summary["analyses"][name] = _step_metrics(trace)
        elif name == "energy":
            summary["analyses"][name] = _energy(trace)
        elif name == "classify":
            bounds = _bounds_from(scenario.classify_bounds)
            summary["analyses"][name] = classify(trace.f_ext, sim.dt, bounds).to_dict()
        elif name == "bode":
            summary["analyses"][name] = {"note": "use the bode subcommand for frequency sweeps"}
    if args.out is not None:
        _write(args.out, trace.to_csv())
        summary["out"] = args.out
    else:
        sys.stdout.write(trace.to_csv())
        sys.stderr.write(json.dumps(summary, sort_keys=True) + "\n")
        return EXIT_OK
    _emit(summary)
    return EXIT_OK


# ---------------------------------------------------------------- bode


def cmd_bode(args) -> int:
    p, _ = _controller(args)
    amplitudes = _float_list(args.amplitudes)
    omegas = np.logspace(math.log10(args.omega_min), math.log10(args.omega_max), args.points)
    if args.analytic:
        if not isinstance(p, SfcParams):
            raise ConfigError("analytic curves exist only for the sfc controller")
        curves = []
        for A in amplitudes:
            pts = []
            for w in omegas:
                B = _fundamental_amplitude(p, A, float(w))
                pts.append((float(w), 20.0 * math.log10(describing_gain(p, B, w)), describing_phase(p, B, w)))
            curves.append(BodeCurve(amplitude_A=A, points=pts))
    else:
        curves = numeric_bode(p, amplitudes, omegas)
    summary = {"status": "ok", "mode": "analytic" if args.analytic else "numeric", "curves": []}
    for c in curves:
        entry = {"amplitude": c.amplitude_A}
        try:
            entry["bandwidth_rad_s"] = numeric_bandwidth(c)
        except NotFoundError:
            entry["bandwidth_rad_s"] = None
        if isinstance(p, SfcParams):
            entry["bandwidth_analytic_rad_s"] = bandwidth_analytic(p, c.amplitude_A)
        summary["curves"].append(entry)
    text = bode_to_csv(curves)
    if args.out is not None:
        _write(args.out, text)
        summary["out"] = args.out
        _emit(summary)
    else:
        sys.stdout.write(text)
        sys.stderr.write(json.dumps(summary, sort_keys=True) + "\n")
    return EXIT_OK


def _fundamental_amplitude(p: SfcParams, A: float, omega: float) -> float:
    """Solve ``input_amplitude(B) = A`` for ``B`` by bisection in log space."""
    hi = 1.0
    while input_amplitude(p, hi, omega) < A:
        hi *= 2.0
    lo = hi / 2.0
    while input_amplitude(p, lo, omega) > A and lo > 1e-300:
        lo /= 2.0
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if input_amplitude(p, mid, omega) < A:
            lo = mid
        else:
            hi = mid
        if hi / lo - 1.0 < 1e-14:
            break
    return math.sqrt(lo * hi)


# ---------------------------------------------------------------- tune


def cmd_tune(args) -> int:
    if args.config is None:
        raise ConfigError("tune needs --config with the requirements file")
    d = read_json(args.config)
    if args.w_c_ease_hz is not None:
        d = {k: v for k, v in d.items() if k not in ("w_c_ease_rad_s", "w_c_ease_hz")}
        d["w_c_ease_hz"] = args.w_c_ease_hz
    req = requirements_from_dict(d)
    tp = tune(req)
    report = verify_tuning(tp, req)
    doc = params_to_dict(
        tp.params,
        req.dt,
        tuning={
            "w_c_ease_effective_rad_s": tp.w_c_ease_effective,
            "w_c_max_rad_s": tp.w_c_max,
            "bandwidth_adjusted": tp.bandwidth_adjusted,
        },
    )
    summary = {"status": "ok" if report.satisfied else "violated", "params": doc, "verification": report.to_dict()}
    if args.out is not None:
        _write(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
        summary["out"] = args.out
    _emit(summary)
    return EXIT_OK if report.satisfied else EXIT_VIOLATED


# ---------------------------------------------------------------- check


def cmd_check(args) -> int:
    p, design_dt = _controller(args)
    dt = args.dt_s if args.dt_s is not None else design_dt
    if dt is None:
        raise ConfigError("no sample time; pass --dt-s or use a params file with dt_s")
    if not (args.f_max > 0 and dt > 0):
        raise ConfigError("--f-max and the sample time must be > 0")
    reports = []
    if isinstance(p, SfcParams):
        reports.append(sample_time_check(p, args.f_max, dt))
        B = worst_case_amplitude(p, args.f_max)
        omega = args.omega_rad_s
        if omega is not None:
            reports.append(coupled_stability_check(CoupledCheckInput(p, B, omega, dt)))
    else:
        from .stability import ConstraintReport

        bound = stable_dt_limit(p, args.f_max)
        reports.append(
            ConstraintReport(
                name="sample_time",
                satisfied=dt < bound,
                bound_value=bound,
                margin=dt / bound,
                details={"dt": dt, "f_max": args.f_max},
            )
        )
    ok = all(r.satisfied for r in reports)
    _emit({"status": "ok" if ok else "violated", "reports": [r.to_dict() for r in reports]})
    return EXIT_OK if ok else EXIT_VIOLATED


# ---------------------------------------------------------------- classify


def _bounds_from(d: dict, args=None) -> ForceSetBounds:
    def pick(key, attr, default):
        if args is not None and getattr(args, attr, None) is not None:
            return getattr(args, attr)
        return float(d.get(key, default))

    return ForceSetBounds(
        f_th=pick("f_th_n", "f_th_n", 30.0),
        eps_plus=pick("eps_plus_hz", "eps_plus_hz", 5.0),
        eps_minus=pick("eps_minus_hz", "eps_minus_hz", 2.0),
        noise_floor=pick("noise_floor_n", "noise_floor_n", 1e-9),
    )


def _read_force_csv(path, dt):
    """One force column (needs ``dt``) or ``time,f_ext`` columns; header optional."""
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    if rows and not _is_number(rows[0][0]):
        header, rows = rows[0], rows[1:]
    else:
        header = None
    try:
        data = np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise ConfigError(f"{path}: non-numeric entry") from exc
    if data.ndim != 2 or data.shape[0] == 0:
        raise ConfigError(f"{path}: no samples")
    if data.shape[1] == 1:
        if dt is None:
            raise ConfigError("single-column force file needs --dt-s")
        return data[:, 0], dt
    col = 1
    if header is not None and "f_ext" in header:
        col = header.index("f_ext")
    t = data[:, 0]
    steps = np.diff(t)
    if steps.size == 0 or np.any(steps <= 0) or np.ptp(steps) > 1e-6 * np.mean(steps):
        raise ConfigError(f"{path}: time column must be uniformly increasing")
    return data[:, col], float(np.mean(steps)) if dt is None else dt


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def cmd_classify(args) -> int:
    if args.input is None:
        raise ConfigError("classify needs --input <csv>")
    extra = read_json(args.config) if args.config is not None else {}
    samples, dt = _read_force_csv(args.input, args.dt_s)
    result = classify(samples, dt, _bounds_from(extra, args))
    out = {"status": "ok", **result.to_dict(), "samples": int(samples.size), "dt_s": dt}
    if args.out is not None:
        _write(args.out, json.dumps(out, indent=2, sort_keys=True) + "\n")
    _emit(out)
    return EXIT_OK


# ---------------------------------------------------------------- ik


def cmd_ik(args) -> int:
    d = read_json(args.config) if args.config is not None else {}
    if args.jacobian is not None:
        d["jacobian"] = json.loads(args.jacobian)
    if args.q is not None:
        d["q_rad"] = _float_list(args.q)
    if args.lengths is not None:
        d["lengths_m"] = _float_list(args.lengths)
    if args.v_task is not None:
        d["v_task"] = _float_list(args.v_task)
    if "jacobian" in d:
        J = np.asarray(d["jacobian"], dtype=float)
    elif "q_rad" in d and "lengths_m" in d:
        if len(d["q_rad"]) != len(d["lengths_m"]):
            raise ConfigError("q_rad and lengths_m must have equal length")
        J = planar_jacobian(d["q_rad"], d["lengths_m"])
    else:
        raise ConfigError("ik needs a jacobian or q_rad plus lengths_m")
    if "v_task" not in d:
        raise ConfigError("ik needs v_task")
    cfg = DlsConfig(epsilon=float(d.get("epsilon", args.epsilon)), lam=float(d.get("lambda", args.lam)))
    Jp = dls_pseudoinverse(J, cfg)
    v = np.asarray(d["v_task"], dtype=float).reshape(-1)
    if v.size != J.shape[0]:
        raise DomainError(f"v_task has {v.size} entries, Jacobian has {J.shape[0]} rows")
    qdot = Jp @ v
    sigma_min = float(np.linalg.svd(np.atleast_2d(J), compute_uv=False).min())
    out = {
        "status": "ok",
        "joint_velocity": qdot.tolist(),
        "branch": "full_rank" if sigma_min > cfg.epsilon else "damped",
        "sigma_min": sigma_min,
        "task_residual": float(np.linalg.norm(J @ qdot - v)),
    }
    if args.out is not None:
        _write(args.out, json.dumps(out, indent=2, sort_keys=True) + "\n")
    _emit(out)
    return EXIT_OK


# ---------------------------------------------------------------- tables


def cmd_tables(args) -> int:
    which = args.which or [3, 4, 5]
    if any(w not in (3, 4, 5) for w in which):
        raise ConfigError(f"tables must be among 3, 4, 5; got {which}")
    reports = [build_table(w) for w in which]
    if args.out is not None:
        try:
            os.makedirs(args.out, exist_ok=True)
        except OSError as exc:
            raise _OutputError(f"cannot create {args.out}: {exc.strerror}") from exc
        for r in reports:
            _write(os.path.join(args.out, f"table{r.table_id}.json"), json.dumps(r.to_dict(), indent=2, sort_keys=True) + "\n")
            _write(os.path.join(args.out, f"table{r.table_id}.csv"), r.to_csv())
    _emit({"status": "ok", "tables": [r.to_dict() for r in reports]})
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--config", default=default, help="scenario / params / requirements JSON file")
    p.add_argument("--out", default=default, help="output file (directory for tables)")
    p.add_argument("--preset", default=default, help="controller preset name or params file")
    p.add_argument(
        "--seedless",
        action="store_true",
        default=argparse.SUPPRESS if suppress else False,
        help="reserved; nothing in this tool draws random numbers",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sfclab", description="Shear-thickening admittance control toolkit.")
    parser.add_argument("--version", action="version", version=f"sfclab {__version__}")
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        _add_globals(sp, suppress=True)
        sp.set_defaults(func=func)
        return sp

    sp = add("simulate", cmd_simulate, "run a scenario and write the trace CSV")
    sp.add_argument("--force-n", type=float, help="step force when no --config is given")
    sp.add_argument("--duration-s", type=float, default=1.0)
    sp.add_argument("--dt-s", type=float)

    sp = add("bode", cmd_bode, "gain/phase curves per force amplitude")
    sp.add_argument("--amplitudes", default="1,10,100", help="comma-separated force amplitudes [N]")
    sp.add_argument("--omega-min", type=float, default=1e-2)
    sp.add_argument("--omega-max", type=float, default=1e2)
    sp.add_argument("--points", type=int, default=60)
    sp.add_argument("--analytic", action="store_true", help="describing-function curves (sfc only)")

    sp = add("tune", cmd_tune, "tune an sfc controller from a requirements file")
    sp.add_argument("--w-c-ease-hz", type=float, help="traction bandwidth in Hz, overrides the file")

    sp = add("check", cmd_check, "sample-time and coupled-stability checks")
    sp.add_argument("--f-max", type=float, required=True, help="largest expected force [N]")
    sp.add_argument("--dt-s", type=float)
    sp.add_argument("--omega-rad-s", type=float, help="interaction frequency for the coupled check")

    sp = add("classify", cmd_classify, "label a recorded force signal")
    sp.add_argument("--input", help="CSV with one force column or time,f_ext")
    sp.add_argument("--dt-s", type=float)
    sp.add_argument("--f-th-n", type=float)
    sp.add_argument("--eps-plus-hz", type=float)
    sp.add_argument("--eps-minus-hz", type=float)
    sp.add_argument("--noise-floor-n", type=float)

    sp = add("ik", cmd_ik, "damped-least-squares joint velocities")
    sp.add_argument("--jacobian", help="JSON matrix")
    sp.add_argument("--q", help="comma-separated joint angles [rad] of a planar arm")
    sp.add_argument("--lengths", help="comma-separated link lengths [m]")
    sp.add_argument("--v-task", help="comma-separated task velocity")
    sp.add_argument("--epsilon", type=float, default=1e-3)
    sp.add_argument("--lam", type=float, default=1e-2)

    sp = add("tables", cmd_tables, "analytic vs reproduced numeric tables")
    sp.add_argument("which", nargs="*", type=int, help="any of 3, 4, 5 (default: all)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        return args.func(args)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_INVALID)
    except (ConfigError, DomainError) as exc:
        return _fail("invalid_input", str(exc), EXIT_INVALID)
    except DivergenceError as exc:
        return _fail("divergence", str(exc), EXIT_DIVERGED)
    except NotFoundError as exc:
        return _fail("not_found", str(exc), EXIT_NOT_FOUND)
    except InfeasibleRequirements as exc:
        return _fail("infeasible", str(exc), EXIT_INFEASIBLE)
    except ValueError as exc:
        return _fail("invalid_input", str(exc), EXIT_INVALID)
    except NumericError as exc:
        return _fail("numeric", str(exc), EXIT_NUMERIC)
    except _OutputError as exc:
        return _fail("io", str(exc), EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
