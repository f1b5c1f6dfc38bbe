"""Acceptance gate: thirteen end-to-end criteria at their stated tolerances.

Each test prints one ``PASS``/``FAIL`` line; the lines are also collected and
repeated in the pytest terminal summary. Run directly with
``python tests/test_acceptance.py`` to get just the lines.
"""

import math

import numpy as np

from sfclab.config import load_preset
from sfclab.controllers import ControllerState, LacParams, NacParams, SfcParams, steady_state_velocity
from sfclab.describing import bandwidth_analytic, gain_variation
from sfclab.kinematics import DlsConfig, dls_pseudoinverse, planar_jacobian, task_to_joint
from sfclab.signals import Composite, Recorded, Sine, Step, impact_profile
from sfclab.sim import SimConfig, run, settle_time
from sfclab.stability import (
    _admittance_phase,
    classify_sample_time,
    euler_sensitivity,
    max_sample_time,
    stable_dt_limit,
)
from sfclab.tables import table3, table4, table5
from sfclab.tuning import TuningRequirements, tune, verify_tuning

RESULTS: dict[int, str] = {}


def report(number: int, title: str, passed: bool, detail: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {title} | {detail}"
    RESULTS[number] = line
    print(line)
    assert passed, line


def sig3(x: float) -> float:
    return float(f"{x:.3g}")


def within(value, target, rel):
    return abs(value - target) <= rel * abs(target)


UNIT_CUBIC = SfcParams(m=1.0, mu=1.0, n=3.0)


def test_01_bandwidth_closed_form():
    w = {A: bandwidth_analytic(UNIT_CUBIC, A) for A in (1.0, 10.0, 100.0)}
    ok = within(w[10.0], 4.90, 0.005) and within(w[100.0], 22.75, 0.005) and within(w[1.0], 1.05, 0.01)
    report(1, "analytic bandwidth", ok, ", ".join(f"A={A:g}: {v:.4f}" for A, v in w.items()))


def test_02_bandwidth_numeric_sweep():
    rows = table3().rows
    A = np.array([r["input"] for r in rows])
    w = np.array([r["numeric"] for r in rows])
    ref = np.array([r["reference_numeric"] for r in rows])
    slope = np.polyfit(np.log(A), np.log(w), 1)[0]
    close = np.all(np.abs(w - ref) <= 0.15 * ref)
    ok = bool(close and np.all(np.diff(w) > 0) and abs(slope - 2 / 3) <= 0.1)
    report(2, "numeric bandwidth", ok, f"omega_c={np.round(w, 3).tolist()} vs {ref.tolist()}, slope={slope:.3f}")


def test_03_time_constant():
    rows = table4().rows
    analytic = [r["analytic"] for r in rows]
    numeric = [r["numeric"] for r in rows]
    ref = [r["reference_numeric"] for r in rows]
    ok = all(sig3(a) == sig3(t) for a, t in zip(analytic, (0.1629, 0.0351, 0.00756)))
    ok = ok and all(abs(n - r) <= 0.15 * r for n, r in zip(numeric, ref))
    report(3, "time constant", ok, f"analytic={[sig3(a) for a in analytic]}, numeric={np.round(numeric, 4).tolist()} vs {ref}")


def test_04_gain_variation():
    rows = table5().rows
    expected = {1.0: 0.0, 3.0: -26.67, 10.0: -36.00, 100.0: -39.60}
    analytic_ok = all(abs(gain_variation(n, 2) - v) <= 0.01 for n, v in expected.items())
    numeric_ok = all(abs(r["numeric"] - r["analytic"]) <= 0.5 for r in rows)
    gaps = [round(abs(r["numeric"] - r["analytic"]), 4) for r in rows]
    report(4, "gain variation", analytic_ok and numeric_ok, f"|analytic-numeric| dB = {gaps}")


def test_05_sample_time_limit():
    p, _ = load_preset("fixed_sfc")
    bound = max_sample_time(p, 50.0)
    labels = {dt: classify_sample_time(p, 50.0, dt)["label"] for dt in (0.008, 0.0067, 0.005, 0.002)}
    ok = (
        abs(bound - 0.0067) <= 0.05e-3
        and labels[0.008] == "oscillatory"
        and labels[0.0067] == "marginal"
        and labels[0.005] == "converged"
        and labels[0.002] == "converged"
    )
    report(5, "sample-time limit", ok, f"bound={bound * 1e3:.3f} ms, labels={labels}")


def test_06_steady_state_concordance():
    ps = {k: load_preset(f"fixed_{k}") for k in ("sfc", "lac", "nac")}
    v5 = {}
    v50 = {}
    for k, (p, dt) in ps.items():
        v5[k] = run(SimConfig(p, Step(5.0), dt, 3.0)).v_output[-1]
        v50[k] = run(SimConfig(p, Step(50.0), dt, 3.0)).v_output[-1]
    ok = all(abs(v - 0.050) <= 0.001 for v in v5.values())
    ok = ok and abs(v50["lac"] - 0.50) <= 0.01 and v50["sfc"] <= 0.11
    report(
        6,
        "steady-state concordance",
        ok,
        "5 N: " + ", ".join(f"{k}={v:.4f}" for k, v in v5.items())
        + f"; 50 N: lac={v50['lac']:.4f}, sfc={v50['sfc']:.4f}",
    )


def test_07_impulse_profile():
    peaks, settle = {}, {}
    for k in ("sfc", "lac", "nac"):
        p, dt = load_preset(f"fixed_{k}")
        tr = run(SimConfig(p, impact_profile(), dt, 3.0))
        peaks[k] = float(tr.v_output.max())
        settle[k] = settle_time(tr, 1.0, steady_state_velocity(p, 5.0))
    ok = (
        abs(peaks["lac"] - 0.5) <= 0.01
        and peaks["nac"] < peaks["lac"]
        and peaks["sfc"] < peaks["lac"]
        and settle["sfc"] < settle["nac"]
    )
    report(
        7,
        "impulse profile",
        ok,
        "peaks " + ", ".join(f"{k}={v:.3f}" for k, v in peaks.items())
        + "; recovery " + ", ".join(f"{k}={v:.3f}s" for k, v in settle.items()),
    )


def test_08_tuning_worked_example():
    req = TuningRequirements(
        f_ease=5.0, f_interf=60.0, v_d=0.05, v_c=0.05 * 12 ** (1 / 3), w_c_ease=17.0, dt=0.002, m=1.0
    )
    tp = tune(req)
    rep = verify_tuning(tp, req)
    p = tp.params
    ok = abs(p.n - 3.0) <= 1e-3 and abs(p.mu - 166.81) <= 0.1 and abs(p.g - 0.16097) <= 1e-4 and rep.satisfied
    report(8, "tuning", ok, f"n={p.n:.4f}, mu={p.mu:.3f}, g={p.g:.5f}, verified={rep.satisfied}")


def _random_controller(rng):
    kind = rng.integers(3)
    m = rng.uniform(0.5, 2.0)
    g = rng.uniform(0.05, 1.0)
    if kind == 0:
        return SfcParams(m=m, mu=rng.uniform(1, 400), n=rng.uniform(1, 6), g=g)
    if kind == 1:
        return LacParams(m_a=m, mu_a=rng.uniform(1, 50), g_a=g)
    return NacParams(m_n=m, mu_n=rng.uniform(1, 20), alpha_n=rng.uniform(0.5, 30), sigma_n=rng.uniform(1, 30), g_n=g)


def _random_input(rng, dt):
    level = rng.uniform(0, 60)
    parts = [Step(rng.uniform(-level, level), t_on=rng.uniform(0, 0.5))]
    parts.append(Sine(rng.uniform(0, level) + 1e-3, rng.uniform(0.5, 40)))
    parts.append(Recorded(tuple(rng.uniform(-level, level, 50)), rng.uniform(dt, 20 * dt)))
    return Composite(tuple(parts))


def test_09_passivity():
    rng = np.random.default_rng(20240611)
    worst = -np.inf
    failures = 0
    for _ in range(50):
        p = _random_controller(rng)
        sig = _random_input(rng, 1e-3)
        f_peak = sum(part.peak for part in sig.parts)
        limit = max_sample_time(p, f_peak) if isinstance(p, SfcParams) else stable_dt_limit(p, f_peak)
        dt = rng.uniform(0.05, 0.9) * limit
        tr = run(SimConfig(p, sig, dt, 2.0, ControllerState(v=rng.uniform(-0.2, 0.2))))
        slack = tr.work_in[-1] + tr.energy_defect() - (tr.storage[-1] - tr.storage[0])
        worst = max(worst, -slack)
        failures += slack < 0
    report(9, "passivity", failures == 0, f"violations={failures}/50, max(dV - W - eps)={worst:.3e} J")


def test_10_phase_bound():
    q = np.linspace(0, 1, 102)[1:-1]
    dtw = np.linspace(0, math.pi, 102)[1:-1]
    worst = max(abs(_admittance_phase(a, b)) for a in q for b in dtw)
    report(10, "admittance phase bound", worst < math.pi / 2, f"max|phase|={worst:.6f} < pi/2={math.pi / 2:.6f}")


def test_11_euler_sensitivity():
    a3 = euler_sensitivity(SfcParams(m=1, mu=1, n=3), 1.0, 0.1, 10.0)
    a100 = euler_sensitivity(SfcParams(m=1, mu=1, n=100), 1.0, 0.1, 10.0)
    ok = (
        a3[0] == 9.0
        and round(a3[1], 3) == 8.669
        and a100[0] == 9.0
        and abs(a100[1] - (-13770.61)) <= 0.01
    )
    report(11, "Euler sensitivity", ok, f"n=3: {a3[0]:g}, {a3[1]:.4f}; n=100: {a100[0]:g}, {a100[1]:.3f}")


def test_12_kinematics():
    cfg = DlsConfig()
    J = planar_jacobian([math.pi / 4, math.pi / 2], [1.0, 1.0])
    qdot = np.array([0.3, -0.7])
    residual = float(np.max(np.abs(task_to_joint(J, cfg, J @ qdot) - qdot)))
    rng = np.random.default_rng(7)
    bound = 1 / (2 * math.sqrt(cfg.lam))
    worst = 0.0
    for _ in range(100):
        u, _ = np.linalg.qr(rng.normal(size=(2, 2)))
        v, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        s = np.array([rng.uniform(0.01, 5.0), rng.uniform(0, 0.9 * cfg.epsilon)])
        Jn = u @ np.column_stack([np.diag(s), np.zeros(2)]) @ v.T
        worst = max(worst, float(np.linalg.norm(dls_pseudoinverse(Jn, cfg), 2)))
    ok = residual <= 1e-9 and worst <= bound
    report(12, "DLS kinematics", ok, f"round-trip residual={residual:.2e}, max damped norm={worst:.4f} <= {bound:.4f}")


def test_13_degeneration():
    rng = np.random.default_rng(11)
    mismatches = 0
    for _ in range(20):
        m, mu, g = rng.uniform(0.2, 5), rng.uniform(0.5, 100), rng.uniform(0.05, 2)
        dt = rng.uniform(0.05, 1.5) * m / mu
        sig = Composite((Step(rng.uniform(-50, 50), t_on=rng.uniform(0, 10 * dt)), Recorded(tuple(rng.uniform(-50, 50, 30)), dt)))
        s0 = ControllerState(v=rng.uniform(-1, 1), x=rng.uniform(-1, 1))
        a = run(SimConfig(SfcParams(m=m, mu=mu, n=1.0, g=g), sig, dt, 200 * dt, s0)).to_csv()
        b = run(SimConfig(LacParams(m_a=m, mu_a=mu, g_a=g), sig, dt, 200 * dt, s0)).to_csv()
        mismatches += a != b
    report(13, "SFC(n=1) equals L-AC", mismatches == 0, f"byte mismatches={mismatches}/20")


if __name__ == "__main__":
    import sys

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
