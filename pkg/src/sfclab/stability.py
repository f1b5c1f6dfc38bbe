"""Discretisation and coupled-stability guards for the SFC.

The sample-time bound comes from linearising the Euler recursion of the
acceleration, ``a(t+1) ~ (1 - mu n dt |v|^(n-1) / m) a(t)``, at the largest
steady velocity ``(f_max / mu)^(1/n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .controllers import ControllerParams, LacParams, SfcParams, steady_internal_velocity
from .describing import psi
from .errors import DomainError

__all__ = [
    "ConstraintReport",
    "CoupledCheckInput",
    "OscillationReport",
    "max_sample_time",
    "stable_dt_limit",
    "max_bandwidth",
    "coupled_q",
    "worst_case_amplitude",
    "coupled_stability_check",
    "sample_time_check",
    "apparent_admittance_phase",
    "euler_sensitivity",
    "detect_oscillation",
    "classify_sample_time",
    "MARGINAL_BAND",
]

# dt within this relative distance of the bound is "marginal"
MARGINAL_BAND = 0.05


@dataclass(frozen=True)
class ConstraintReport:
    """Outcome of a feasibility check; ``satisfied`` iff ``margin < 1``."""

    name: str
    satisfied: bool
    bound_value: float
    margin: float
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "satisfied": self.satisfied,
            "bound_value": self.bound_value,
            "margin": self.margin,
            "details": dict(self.details),
        }


@dataclass(frozen=True)
class CoupledCheckInput:
    params: SfcParams
    B: float
    omega: float
    dt: float

    def __post_init__(self):
        for name in ("B", "omega", "dt"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class OscillationReport:
    oscillatory: bool
    divergent: bool
    sign_changes: int


def max_sample_time(p: SfcParams, f_max: float) -> float:
    """Largest Euler sample time [s] that keeps the acceleration recursion contracting."""
    if not (math.isfinite(f_max) and f_max > 0):
        raise DomainError(f"f_max must be finite and > 0, got {f_max!r}")
    n = p.n
    return 2.0 * p.m * p.mu ** (-1.0 / n) / n * abs(f_max) ** ((1.0 - n) / n)


def stable_dt_limit(p: ControllerParams, f_max: float) -> float:
    """Euler stability limit for any controller type at peak force ``f_max``.

    The linear controllers contract iff ``dt < 2 m / c`` with ``c`` the largest
    damping coefficient they can reach.
    """
    if isinstance(p, SfcParams):
        return max_sample_time(p, f_max)
    if isinstance(p, LacParams):
        return 2.0 * p.m_a / p.mu_a
    return 2.0 * p.m_n / (p.mu_n + p.alpha_n)


def max_bandwidth(p: SfcParams, dt: float, f_ext: float, f_max: float) -> float:
    """Largest admissible bandwidth [rad/s] at force ``f_ext`` given sample time ``dt``."""
    if not (dt > 0 and 0 < f_ext <= f_max):
        raise DomainError("need dt > 0 and 0 < f_ext <= f_max")
    n = p.n
    return (
        2.0 ** ((n + 1.0) / (2.0 * n))
        * psi(n) ** (1.0 / n)
        / (dt * n)
        * abs(f_ext / f_max) ** ((n - 1.0) / n)
    )


def coupled_q(p: SfcParams, B: float, dt: float) -> float:
    """Loop factor ``Q = mu B^(n-1) Psi(n) dt / m`` of the coupled check."""
    return p.mu * B ** (p.n - 1.0) * psi(p.n) * dt / p.m


def worst_case_amplitude(p: SfcParams, f_max: float) -> float:
    """Largest steady internal velocity under ``|f| <= f_max``."""
    return steady_internal_velocity(p, abs(f_max))


def coupled_stability_check(inp: CoupledCheckInput) -> ConstraintReport:
    """Human-robot coupled stability: ``0 < Q < 1`` and ``0 < dt w < pi``."""
    q = coupled_q(inp.params, inp.B, inp.dt)
    dtw = inp.dt * inp.omega
    margin = max(q, dtw / math.pi)
    return ConstraintReport(
        name="coupled_stability",
        satisfied=bool(0 < q < 1 and 0 < dtw < math.pi),
        bound_value=1.0,
        margin=margin,
        details={"Q": q, "dt_omega": dtw, "B": inp.B, "omega": inp.omega},
    )


def sample_time_check(p: SfcParams, f_max: float, dt: float) -> ConstraintReport:
    bound = max_sample_time(p, f_max)
    ratio = dt / bound
    if abs(ratio - 1.0) <= MARGINAL_BAND:
        regime = "marginal"
    elif ratio < 1.0:
        regime = "stable"
    else:
        regime = "unstable"
    return ConstraintReport(
        name="sample_time",
        satisfied=ratio < 1.0,
        bound_value=bound,
        margin=ratio,
        details={"dt": dt, "f_max": f_max, "regime": regime},
    )


def apparent_admittance_phase(p: SfcParams, B: float, omega: float, dt: float) -> float:
    """Phase [rad] of the sampled robot's apparent admittance.

    Sum of the unit-delay Euler loop phase and the zero-order-hold phase
    ``-dt w / 2``.
    """
    return _admittance_phase(coupled_q(p, B, dt), dt * omega)


def _admittance_phase(q: float, dtw: float) -> float:
    if not (0.0 < dtw < math.pi):
        raise DomainError(f"dt*omega must lie in (0, pi), got {dtw!r}")
    loop = math.atan((q - 1.0) * math.sin(dtw) / (1.0 + (q - 1.0) * math.cos(dtw)))
    return loop - dtw / 2.0


def euler_sensitivity(p: SfcParams, v: float, delta: float, f_ext: float) -> tuple[float, float]:
    """Euler accelerations at ``v`` and at the perturbed velocity ``v + delta``."""
    a_true = (f_ext - p.mu * abs(v) ** (p.n - 1.0) * v) / p.m
    vp = v + delta
    a_pert = (f_ext - p.mu * abs(vp) ** (p.n - 1.0) * vp) / p.m
    return a_true, a_pert


def detect_oscillation(
    accel,
    velocity=None,
    v_reference: float | None = None,
    tail_fraction: float = 0.25,
    min_sign_changes: int = 4,
    divergence_factor: float = 10.0,
) -> OscillationReport:
    """Flag sustained acceleration sign alternation in the trailing part of a run.

    Accelerations below ``1e-9`` of the peak are treated as zero so that
    round-off chatter around a converged state is not counted.
    """
    a = np.asarray(accel, dtype=float)
    if a.size == 0:
        return OscillationReport(False, False, 0)
    if not np.all(np.isfinite(a)):
        return OscillationReport(True, True, 0)
    start = int(a.size * (1.0 - tail_fraction))
    tail = a[start:]
    floor = 1e-9 * float(np.max(np.abs(a))) + 1e-300
    signs = np.sign(np.where(np.abs(tail) > floor, tail, 0.0))
    signs = signs[signs != 0]
    changes = int(np.count_nonzero(signs[1:] != signs[:-1]))
    divergent = False
    if velocity is not None:
        v = np.asarray(velocity, dtype=float)
        if not np.all(np.isfinite(v)):
            divergent = True
        elif v_reference is not None and v_reference > 0:
            divergent = bool(np.max(np.abs(v)) > divergence_factor * v_reference)
    return OscillationReport(changes >= min_sign_changes or divergent, divergent, changes)


def classify_sample_time(
    p: SfcParams,
    f_max: float,
    dt: float,
    t_step: float = 0.1,
    duration: float = 1.0,
) -> dict:
    """Run a step of height ``f_max`` at sample time ``dt`` and label the response.

    Labels: ``"marginal"`` when ``dt`` is within 5 % of the bound, otherwise
    ``"divergent"``, ``"oscillatory"`` or ``"converged"`` from the trace.
    """
    from .signals import Step
    from .sim import SimConfig, run
    from .errors import DivergenceError

    check = sample_time_check(p, f_max, dt)
    v_ref = worst_case_amplitude(p, f_max)
    try:
        trace = run(SimConfig(controller=p, input=Step(f_max, t_on=t_step), dt=dt, duration=duration))
        osc = detect_oscillation(trace.accel, trace.v_internal, v_ref)
    except DivergenceError:
        osc = OscillationReport(True, True, 0)
    if check.details["regime"] == "marginal":
        label = "marginal"
    elif osc.divergent:
        label = "divergent"
    elif osc.oscillatory:
        label = "oscillatory"
    else:
        label = "converged"
    return {
        "label": label,
        "dt": dt,
        "bound": check.bound_value,
        "ratio": check.margin,
        "oscillatory": osc.oscillatory,
        "divergent": osc.divergent,
        "sign_changes": osc.sign_changes,
    }
