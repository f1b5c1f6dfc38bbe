"""Closed-form parameter tuning for the SFC from interaction requirements.

Given the traction force ``f_ease`` that should produce output velocity
``v_d`` and the impact force ``f_interf`` whose output must stay below
``v_c``, the exponent, viscosity and gain follow in seven lines. The only
branch lowers the traction bandwidth when the resulting impact bandwidth
would violate the Euler sample-time limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .controllers import SfcParams, steady_state_velocity
from .describing import psi
from .errors import ConfigError, InfeasibleRequirements, NumericError
from .stability import ConstraintReport, max_sample_time

__all__ = ["TuningRequirements", "TunedParams", "tune", "verify_tuning"]


@dataclass(frozen=True)
class TuningRequirements:
    """Interaction requirements. ``w_c_ease`` is in rad/s."""

    f_ease: float
    f_interf: float
    v_d: float
    v_c: float
    w_c_ease: float
    dt: float
    m: float = 1.0

    def __post_init__(self):
        for name in ("f_ease", "f_interf", "v_d", "v_c", "w_c_ease", "dt", "m"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class TunedParams:
    params: SfcParams
    w_c_ease_effective: float
    bandwidth_adjusted: bool
    w_c_max: float


def tune(req: TuningRequirements) -> TunedParams:
    if req.v_c <= req.v_d or req.f_interf <= req.f_ease:
        raise InfeasibleRequirements("need v_c > v_d and f_interf > f_ease")
    force_ratio = req.f_interf / req.f_ease
    n = math.log(force_ratio) / math.log(req.v_c / req.v_d)
    if not n > 1.0 + 1e-12:
        raise InfeasibleRequirements(f"requirements give exponent n = {n:.6g}; need n > 1")
    shape = (n - 1.0) / n
    w_ease = req.w_c_ease
    w_max = w_ease * force_ratio**shape
    adjusted = False
    if w_max > 2.0 ** ((1.0 + n) / (2.0 * n)) / (req.dt * n):
        w_ease = 2.0 / (req.dt * n) * (req.f_ease / (math.sqrt(2.0) * req.f_interf)) ** shape
        w_max = w_ease * force_ratio**shape
        adjusted = True
    # log form: both powers over- or underflow on their own for large n
    log_mu = n * math.log(req.m * w_ease) - math.log(psi(n)) + (n - 1.0) * math.log(math.sqrt(2.0) / req.f_ease)
    if not -700.0 < log_mu < 700.0:
        raise NumericError(f"viscosity exp({log_mu:.6g}) is not representable for exponent n = {n:.6g}")
    mu = math.exp(log_mu)
    g = req.v_d * (mu / req.f_ease) ** (1.0 / n)
    return TunedParams(
        params=SfcParams(m=req.m, mu=mu, n=n, g=g),
        w_c_ease_effective=w_ease,
        bandwidth_adjusted=adjusted,
        w_c_max=w_max,
    )


def verify_tuning(tp: TunedParams, req: TuningRequirements, rtol: float = 1e-9) -> ConstraintReport:
    """Check the tuned controller against the requirements it came from.

    (i) output at ``f_ease`` equals ``v_d``; (ii) output at ``f_interf`` does
    not exceed ``v_c``; (iii) the sample time is below the Euler limit at
    ``f_interf``. ``margin`` is the sample-time ratio, forced to at least 1
    when (i) or (ii) fails.
    """
    p = tp.params
    v_ease = steady_state_velocity(p, req.f_ease)
    v_interf = steady_state_velocity(p, req.f_interf)
    dt_limit = max_sample_time(p, req.f_interf)
    ease_ok = abs(v_ease - req.v_d) <= rtol * req.v_d
    interf_ok = v_interf <= req.v_c * (1.0 + rtol)
    dt_ok = req.dt < dt_limit
    margin = req.dt / dt_limit
    if not (ease_ok and interf_ok):
        margin = max(margin, 1.0)
    return ConstraintReport(
        name="tuning",
        satisfied=bool(ease_ok and interf_ok and dt_ok),
        bound_value=dt_limit,
        margin=margin,
        details={
            "traction_output": v_ease,
            "traction_ok": ease_ok,
            "impact_output": v_interf,
            "impact_ok": interf_ok,
            "dt": req.dt,
            "dt_limit": dt_limit,
            "dt_ok": dt_ok,
        },
    )
