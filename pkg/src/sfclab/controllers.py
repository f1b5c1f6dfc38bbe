"""Virtual-dynamics admittance controllers.

Three one-dimensional force-to-velocity maps share the structure

    m * a + D(v, f) = f,        v_out = g * v

and differ only in the damping law ``D``:

* :class:`SfcParams` -- power-law (shear-thickening) damping ``mu |v|^(n-1) v``
* :class:`LacParams` -- linear damping ``mu_a v``
* :class:`NacParams` -- force-scheduled damping
  ``(mu_n + alpha_n (1 - exp(-f^2 / sigma_n^2))) v``

Discrete stepping is forward Euler with the damping evaluated at the previous
velocity sample. Units are SI throughout (N, m/s, kg, s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Union

from .errors import DomainError

__all__ = [
    "SfcParams",
    "LacParams",
    "NacParams",
    "ControllerParams",
    "ControllerState",
    "EnergyLedger",
    "nonlinear_damping",
    "nac_damping_coeff",
    "damping_force",
    "step_discrete",
    "apply_gain",
    "steady_state_velocity",
    "steady_internal_velocity",
    "phase_derivative",
    "spatial_velocity_ratio",
    "dissipated_power",
    "inertia",
    "gain",
]


def _require_positive(**values):
    for name, value in values.items():
        if not (math.isfinite(value) and value > 0):
            raise DomainError(f"{name} must be finite and > 0, got {value!r}")


def _require_finite(name, value):
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class SfcParams:
    """Shear-thickening fluid controller parameters.

    Attributes
    ----------
    m : float
        Virtual inertia [kg].
    mu : float
        Apparent viscosity [N (s/m)^n].
    n : float
        Power-law exponent, ``n >= 1``; ``n == 1`` is the linear case.
    g : float
        Output gain.
    """

    m: float
    mu: float
    n: float
    g: float = 1.0

    def __post_init__(self):
        _require_positive(m=self.m, mu=self.mu, g=self.g)
        if not (math.isfinite(self.n) and self.n >= 1):
            raise DomainError(f"n must be finite and >= 1, got {self.n!r}")


@dataclass(frozen=True)
class LacParams:
    """Linear admittance controller: ``m_a a + mu_a v = f``, output ``g_a v``."""

    m_a: float
    mu_a: float
    g_a: float = 1.0

    def __post_init__(self):
        _require_positive(m_a=self.m_a, mu_a=self.mu_a, g_a=self.g_a)


@dataclass(frozen=True)
class NacParams:
    """Nonlinear admittance controller with force-scheduled damping.

    ``alpha_n`` is the extra damping reached when ``|f| >> sigma_n``.
    """

    m_n: float
    mu_n: float
    alpha_n: float
    sigma_n: float
    g_n: float = 1.0

    def __post_init__(self):
        _require_positive(
            m_n=self.m_n,
            mu_n=self.mu_n,
            alpha_n=self.alpha_n,
            sigma_n=self.sigma_n,
            g_n=self.g_n,
        )


ControllerParams = Union[SfcParams, LacParams, NacParams]


@dataclass(frozen=True)
class ControllerState:
    """Internal state of the virtual dynamics after a step."""

    v: float = 0.0
    a: float = 0.0
    x: float = 0.0
    t: float = 0.0


@dataclass(frozen=True)
class EnergyLedger:
    """Energy bookkeeping of a trajectory [J]."""

    storage: float = 0.0
    dissipated: float = 0.0
    work_in: float = 0.0


def inertia(p: ControllerParams) -> float:
    if isinstance(p, SfcParams):
        return p.m
    if isinstance(p, LacParams):
        return p.m_a
    return p.m_n


def gain(p: ControllerParams) -> float:
    if isinstance(p, SfcParams):
        return p.g
    if isinstance(p, LacParams):
        return p.g_a
    return p.g_n


def nonlinear_damping(p: SfcParams, v: float) -> float:
    """Power-law damping force ``mu |v|^(n-1) v`` [N].

    The ``n == 1`` branch is written as ``mu * v`` so that it reproduces the
    linear controller bit for bit.
    """
    _require_finite("v", v)
    if p.n == 1:
        return p.mu * v
    if v == 0.0:
        return 0.0
    return p.mu * abs(v) ** (p.n - 1.0) * v


def nac_damping_coeff(p: NacParams, f_ext: float) -> float:
    """Force-scheduled damping coefficient of the N-AC [N s/m]."""
    _require_finite("f_ext", f_ext)
    return p.mu_n + p.alpha_n * (1.0 - math.exp(-(f_ext * f_ext) / (p.sigma_n * p.sigma_n)))


def damping_force(p: ControllerParams, v: float, f_ext: float = 0.0) -> float:
    """Damping force of any controller at velocity ``v`` under force ``f_ext``."""
    if isinstance(p, SfcParams):
        return nonlinear_damping(p, v)
    if isinstance(p, LacParams):
        _require_finite("v", v)
        return p.mu_a * v
    return nac_damping_coeff(p, f_ext) * v


def step_discrete(p: ControllerParams, s: ControllerState, f_ext: float, dt: float) -> ControllerState:
    """Advance the virtual dynamics one forward-Euler step.

    ``a(t) = (f(t) - D(v(t-1))) / m``, ``v(t) = v(t-1) + a(t) dt`` and
    ``x(t) = x(t-1) + v(t) dt``. For the N-AC the damping coefficient uses the
    current force sample with the previous velocity.
    """
    if not (math.isfinite(dt) and dt > 0):
        raise DomainError(f"dt must be finite and > 0, got {dt!r}")
    _require_finite("f_ext", f_ext)
    a = (f_ext - damping_force(p, s.v, f_ext)) / inertia(p)
    v = s.v + a * dt
    return ControllerState(v=v, a=a, x=s.x + v * dt, t=s.t + dt)


def apply_gain(p: ControllerParams, v: float) -> float:
    """Commanded (output) velocity for internal velocity ``v``."""
    return gain(p) * v


def steady_internal_velocity(p: ControllerParams, f_ext: float) -> float:
    """Equilibrium internal velocity under a constant force."""
    _require_finite("f_ext", f_ext)
    if isinstance(p, SfcParams):
        if f_ext == 0.0:
            return 0.0
        return math.copysign((abs(f_ext) / p.mu) ** (1.0 / p.n), f_ext)
    if isinstance(p, LacParams):
        return f_ext / p.mu_a
    # the N-AC coefficient depends on f only, so the balance is linear in v
    return f_ext / nac_damping_coeff(p, f_ext)


def steady_state_velocity(p: ControllerParams, f_ext: float) -> float:
    """Equilibrium output velocity under a constant force [m/s]."""
    return apply_gain(p, steady_internal_velocity(p, f_ext))


def phase_derivative(p: SfcParams, state: tuple[float, float]) -> tuple[float, float]:
    """Free-motion vector field ``(x1', x2') = (x2, -(mu/m)|x2|^(n-1) x2)``."""
    _, x2 = state
    return x2, -nonlinear_damping(p, x2) / p.m


def spatial_velocity_ratio(p: SfcParams, x2: float) -> float:
    """Velocity change per unit displacement in free motion, ``dx2/dx1``."""
    _require_finite("x2", x2)
    if p.n == 1:
        return -p.mu / p.m
    return -(p.mu / p.m) * abs(x2) ** (p.n - 1.0)


def dissipated_power(p: SfcParams, v: float) -> float:
    """Instantaneous power absorbed by the damper, ``mu |v|^(n-1) v^2`` [W]."""
    return nonlinear_damping(p, v) * v


def with_gain(p: ControllerParams, value: float) -> ControllerParams:
    """Copy of ``p`` with the output gain replaced."""
    if isinstance(p, SfcParams):
        return replace(p, g=value)
    if isinstance(p, LacParams):
        return replace(p, g_a=value)
    return replace(p, g_n=value)
