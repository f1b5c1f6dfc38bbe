"""Describing-function analysis of the power-law damper.

With ``v = B sin(wt)`` the fundamental of ``mu |v|^(n-1) v`` is written as
``mu B^n Psi(n) sin(wt)`` and the controller then behaves like a first-order
lag with amplitude-dependent damping ``mu B^(n-1) Psi(n)``. Everything here is
closed form; the numeric counterpart lives in :mod:`sfclab.sim`.

Two normalisations of the coefficient are available through ``convention``:

``"gamma_ratio"`` (default)
    ``Psi(n) = 2 sqrt(pi) Gamma(1 + n/2) / Gamma((3 + n)/2)``. This is the
    form the corollaries and the tuning rule are stated in; ``Psi(1) = pi``.
``"fourier"``
    ``Psi(n) / pi``, the exact first Fourier sine coefficient of
    ``|sin|^(n-1) sin``; equals 1 for the linear damper and 3/4 for ``n = 3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .controllers import SfcParams
from .errors import DomainError

__all__ = [
    "lanczos_lgamma",
    "lanczos_gamma",
    "psi",
    "DescribingPoint",
    "BodeCurve",
    "describing_gain",
    "describing_phase",
    "describing_point",
    "dc_output_amplitude",
    "bandwidth_analytic",
    "time_constant_analytic",
    "settling_time_analytic",
    "gain_variation",
    "input_amplitude",
]

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

CONVENTIONS = ("gamma_ratio", "fourier")


def lanczos_lgamma(x: float) -> float:
    """``log Gamma(x)`` for ``x >= 0.5`` (no reflection branch)."""
    if not (math.isfinite(x) and x >= 0.5):
        raise DomainError(f"lanczos_lgamma needs finite x >= 0.5, got {x!r}")
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(acc)


def lanczos_gamma(x: float) -> float:
    return math.exp(lanczos_lgamma(x))


def psi(n: float, convention: str = "gamma_ratio") -> float:
    """Fundamental-harmonic coefficient of the power-law damper."""
    if not (math.isfinite(n) and n > 0):
        raise DomainError(f"psi needs finite n > 0, got {n!r}")
    value = 2.0 * math.sqrt(math.pi) * math.exp(
        lanczos_lgamma(1.0 + 0.5 * n) - lanczos_lgamma(0.5 * (3.0 + n))
    )
    if convention == "gamma_ratio":
        return value
    if convention == "fourier":
        return value / math.pi
    raise DomainError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


@dataclass(frozen=True)
class DescribingPoint:
    B: float
    omega: float
    gain: float
    phase: float


@dataclass
class BodeCurve:
    """Frequency response at one input amplitude.

    ``points`` holds ``(omega [rad/s], gain_db [dB], phase [rad])`` with
    strictly increasing ``omega``.
    """

    amplitude_A: float
    points: list[tuple[float, float, float]] = field(default_factory=list)

    @property
    def omegas(self) -> list[float]:
        return [p[0] for p in self.points]

    @property
    def gains_db(self) -> list[float]:
        return [p[1] for p in self.points]

    @property
    def phases(self) -> list[float]:
        return [p[2] for p in self.points]


def _equivalent_damping(p: SfcParams, B: float, convention: str) -> float:
    if not (math.isfinite(B) and B > 0):
        raise DomainError(f"B must be finite and > 0, got {B!r}")
    return p.mu * B ** (p.n - 1.0) * psi(p.n, convention)


def describing_gain(p: SfcParams, B: float, omega: float, convention: str = "gamma_ratio") -> float:
    """``|N(B, w)| = 1 / sqrt((m w)^2 + (mu B^(n-1) Psi)^2)``; excludes the output gain."""
    if omega < 0:
        raise DomainError("omega must be >= 0")
    c = _equivalent_damping(p, B, convention)
    return 1.0 / math.hypot(p.m * omega, c)


def describing_phase(p: SfcParams, B: float, omega: float, convention: str = "gamma_ratio") -> float:
    """Phase of the describing function [rad], in ``(-pi/2, 0]``."""
    if omega < 0:
        raise DomainError("omega must be >= 0")
    c = _equivalent_damping(p, B, convention)
    return -math.atan2(p.m * omega, c)


def describing_point(p: SfcParams, B: float, omega: float, convention: str = "gamma_ratio") -> DescribingPoint:
    return DescribingPoint(
        B=B,
        omega=omega,
        gain=describing_gain(p, B, omega, convention),
        phase=describing_phase(p, B, omega, convention),
    )


def _check_amplitude(A):
    if not (math.isfinite(A) and A > 0):
        raise DomainError(f"force amplitude must be finite and > 0, got {A!r}")


def dc_output_amplitude(p: SfcParams, A: float, convention: str = "gamma_ratio") -> float:
    """Fundamental velocity amplitude at zero frequency, ``(A / (mu Psi))^(1/n)``."""
    _check_amplitude(A)
    return (A / (p.mu * psi(p.n, convention))) ** (1.0 / p.n)


def bandwidth_analytic(p: SfcParams, A: float, convention: str = "gamma_ratio") -> float:
    """-3 dB bandwidth [rad/s] at force amplitude ``A``."""
    _check_amplitude(A)
    n = p.n
    return (p.mu * psi(n, convention)) ** (1.0 / n) / p.m * (A / math.sqrt(2.0)) ** ((n - 1.0) / n)


def time_constant_analytic(p: SfcParams, A: float, convention: str = "gamma_ratio") -> float:
    """Step-response time constant [s] for a step of height ``A``."""
    _check_amplitude(A)
    n = p.n
    return p.m / ((p.mu * psi(n, convention)) ** (1.0 / n) * A ** ((n - 1.0) / n))


def settling_time_analytic(p: SfcParams, A: float, convention: str = "gamma_ratio") -> float:
    return 4.0 * time_constant_analytic(p, A, convention)


def gain_variation(n: float, w: float) -> float:
    """DC gain change [dB] when the input amplitude grows by ``10**w``.

    ``20 w (1 - n) / n``; tends to ``-20 w`` as ``n`` grows.
    """
    if not (math.isfinite(n) and n >= 1):
        raise DomainError(f"n must be >= 1, got {n!r}")
    if w < 1 or int(w) != w:
        raise DomainError(f"w must be a positive integer, got {w!r}")
    return 20.0 * w * (1.0 - n) / n


def input_amplitude(p: SfcParams, B: float, omega: float, convention: str = "gamma_ratio") -> float:
    """Force amplitude that sustains a fundamental velocity amplitude ``B`` at ``omega``."""
    if not (math.isfinite(B) and B > 0):
        raise DomainError(f"B must be finite and > 0, got {B!r}")
    return math.hypot(p.m * B * omega, p.mu * B**p.n * psi(p.n, convention))
