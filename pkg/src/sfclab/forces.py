"""Offline labelling of recorded force signals as contactless, traction or impact.

Amplitude is the peak absolute sample. Frequency support comes from the
cumulative one-sided FFT power: ``w_max`` is where 99 % of the power has
accumulated from DC upward, ``w_min`` where the first 1 % has. Frequencies
here are in Hz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["ForceSetBounds", "ForceClass", "signal_stats", "classify", "LABELS"]

LABELS = ("Contactless", "Traction", "Impact", "Unclassified")

SUPPORT_FRACTION = 0.99


@dataclass(frozen=True)
class ForceSetBounds:
    """Thresholds: ``f_th`` [N], ``eps_plus`` / ``eps_minus`` [Hz], ``noise_floor`` [N]."""

    f_th: float
    eps_plus: float
    eps_minus: float
    noise_floor: float = 1e-9

    def __post_init__(self):
        values = (self.f_th, self.eps_plus, self.eps_minus, self.noise_floor)
        if any(not math.isfinite(x) or x < 0 for x in values):
            raise DomainError("force-set bounds must be finite and non-negative")
        if self.eps_minus > self.eps_plus:
            raise DomainError("eps_minus must not exceed eps_plus")


@dataclass(frozen=True)
class ForceClass:
    label: str
    f_max: float
    w_max: float
    w_min: float = 0.0

    def to_dict(self) -> dict:
        return {"label": self.label, "f_max": self.f_max, "w_max_hz": self.w_max, "w_min_hz": self.w_min}


def signal_stats(samples, dt: float) -> tuple[float, float, float]:
    """Return ``(f_max [N], w_max [Hz], w_min [Hz])`` of a sampled force."""
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or x.size < 16:
        raise DomainError("signal_stats needs a 1-D signal of at least 16 samples")
    if not np.all(np.isfinite(x)):
        raise DomainError("signal contains non-finite samples")
    if not dt > 0:
        raise DomainError("dt must be > 0")
    f_max = float(np.max(np.abs(x)))
    power = np.abs(np.fft.rfft(x)) ** 2
    total = float(np.sum(power))
    if total == 0.0:
        return f_max, 0.0, 0.0
    freqs = np.fft.rfftfreq(x.size, dt)
    cum = np.cumsum(power) / total
    i_max = int(np.searchsorted(cum, SUPPORT_FRACTION - 1e-12))
    i_min = int(np.searchsorted(cum, 1.0 - SUPPORT_FRACTION - 1e-12))
    i_max = min(i_max, freqs.size - 1)
    i_min = min(i_min, freqs.size - 1)
    return f_max, float(freqs[i_max]), float(freqs[i_min])


def classify(samples, dt: float, bounds: ForceSetBounds) -> ForceClass:
    """Apply the contactless / impact / traction rules in that order."""
    f_max, w_max, w_min = signal_stats(samples, dt)
    if f_max <= bounds.noise_floor:
        label = "Contactless"
    elif f_max > bounds.f_th or w_max > bounds.eps_plus:
        label = "Impact"
    elif f_max < bounds.f_th and w_max < bounds.eps_minus:
        label = "Traction"
    else:
        label = "Unclassified"
    return ForceClass(label=label, f_max=f_max, w_max=w_max, w_min=w_min)
