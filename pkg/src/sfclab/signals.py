"""External-force input signals, sampled on a uniform time grid."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = ["Step", "ImpulseProfile", "Sine", "Recorded", "Composite", "InputSignal", "impact_profile"]


@dataclass(frozen=True)
class Step:
    """``amplitude`` newtons from ``t_on`` onwards, zero before."""

    amplitude: float
    t_on: float = 0.0

    def sample(self, t: np.ndarray) -> np.ndarray:
        return np.where(t >= self.t_on, float(self.amplitude), 0.0)

    @property
    def peak(self) -> float:
        return abs(self.amplitude)


@dataclass(frozen=True)
class ImpulseProfile:
    """``f_low``, raised to ``f_high`` on ``[t_on, t_off)``."""

    f_low: float
    f_high: float
    t_on: float
    t_off: float

    def __post_init__(self):
        if not self.t_off > self.t_on:
            raise ConfigError("impulse profile needs t_off > t_on")

    def sample(self, t: np.ndarray) -> np.ndarray:
        inside = (t >= self.t_on) & (t < self.t_off)
        return np.where(inside, float(self.f_high), float(self.f_low))

    @property
    def peak(self) -> float:
        return max(abs(self.f_low), abs(self.f_high))


@dataclass(frozen=True)
class Sine:
    """``amplitude * sin(omega t)``, ``omega`` in rad/s."""

    amplitude: float
    omega: float

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise ConfigError("sine input needs a finite omega > 0")

    def sample(self, t: np.ndarray) -> np.ndarray:
        return self.amplitude * np.sin(self.omega * t)

    @property
    def peak(self) -> float:
        return abs(self.amplitude)


@dataclass(frozen=True)
class Recorded:
    """Sampled force held constant between samples (zero-order hold)."""

    samples: tuple
    dt: float

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ConfigError("recorded input needs a non-empty 1-D sample list")
        if not np.all(np.isfinite(arr)):
            raise ConfigError("recorded input contains non-finite samples")
        if not self.dt > 0:
            raise ConfigError("recorded input needs dt > 0")
        object.__setattr__(self, "samples", tuple(float(x) for x in arr))

    def sample(self, t: np.ndarray) -> np.ndarray:
        arr = np.asarray(self.samples)
        # small slack so that t = k*dt lands on sample k despite round-off
        idx = np.floor(np.asarray(t) / self.dt + 1e-9).astype(int)
        return arr[np.clip(idx, 0, arr.size - 1)]

    @property
    def peak(self) -> float:
        return float(np.max(np.abs(self.samples)))


@dataclass(frozen=True)
class Composite:
    """Sum of other signals."""

    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise ConfigError("composite input needs at least one part")
        object.__setattr__(self, "parts", tuple(self.parts))

    def sample(self, t: np.ndarray) -> np.ndarray:
        total = np.zeros_like(np.asarray(t, dtype=float))
        for part in self.parts:
            total = total + part.sample(t)
        return total

    @property
    def peak(self) -> float:
        return sum(p.peak for p in self.parts)


InputSignal = Step | ImpulseProfile | Sine | Recorded | Composite


def impact_profile() -> ImpulseProfile:
    """5 N traction with a 50 N impact held on [0.6 s, 1.0 s)."""
    return ImpulseProfile(f_low=5.0, f_high=50.0, t_on=0.6, t_off=1.0)
