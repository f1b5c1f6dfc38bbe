"""Fixed-step time-domain simulation and numeric frequency-response extraction.

Every run is deterministic: the same :class:`SimConfig` always yields the same
trace bytes. Energy columns use trapezoidal accumulation, with the force held
over each step for the work term.
"""

from __future__ import annotations

import io
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .controllers import (
    ControllerParams,
    ControllerState,
    LacParams,
    NacParams,
    SfcParams,
    gain,
)
from .describing import BodeCurve, time_constant_analytic
from .errors import ConfigError, DivergenceError, DomainError, NotFoundError
from .signals import InputSignal, Sine
from .stability import stable_dt_limit

__all__ = [
    "SimConfig",
    "SimTrace",
    "HumanModel",
    "GainMeasurement",
    "TRACE_COLUMNS",
    "BODE_COLUMNS",
    "run",
    "run_coupled",
    "measure_gain",
    "sweep_config",
    "numeric_bode",
    "numeric_bandwidth",
    "numeric_time_constant",
    "dc_gain",
    "band_energy",
    "settle_time",
    "bode_to_csv",
    "write_atomic",
]

TRACE_COLUMNS = (
    "time",
    "f_ext",
    "f_human",
    "accel",
    "v_internal",
    "v_output",
    "position",
    "work_in",
    "dissipated",
    "storage",
)
BODE_COLUMNS = ("amplitude", "omega", "gain_db", "phase_deg")

DEFAULT_OMEGA_GRID = np.logspace(-2.0, 2.0, 60)
PROJECTION_PERIODS = 10
HALF_POWER_DB = 10.0 * math.log10(2.0)  # 3.0103 dB


@dataclass(frozen=True)
class SimConfig:
    controller: ControllerParams
    input: InputSignal
    dt: float
    duration: float
    initial_state: ControllerState = field(default_factory=ControllerState)

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigError(f"dt must be > 0, got {self.dt!r}")
        if not (math.isfinite(self.duration) and self.duration >= self.dt):
            raise ConfigError("duration must be >= dt")

    @property
    def n_steps(self) -> int:
        return _n_steps(self.duration, self.dt)


@dataclass(frozen=True)
class HumanModel:
    """Human arm as a mass-damper reacting to the robot output velocity.

    ``f_intent`` is the exogenous force the human means to apply; when None the
    config's input signal is used.
    """

    m_h: float
    b_h: float
    f_intent: InputSignal | None = None

    def __post_init__(self):
        if not (self.m_h > 0 and self.b_h > 0):
            raise ConfigError("human model needs m_h > 0 and b_h > 0")


@dataclass(frozen=True)
class SimTrace:
    """Uniformly sampled simulation output. Row 0 is the initial state."""

    time: np.ndarray
    f_ext: np.ndarray
    f_human: np.ndarray
    accel: np.ndarray
    v_internal: np.ndarray
    v_output: np.ndarray
    position: np.ndarray
    work_in: np.ndarray
    dissipated: np.ndarray
    storage: np.ndarray
    dt: float

    def __len__(self):
        return self.time.size

    def as_array(self) -> np.ndarray:
        return np.column_stack([getattr(self, c) for c in TRACE_COLUMNS])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(TRACE_COLUMNS) + "\n")
        np.savetxt(buf, self.as_array(), delimiter=",", fmt="%.17g")
        return buf.getvalue()

    def energy_defect(self) -> float:
        """Accumulated per-step energy-balance residual [J].

        ``sum |dV - dW + dDiss|``; first order in ``dt`` for Euler stepping.
        """
        dv = np.diff(self.storage)
        dw = np.diff(self.work_in)
        dd = np.diff(self.dissipated)
        return float(np.sum(np.abs(dv - dw + dd)))


@dataclass(frozen=True)
class GainMeasurement:
    B: float
    gain: float
    phase: float


def _n_steps(duration: float, dt: float) -> int:
    return int(math.floor(duration / dt + 1e-9))


def _pack(p: ControllerParams) -> tuple[int, float, float, float, float]:
    if isinstance(p, SfcParams):
        return _kernels.KIND_SFC, p.m, p.mu, p.n, 0.0
    if isinstance(p, LacParams):
        return _kernels.KIND_LAC, p.m_a, p.mu_a, 0.0, 0.0
    if isinstance(p, NacParams):
        return _kernels.KIND_NAC, p.m_n, p.mu_n, p.alpha_n, p.sigma_n
    raise ConfigError(f"unsupported controller type {type(p).__name__}")


def _simulate(config: SimConfig, human: HumanModel | None) -> SimTrace:
    n = config.n_steps
    t = np.arange(n + 1) * config.dt
    signal = config.input
    if human is not None and human.f_intent is not None:
        signal = human.f_intent
    f_in = np.ascontiguousarray(signal.sample(t), dtype=float)
    if not np.all(np.isfinite(f_in)):
        raise ConfigError("input signal produced non-finite samples")
    kind, m, c1, c2, c3 = _pack(config.controller)
    g = gain(config.controller)
    s0 = config.initial_state
    coupled = human is not None
    m_h = human.m_h if coupled else 0.0
    b_h = human.b_h if coupled else 0.0
    f_ext, f_hum, acc, vel, pos, work, diss, store, fail = _kernels.simulate(
        kind, m, c1, c2, c3, g, f_in, config.dt, s0.v, s0.x, s0.a, m_h, b_h, coupled
    )
    if fail >= 0:
        raise DivergenceError(int(fail))
    return SimTrace(
        time=t + s0.t,
        f_ext=f_ext,
        f_human=f_hum,
        accel=acc,
        v_internal=vel,
        v_output=g * vel,
        position=pos,
        work_in=work,
        dissipated=diss,
        storage=store,
        dt=config.dt,
    )


def run(config: SimConfig) -> SimTrace:
    """Open-loop run: the input signal is the measured contact force."""
    return _simulate(config, None)


def run_coupled(config: SimConfig, human: HumanModel) -> SimTrace:
    """Closed-loop run against a mass-damper human.

    At each step the controller sees
    ``f_intent(t) - (m_h (v_o(t-1) - v_o(t-2)) / dt + b_h v_o(t-1))`` where
    ``v_o`` is the commanded output velocity; the first backward difference is
    taken as zero. ``f_human`` records the subtracted reaction force.
    """
    return _simulate(config, human)


def _slow_time_constant(p: ControllerParams, amplitude: float) -> float:
    if isinstance(p, SfcParams):
        # the Fourier normalisation gives the longer (conservative) estimate
        return time_constant_analytic(p, amplitude, convention="fourier")
    if isinstance(p, LacParams):
        return p.m_a / p.mu_a
    return p.m_n / p.mu_n


def _transient_time(p: ControllerParams, amplitude: float, omega: float) -> float:
    period = 2.0 * math.pi / omega
    return max(5.0 * _slow_time_constant(p, amplitude), 10.0 * period)


def sweep_config(
    p: ControllerParams,
    amplitude: float,
    omega: float,
    periods: int = PROJECTION_PERIODS,
    stability_fraction: float = 0.1,
    samples_per_period: int = 500,
) -> SimConfig:
    """Sine-input config sized for :func:`measure_gain`.

    ``dt`` divides the period exactly and stays below both
    ``stability_fraction`` of the Euler stability limit and
    ``period / samples_per_period``.
    """
    if not (amplitude > 0 and omega > 0):
        raise DomainError("sweep needs amplitude > 0 and omega > 0")
    period = 2.0 * math.pi / omega
    dt_max = min(stability_fraction * stable_dt_limit(p, amplitude), period / samples_per_period)
    per_period = int(math.ceil(period / dt_max))
    dt = period / per_period
    n_skip = int(math.ceil(_transient_time(p, amplitude, omega) / dt))
    n_total = n_skip + periods * per_period
    return SimConfig(controller=p, input=Sine(amplitude, omega), dt=dt, duration=n_total * dt)


def measure_gain(config: SimConfig, periods: int = PROJECTION_PERIODS) -> GainMeasurement:
    """Fundamental amplitude, gain and phase of the internal velocity under sine input.

    The transient ``max(5 tau, 10 periods)`` is skipped and the last
    ``periods`` full periods are projected onto ``sin``/``cos``. Gain excludes
    the output scale factor.
    """
    sig = config.input
    if not isinstance(sig, Sine):
        raise ConfigError("measure_gain needs a sine input")
    p = config.controller
    period = 2.0 * math.pi / sig.omega
    n_steps = config.n_steps
    n_proj = int(round(periods * period / config.dt))
    n_skip_needed = int(math.ceil(_transient_time(p, abs(sig.amplitude), sig.omega) / config.dt - 1e-9))
    if n_proj < 1 or n_steps - n_proj < n_skip_needed:
        raise ConfigError(
            f"duration {config.duration:g} s too short: need transient "
            f"{n_skip_needed * config.dt:g} s plus {periods} periods of {period:g} s"
        )
    kind, m, c1, c2, c3 = _pack(p)
    s, c, fail = _kernels.sine_projection(
        kind, m, c1, c2, c3, float(sig.amplitude), float(sig.omega), config.dt,
        config.initial_state.v, n_steps, n_proj,
    )
    if fail >= 0:
        raise DivergenceError(int(fail))
    B = math.hypot(s, c)
    return GainMeasurement(B=B, gain=B / abs(sig.amplitude), phase=math.atan2(c, s))


def numeric_bode(p: ControllerParams, amplitudes, omega_grid=None) -> list[BodeCurve]:
    """One measured :class:`BodeCurve` per force amplitude."""
    omegas = DEFAULT_OMEGA_GRID if omega_grid is None else np.asarray(omega_grid, dtype=float)
    if len(amplitudes) == 0 or omegas.size == 0:
        raise DomainError("amplitude list and frequency grid must be non-empty")
    if np.any(omegas <= 0) or np.any(np.diff(omegas) <= 0):
        raise DomainError("frequency grid must be positive and strictly increasing")
    curves = []
    for A in amplitudes:
        points = []
        for w in omegas:
            gm = measure_gain(sweep_config(p, float(A), float(w)))
            points.append((float(w), 20.0 * math.log10(gm.gain), gm.phase))
        curves.append(BodeCurve(amplitude_A=float(A), points=points))
    return curves


def numeric_bandwidth(curve: BodeCurve) -> float:
    """First frequency where the gain falls 3.0103 dB below the lowest-frequency gain.

    Linear interpolation in ``log(omega)``.
    """
    w = np.asarray(curve.omegas)
    db = np.asarray(curve.gains_db)
    if w.size < 2:
        raise NotFoundError("curve has fewer than two points")
    threshold = db[0] - HALF_POWER_DB
    below = np.nonzero(db <= threshold)[0]
    if below.size == 0:
        raise NotFoundError("no -3 dB crossing inside the swept range")
    i = int(below[0])
    lw0, lw1 = math.log(w[i - 1]), math.log(w[i])
    frac = (threshold - db[i - 1]) / (db[i] - db[i - 1])
    return math.exp(lw0 + frac * (lw1 - lw0))


def numeric_time_constant(trace: SimTrace, t_start: float = 0.0, tolerance: float = 0.01) -> float:
    """Time to reach 63.2 % of the final output velocity, measured from ``t_start``.

    The final value is the mean of the last 10 % of the trace; the trace must
    have settled there (relative spread within ``tolerance``).
    """
    v = trace.v_output
    tail = v[int(v.size * 0.9):]
    final = float(np.mean(tail))
    if final == 0.0 or (np.max(tail) - np.min(tail)) > tolerance * abs(final):
        raise NotFoundError("trace did not reach a steady state")
    target = 0.632 * final
    t = trace.time
    rel = (v - target) * math.copysign(1.0, final)
    hit = np.nonzero((rel >= 0) & (t >= t_start))[0]
    if hit.size == 0:
        raise NotFoundError("63.2 % level never reached")
    i = int(hit[0])
    if i == 0 or t[i - 1] < t_start:
        return float(t[i] - t_start)
    frac = (target - v[i - 1]) / (v[i] - v[i - 1])
    return float(t[i - 1] + frac * (t[i] - t[i - 1]) - t_start)


def dc_gain(p: ControllerParams, amplitude: float, duration: float | None = None) -> float:
    """Steady internal-velocity gain ``v*/A`` from a constant-force run."""
    from .signals import Step

    if duration is None:
        duration = 40.0 * _slow_time_constant(p, amplitude)
    dt = min(0.1 * stable_dt_limit(p, amplitude), duration / 2000.0)
    trace = run(SimConfig(controller=p, input=Step(amplitude), dt=dt, duration=duration))
    return float(trace.v_internal[-1]) / amplitude


def band_energy(signal, dt: float, band: tuple[float, float]) -> float:
    """Fraction of Hann-windowed one-sided FFT power inside ``band`` [rad/s]."""
    lo, hi = band
    if not (0 <= lo < hi):
        raise DomainError(f"empty or invalid band {band!r}")
    x = np.asarray(signal, dtype=float)
    if x.size < 16:
        raise DomainError("band_energy needs at least 16 samples")
    power = np.abs(np.fft.rfft(x * np.hanning(x.size))) ** 2
    total = float(np.sum(power))
    if total == 0.0:
        return 0.0
    omega = 2.0 * math.pi * np.fft.rfftfreq(x.size, dt)
    inside = (omega >= lo) & (omega <= hi)
    return float(np.sum(power[inside]) / total)


def settle_time(trace: SimTrace, after: float, target: float, rel_band: float = 0.05) -> float:
    """Time from ``after`` until ``v_output`` enters and stays within ``rel_band`` of ``target``."""
    t = trace.time
    outside = np.abs(trace.v_output - target) > rel_band * abs(target)
    idx = np.nonzero(outside & (t >= after))[0]
    if idx.size == 0:
        return 0.0
    last = int(idx[-1])
    if last == t.size - 1:
        raise NotFoundError("output never settled inside the band")
    return float(t[last + 1] - after)


def bode_to_csv(curves: list[BodeCurve]) -> str:
    lines = [",".join(BODE_COLUMNS)]
    for c in curves:
        for w, db, ph in c.points:
            lines.append(f"{c.amplitude_A:.17g},{w:.17g},{db:.17g},{math.degrees(ph):.17g}")
    return "\n".join(lines) + "\n"


def write_atomic(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file in the same directory and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
