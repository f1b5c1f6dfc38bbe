"""JSON config files: controller presets, input signals, scenarios, tuning requirements.

Every physical quantity carries its unit in the key name. Controller files::

    {"type": "sfc", "m_kg": 1, "mu_si": 393, "n": 3, "g": 0.21, "dt_s": 0.002}
    {"type": "lac", "m_kg": 1, "mu_n_s_m": 17, "g": 0.17}
    {"type": "nac", "m_kg": 1, "mu_n_s_m": 15.5, "alpha_n_s_m": 25,
     "sigma_force_n": 20, "g": 0.17}

``mu_si`` is the SFC viscosity in N (s/m)^n. ``dt_s`` is optional and is the
sample time the set was designed for.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .controllers import ControllerParams, ControllerState, LacParams, NacParams, SfcParams
from .errors import ConfigError, DomainError
from .signals import Composite, ImpulseProfile, InputSignal, Recorded, Sine, Step
from .sim import HumanModel, SimConfig
from .tuning import TuningRequirements

__all__ = [
    "PRESET_NAMES",
    "load_preset",
    "resolve_controller",
    "params_from_dict",
    "params_to_dict",
    "signal_from_dict",
    "Scenario",
    "scenario_from_dict",
    "load_scenario",
    "requirements_from_dict",
    "read_json",
]

PRESET_NAMES = ("fixed_sfc", "fixed_lac", "fixed_nac", "mobile_sfc", "mobile_lac", "mobile_nac")


def read_json(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a JSON object")
    return data


def _num(d: dict, key: str, default=None) -> float:
    if key not in d:
        if default is None:
            raise ConfigError(f"missing key {key!r}")
        return default
    value = d[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key!r} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{key!r} must be finite")
    return value


def params_from_dict(d: dict) -> tuple[ControllerParams, float | None]:
    """Build controller parameters; also return the design ``dt_s`` if present."""
    kind = d.get("type")
    try:
        if kind == "sfc":
            p = SfcParams(m=_num(d, "m_kg"), mu=_num(d, "mu_si"), n=_num(d, "n"), g=_num(d, "g", 1.0))
        elif kind == "lac":
            p = LacParams(m_a=_num(d, "m_kg"), mu_a=_num(d, "mu_n_s_m"), g_a=_num(d, "g", 1.0))
        elif kind == "nac":
            p = NacParams(
                m_n=_num(d, "m_kg"),
                mu_n=_num(d, "mu_n_s_m"),
                alpha_n=_num(d, "alpha_n_s_m"),
                sigma_n=_num(d, "sigma_force_n"),
                g_n=_num(d, "g", 1.0),
            )
        else:
            raise ConfigError(f"controller type must be 'sfc', 'lac' or 'nac', got {kind!r}")
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    dt = _num(d, "dt_s") if "dt_s" in d else None
    return p, dt


def params_to_dict(p: ControllerParams, dt: float | None = None, **extra) -> dict:
    if isinstance(p, SfcParams):
        d = {"type": "sfc", "m_kg": p.m, "mu_si": p.mu, "n": p.n, "g": p.g}
    elif isinstance(p, LacParams):
        d = {"type": "lac", "m_kg": p.m_a, "mu_n_s_m": p.mu_a, "g": p.g_a}
    else:
        d = {
            "type": "nac",
            "m_kg": p.m_n,
            "mu_n_s_m": p.mu_n,
            "alpha_n_s_m": p.alpha_n,
            "sigma_force_n": p.sigma_n,
            "g": p.g_n,
        }
    if dt is not None:
        d["dt_s"] = dt
    d.update(extra)
    return d


def load_preset(name: str) -> tuple[ControllerParams, float | None]:
    if name not in PRESET_NAMES:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")
    text = resources.files("sfclab").joinpath("presets", f"{name}.json").read_text()
    return params_from_dict(json.loads(text))


def resolve_controller(ref) -> tuple[ControllerParams, float | None]:
    """Accept a preset name, a path to a params file, or an inline dict.

    An inline dict may itself be ``{"preset": "<name or path>"}``.
    """
    if isinstance(ref, dict):
        if "preset" in ref:
            return resolve_controller(ref["preset"])
        return params_from_dict(ref)
    if not isinstance(ref, str):
        raise ConfigError(f"cannot interpret controller reference {ref!r}")
    if ref in PRESET_NAMES:
        return load_preset(ref)
    if Path(ref).is_file():
        return params_from_dict(read_json(ref))
    raise ConfigError(f"{ref!r} is neither a preset name nor a readable params file")


def signal_from_dict(d: dict) -> InputSignal:
    if not isinstance(d, dict):
        raise ConfigError("input must be a JSON object")
    kind = d.get("kind")
    if kind == "step":
        return Step(_num(d, "force_n"), t_on=_num(d, "t_on_s", 0.0))
    if kind == "impulse_profile":
        return ImpulseProfile(_num(d, "f_low_n"), _num(d, "f_high_n"), _num(d, "t_on_s"), _num(d, "t_off_s"))
    if kind == "sine":
        return Sine(_num(d, "force_n"), _num(d, "omega_rad_s"))
    if kind == "recorded":
        samples = d.get("samples_n")
        if not isinstance(samples, list) or not samples:
            raise ConfigError("recorded input needs a non-empty 'samples_n' list")
        if any(isinstance(s, bool) or not isinstance(s, (int, float)) for s in samples):
            raise ConfigError("'samples_n' must hold numbers only")
        return Recorded(tuple(samples), _num(d, "dt_s"))
    if kind == "composite":
        parts = d.get("parts")
        if not isinstance(parts, list) or not parts:
            raise ConfigError("composite input needs a non-empty 'parts' list")
        return Composite(tuple(signal_from_dict(p) for p in parts))
    raise ConfigError(f"unknown input kind {kind!r}")


@dataclass
class Scenario:
    name: str
    sim: SimConfig
    human: HumanModel | None = None
    analyses: list = field(default_factory=list)
    classify_bounds: dict = field(default_factory=dict)


def scenario_from_dict(d: dict, controller_override=None) -> Scenario:
    """Scenario file::

        {"name": "...", "controller": "fixed_sfc" | {...},
         "input": {"kind": "step", "force_n": 5},
         "dt_s": 0.002, "duration_s": 1.0,
         "initial_state": {"v_m_s": 0, "x_m": 0},
         "human": {"m_h_kg": 1, "b_h_n_s_m": 10},
         "analyses": ["step-metrics", "energy", "classify"],
         "classify_bounds": {"f_th_n": 30, "eps_plus_hz": 5, "eps_minus_hz": 2}}

    ``dt_s`` falls back to the controller file's design sample time.
    """
    ref = controller_override if controller_override is not None else d.get("controller")
    if ref is None:
        raise ConfigError("scenario has no controller")
    params, design_dt = resolve_controller(ref)
    if "input" not in d:
        raise ConfigError("scenario has no input")
    signal = signal_from_dict(d["input"])
    dt = _num(d, "dt_s") if "dt_s" in d else design_dt
    if dt is None:
        raise ConfigError("no dt_s in scenario or controller file")
    init = d.get("initial_state", {})
    if not isinstance(init, dict):
        raise ConfigError("initial_state must be an object")
    state = ControllerState(v=_num(init, "v_m_s", 0.0), x=_num(init, "x_m", 0.0))
    sim = SimConfig(controller=params, input=signal, dt=dt, duration=_num(d, "duration_s"), initial_state=state)
    human = None
    if "human" in d:
        h = d["human"]
        if not isinstance(h, dict):
            raise ConfigError("human must be an object")
        intent = signal_from_dict(h["intent"]) if "intent" in h else None
        human = HumanModel(m_h=_num(h, "m_h_kg"), b_h=_num(h, "b_h_n_s_m"), f_intent=intent)
    analyses = d.get("analyses", [])
    if not isinstance(analyses, list):
        raise ConfigError("analyses must be a list")
    bounds = d.get("classify_bounds", {})
    if not isinstance(bounds, dict):
        raise ConfigError("classify_bounds must be an object")
    return Scenario(
        name=str(d.get("name", "scenario")), sim=sim, human=human, analyses=analyses, classify_bounds=bounds
    )


def load_scenario(path, controller_override=None) -> Scenario:
    return scenario_from_dict(read_json(path), controller_override)


def requirements_from_dict(d: dict, bandwidth_in_hz: bool = False) -> TuningRequirements:
    """Tuning requirements; the traction bandwidth is ``w_c_ease_rad_s`` or ``w_c_ease_hz``."""
    if "w_c_ease_hz" in d:
        w = 2.0 * math.pi * _num(d, "w_c_ease_hz")
    else:
        w = _num(d, "w_c_ease_rad_s")
        if bandwidth_in_hz:
            w *= 2.0 * math.pi
    return TuningRequirements(
        f_ease=_num(d, "f_ease_n"),
        f_interf=_num(d, "f_interf_n"),
        v_d=_num(d, "v_d_m_s"),
        v_c=_num(d, "v_c_m_s"),
        w_c_ease=w,
        dt=_num(d, "dt_s"),
        m=_num(d, "m_kg", 1.0),
    )
