"""Shear-thickening admittance control: controllers, describing-function analysis,
stability guards, tuning, simulation, force classification and DLS kinematics."""

__version__ = "0.1.0"

from .controllers import (
    ControllerParams,
    ControllerState,
    LacParams,
    NacParams,
    SfcParams,
    damping_force,
    steady_state_velocity,
    step_discrete,
)
from .describing import bandwidth_analytic, gain_variation, psi, time_constant_analytic
from .errors import (
    ConfigError,
    DivergenceError,
    DomainError,
    InfeasibleRequirements,
    NotFoundError,
    NumericError,
)
from .forces import ForceSetBounds, classify
from .kinematics import DlsConfig, dls_pseudoinverse
from .signals import ImpulseProfile, Recorded, Sine, Step, impact_profile
from .sim import SimConfig, SimTrace, numeric_bandwidth, numeric_bode, numeric_time_constant, run, run_coupled
from .stability import coupled_stability_check, max_sample_time, sample_time_check
from .tuning import TuningRequirements, tune, verify_tuning

__all__ = [
    "ControllerParams",
    "ControllerState",
    "LacParams",
    "NacParams",
    "SfcParams",
    "damping_force",
    "steady_state_velocity",
    "step_discrete",
    "bandwidth_analytic",
    "gain_variation",
    "psi",
    "time_constant_analytic",
    "ConfigError",
    "DivergenceError",
    "DomainError",
    "InfeasibleRequirements",
    "NotFoundError",
    "NumericError",
    "ForceSetBounds",
    "classify",
    "DlsConfig",
    "dls_pseudoinverse",
    "ImpulseProfile",
    "Recorded",
    "Sine",
    "Step",
    "impact_profile",
    "SimConfig",
    "SimTrace",
    "numeric_bandwidth",
    "numeric_bode",
    "numeric_time_constant",
    "run",
    "run_coupled",
    "coupled_stability_check",
    "max_sample_time",
    "sample_time_check",
    "TuningRequirements",
    "tune",
    "verify_tuning",
]
