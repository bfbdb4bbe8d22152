"""Monte Carlo laboratory for 1-d random walks in static and dynamic random environments."""

__version__ = "0.1.0"

from .errors import ContractViolationError, InvalidArgumentError, WindowOverflowError
from .estimators import (
    classify_curve,
    classify_exponent,
    estimate_scaling,
    estimate_speed,
    rescaled_density,
)
from .oracles import (
    averaged_speed,
    classify_regime,
    kks_exponent,
    leaf_boundaries,
    reliable_steps,
    static_speed,
)
from .params import ModelParams
from .simulator import run, run_replica, run_replica_fast
from .sweep import GridSpec, run_scaling_sweep, run_speed_sweep, speed_curve_diagram

__all__ = [
    "__version__",
    "ModelParams",
    "InvalidArgumentError",
    "ContractViolationError",
    "WindowOverflowError",
    "run",
    "run_replica",
    "run_replica_fast",
    "estimate_speed",
    "estimate_scaling",
    "rescaled_density",
    "classify_exponent",
    "classify_curve",
    "static_speed",
    "averaged_speed",
    "kks_exponent",
    "classify_regime",
    "leaf_boundaries",
    "reliable_steps",
    "GridSpec",
    "run_speed_sweep",
    "run_scaling_sweep",
    "speed_curve_diagram",
]
