from . import kernel
from .accept import Verdict, accepts, explore
from .semantics import Configuration, TruncatedConfiguration, initial_configurations, run_prefix, step, truncate

__all__ = [
    "Configuration",
    "TruncatedConfiguration",
    "Verdict",
    "accepts",
    "explore",
    "initial_configurations",
    "kernel",
    "run_prefix",
    "step",
    "truncate",
]
