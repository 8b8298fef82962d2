from .abstract_predictor import BAD, Pair, PredState, remove_abstract_predictor
from .abstract_recorder import remove_abstract_recorder
from .common import (
    ALL_CHECKSETS,
    FIRST,
    LIVE,
    MUTATIONS,
    AbsStep,
    CheckSet,
    Lower,
    LowerBound,
    Upper,
    UpperBound,
    abs_step,
    bound_clock,
    con,
    live,
    to_bounds,
    well_formed,
)
from .global_clocks import remove_global_predictor, remove_global_recorder
from .pipeline import Stats, StepStats, remove_all_event_clocks, remove_clock

__all__ = [
    "ALL_CHECKSETS",
    "BAD",
    "FIRST",
    "LIVE",
    "MUTATIONS",
    "AbsStep",
    "CheckSet",
    "Lower",
    "LowerBound",
    "Pair",
    "PredState",
    "Stats",
    "StepStats",
    "Upper",
    "UpperBound",
    "abs_step",
    "bound_clock",
    "con",
    "live",
    "remove_abstract_predictor",
    "remove_abstract_recorder",
    "remove_all_event_clocks",
    "remove_clock",
    "remove_global_predictor",
    "remove_global_recorder",
    "to_bounds",
    "well_formed",
]
