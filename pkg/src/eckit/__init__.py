"""Event-clock removal for nested visibly pushdown timed automata."""

from .engine import accepts, run_prefix, step
from .model import BOTTOM, NULL, TOP, Atom, Automaton, Clock, Interval, Transition, max_constant, normalize_for_clock, validate
from .translate import remove_all_event_clocks, remove_clock
from .words import ClockKind, Symbol, Tag, TimedNestedWord, UpWord, sym

__all__ = [
    "BOTTOM",
    "NULL",
    "TOP",
    "Atom",
    "Automaton",
    "Clock",
    "ClockKind",
    "Interval",
    "Symbol",
    "Tag",
    "TimedNestedWord",
    "Transition",
    "UpWord",
    "accepts",
    "max_constant",
    "normalize_for_clock",
    "remove_all_event_clocks",
    "remove_clock",
    "run_prefix",
    "step",
    "sym",
    "validate",
]
