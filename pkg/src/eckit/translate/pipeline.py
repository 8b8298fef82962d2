"""Single-clock removal steps and the full event-clock elimination pipeline."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from ..model import Automaton, Clock, NULL, max_constant, normalize_for_clock
from ..words import ClockKind
from .abstract_predictor import remove_abstract_predictor
from .abstract_recorder import remove_abstract_recorder
from .common import collect_bounds, mentions
from .global_clocks import remove_global_predictor, remove_global_recorder

ORDER = (
    ClockKind.GLOBAL_RECORDER,
    ClockKind.GLOBAL_PREDICTOR,
    ClockKind.ABS_RECORDER,
    ClockKind.ABS_PREDICTOR,
)


@dataclass
class StepStats:
    clock: str
    kind: str
    states_in: int
    states_out: int
    clocks_in: int
    clocks_out: int
    lower_bounds: int
    upper_bounds: int
    state_bound: int
    expected_clocks: int

    @property
    def states_ok(self) -> bool:
        return self.states_out <= self.state_bound

    @property
    def clocks_ok(self) -> bool:
        return self.clocks_out == self.expected_clocks


@dataclass
class Stats:
    n_states: int
    n_clocks: int
    n_event_atoms: int
    out_states: int
    out_clocks: int
    max_constant_in: int
    max_constant_out: int
    steps: list = field(default_factory=list)

    @property
    def blowup(self) -> float:
        return self.out_states / self.n_states if self.n_states else 1.0

    @property
    def bounds_ok(self) -> bool:
        return all(s.states_ok and s.clocks_ok for s in self.steps)

    @property
    def constant_ok(self) -> bool:
        return self.max_constant_in == self.max_constant_out

    def to_dict(self) -> dict:
        d = asdict(self)
        d["steps"] = [dict(asdict(s), states_ok=s.states_ok, clocks_ok=s.clocks_ok) for s in self.steps]
        d.update(blowup=self.blowup, bounds_ok=self.bounds_ok, constant_ok=self.constant_ok)
        return d


def _bounds(a: Automaton, y: Clock) -> tuple[int, int, int, int]:
    lows, ups = collect_bounds(normalize_for_clock(a, y), y)
    return (
        len(lows),
        len(ups),
        sum(not x.trivial for x in lows),
        sum(not x.trivial for x in ups),
    )


def remove_clock(a: Automaton, y: Clock, mutations: frozenset = frozenset()) -> tuple[Automaton, StepStats]:
    """Remove one event clock and report the step's size bounds."""
    n, c = len(a.states), len(a.clocks)
    if not mentions(a, y):
        lo = up = 0
        bound, expected = n, c - 1
        out = _dispatch(a, y, mutations)
    else:
        lo_all, up_all, lo_nt, up_nt = _bounds(a, y)
        kind = y.kind
        if kind is ClockKind.ABS_PREDICTOR:
            lo, up = lo_all, up_all
            bound = n * 2**lo * 3**up * 6 * 2
        elif kind is ClockKind.ABS_RECORDER:
            lo, up = lo_nt, up_nt
            bound = n * 2 * 2**lo * 3**up
        elif kind is ClockKind.GLOBAL_PREDICTOR:
            lo, up = lo_all, up_all
            bound = n * 2**lo * 2**up * 2 * 2
        else:
            lo, up = 0, 1
            bound = n * 2
        expected = c - 1 + lo + up
        out = _dispatch(a, y, mutations)
    return out, StepStats(y.name, y.kind.value, n, len(out.states), c, len(out.clocks), lo, up, bound, expected)


def _dispatch(a: Automaton, y: Clock, mutations: frozenset) -> Automaton:
    if y.kind is ClockKind.ABS_PREDICTOR:
        return remove_abstract_predictor(a, y, mutations)
    if y.kind is ClockKind.ABS_RECORDER:
        return remove_abstract_recorder(a, y)
    if y.kind is ClockKind.GLOBAL_PREDICTOR:
        return remove_global_predictor(a, y)
    if y.kind is ClockKind.GLOBAL_RECORDER:
        return remove_global_recorder(a, y)
    raise ValueError(f"{y.name} is not an event clock")


def event_atom_count(a: Automaton) -> int:
    return len({atom for t in a.transitions for atom in t.guard if atom.clock.is_event})


def remove_all_event_clocks(a: Automaton, mutations: frozenset = frozenset()) -> tuple[Automaton, Stats]:
    stats = Stats(
        n_states=len(a.states),
        n_clocks=len(a.clocks),
        n_event_atoms=event_atom_count(a),
        out_states=0,
        out_clocks=0,
        max_constant_in=max_constant(a),
        max_constant_out=0,
    )
    cur = a
    for kind in ORDER:
        for y in sorted((c for c in a.clocks if c.kind is kind), key=lambda c: c.name):
            cur, step = remove_clock(cur, y, mutations)
            stats.steps.append(step)
    stats.out_states = len(cur.states)
    stats.out_clocks = len(cur.clocks)
    stats.max_constant_out = max_constant(cur)
    return cur, stats
