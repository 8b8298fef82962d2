"""Removal of an abstract recorder clock ``x^abs_p``.

The current MAP keeps, in the control state, whether ``p`` occurred on it,
which lower-bound clocks were reset at its last ``p`` (armed), and a status
per upper bound:

* ``free``: the upper-bound clock was reset at the last ``p`` of this MAP
  and nothing nested since has touched it;
* ``blocked``: a callee MAP may have reset it, so this MAP cannot use it
  before its next ``p``;
* ``live``: a caller promised a check of this bound after the current call
  returns, so the clock belongs to the caller and is never reset here; checks
  read it anyway, which is stronger than needed and implied by the caller's
  check.

Lower-bound clocks may be clobbered by callee MAPs: a callee resets one only
when it is armed, i.e. it will check the bound itself, and its check implies
the caller's. The caller's bookkeeping is pushed at each call and restored at
the matching return.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import chain, combinations, product
from typing import Hashable

from ..model import memoized, BOTTOM, INTERNAL, NULL, POP, PUSH, Atom, Automaton, Interval, Transition, normalize_for_clock, split_guard
from ..words import ClockKind
from .build import Builder, finish
from .common import bound_clock, collect_bounds, drop_clock, mentions, resolve_clock, to_bounds

FREE, BLOCKED, LIVE = "free", "blocked", "live"


@memoized
@dataclass(frozen=True)
class RecInfo:
    seen: bool
    armed: frozenset
    upper: tuple  # one status per tracked upper bound

    def __str__(self):
        armed = ",".join(sorted(str(x) for x in self.armed))
        return f"{'seen' if self.seen else 'unseen'}|{{{armed}}}|{','.join(self.upper)}"


@memoized
@dataclass(frozen=True)
class RecState:
    base: Hashable
    info: RecInfo

    def __str__(self):
        return f"({self.base}|{self.info})"


@memoized
@dataclass(frozen=True)
class Frame:
    gamma: Hashable
    info: RecInfo

    def __str__(self):
        return f"<{self.gamma}|{self.info}>"


def _subsets(items):
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


class _Construction:
    def __init__(self, a: Automaton, y):
        self.a, self.y = a, y
        lows, ups = collect_bounds(a, y)
        self.lows = [x for x in lows if not x.trivial]
        self.ups = [x for x in ups if not x.trivial]
        self.up_index = {x: i for i, x in enumerate(self.ups)}
        self.fresh = RecInfo(False, frozenset(), (FREE,) * len(self.ups))
        self.by_source = defaultdict(list)
        for t in a.transitions:
            self.by_source[t.source].append((t, *split_guard(t, y)))
        self.b = Builder()
        self.frames = defaultdict(set)
        self.poppers = defaultdict(set)

    def clocks(self):
        return {bound_clock(self.y, x) for x in self.lows} | {bound_clock(self.y, x) for x in self.ups}

    def evaluate(self, m: RecInfo, body):
        """Guard atoms realising ``x^abs_p in body`` under bookkeeping ``m``; None if impossible."""
        if body is NULL:
            return frozenset() if not m.seen else None
        if not m.seen:
            return None
        lo, up = to_bounds(body)
        atoms = set()
        if not lo.trivial:
            if lo not in m.armed:
                return None
            atoms.add(Atom(bound_clock(self.y, lo), Interval(lo.op, lo.value)))
        if not up.trivial:
            if m.upper[self.up_index[up]] == BLOCKED:
                return None
            atoms.add(Atom(bound_clock(self.y, up), Interval(">=", 0, up.op, up.value)))
        return frozenset(atoms)

    def update(self, m: RecInfo, has_p: bool):
        if not has_p:
            yield m, frozenset()
            return
        up_resets = {bound_clock(self.y, u) for u, st in zip(self.ups, m.upper) if st != LIVE}
        upper = tuple(LIVE if st == LIVE else FREE for st in m.upper)
        for armed in _subsets(self.lows):
            resets = up_resets | {bound_clock(self.y, x) for x in armed}
            yield RecInfo(True, frozenset(armed), upper), frozenset(resets)

    def call_split(self, m: RecInfo):
        options = []
        for st in m.upper:
            if st == LIVE:
                options.append([(LIVE, LIVE)])
            elif st == FREE and m.seen:
                options.append([(FREE, LIVE), (BLOCKED, FREE)])
            else:
                options.append([(st, FREE)])
        for combo in product(*options):
            pushed = RecInfo(m.seen, m.armed, tuple(c[0] for c in combo))
            inner = RecInfo(False, frozenset(), tuple(c[1] for c in combo))
            yield pushed, inner

    def run(self):
        for q0 in self.a.initial:
            self.b.add_initial(RecState(q0, self.fresh))
        self.b.drain(self.process)

    def process(self, s: RecState):
        for t, theta, body in self.by_source[s.base]:
            if t.op == POP:
                if t.stack is BOTTOM:
                    self.step(s, t, theta, body, self.fresh, BOTTOM)
                else:
                    self.poppers[t.stack].add(s)
                    for frame in list(self.frames[t.stack]):
                        self.step(s, t, theta, body, frame.info, frame)
            else:
                self.step(s, t, theta, body, s.info, None)

    def step(self, s, t, theta, body, m, popped):
        extra = self.evaluate(m, body)
        if extra is None:
            return
        has_p = self.y.prop in t.symbol.props
        guard = theta | extra
        for m2, resets in self.update(m, has_p):
            if t.op == INTERNAL or t.op == POP:
                self.b.emit(Transition(s, t.symbol, RecState(t.target, m2), guard, t.resets | resets, t.op, popped))
                continue
            for pushed, inner in self.call_split(m2):
                frame = Frame(t.stack, pushed)
                self.b.emit(Transition(s, t.symbol, RecState(t.target, inner), guard, t.resets | resets, PUSH, frame))
                self.register(frame)

    def register(self, frame: Frame):
        if frame in self.frames[frame.gamma]:
            return
        self.frames[frame.gamma].add(frame)
        for s in list(self.poppers[frame.gamma]):
            for t, theta, body in self.by_source[s.base]:
                if t.op == POP and t.stack == frame.gamma:
                    self.step(s, t, theta, body, frame.info, frame)

    def acceptance(self, states):
        return [frozenset(s for s in states if s.base in f) for f in self.a.acceptance]


def remove_abstract_recorder(a: Automaton, clock) -> Automaton:
    """Equivalent automaton without the abstract recorder clock ``clock``."""
    y = resolve_clock(a, clock, ClockKind.ABS_RECORDER)
    if not mentions(a, y):
        return drop_clock(a, y)
    a = normalize_for_clock(a, y)
    c = _Construction(a, y)
    c.run()
    return finish(a, c.b.initial, c.b.transitions, (a.clocks - {y}) | c.clocks(), c.acceptance)


def tracked_bounds(a: Automaton, clock) -> tuple[int, int]:
    """Non-trivial ``(L, U)`` bound counts the recorder removal allocates clocks for."""
    y = resolve_clock(a, clock, ClockKind.ABS_RECORDER)
    lows, ups = collect_bounds(normalize_for_clock(a, y), y)
    return sum(not x.trivial for x in lows), sum(not x.trivial for x in ups)
