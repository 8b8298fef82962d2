"""Removal of global recorder and global predictor clocks."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Hashable

from ..model import memoized, NULL, Atom, Automaton, Clock, Transition, normalize_for_clock, split_guard
from ..words import ClockKind
from .build import Builder, finish
from .common import (
    FIRST,
    Lower,
    Upper,
    bound_clock,
    collect_bounds,
    con,
    drop_clock,
    format_obligations,
    mentions,
    resolve_clock,
    to_bounds,
)


@memoized
@dataclass(frozen=True)
class SeenState:
    base: Hashable
    seen: bool

    def __str__(self):
        return f"({self.base}|{'seen' if self.seen else 'unseen'})"


def remove_global_recorder(a: Automaton, clock) -> Automaton:
    """Replace ``x_p`` by one normal clock reset on every ``p`` plus a seen-``p`` bit."""
    y = resolve_clock(a, clock, ClockKind.GLOBAL_RECORDER)
    if not mentions(a, y):
        return drop_clock(a, y)
    a = normalize_for_clock(a, y)
    z = Clock(f"z[{y.name}]")
    by_source = defaultdict(list)
    for t in a.transitions:
        by_source[t.source].append((t, *split_guard(t, y)))
    b = Builder()

    def process(s: SeenState):
        for t, theta, body in by_source[s.base]:
            has_p = y.prop in t.symbol.props
            if body is NULL:
                if s.seen:
                    continue
                guard = theta
            else:
                if not s.seen:
                    continue
                guard = theta | {Atom(z, body)}
            resets = t.resets | {z} if has_p else t.resets
            b.emit(Transition(s, t.symbol, SeenState(t.target, s.seen or has_p), guard, resets, t.op, t.stack))

    for q0 in a.initial:
        b.add_initial(SeenState(q0, False))
    b.drain(process)

    def acceptance(states):
        return [frozenset(s for s in states if s.base in f) for f in a.acceptance]

    return finish(a, b.initial, b.transitions, (a.clocks - {y}) | {z}, acceptance)


@memoized
@dataclass(frozen=True)
class GlobalPredState:
    base: Hashable
    obligations: frozenset
    forbid: bool  # a NULL prediction was made: p may never occur again
    fulfilled: bool  # p was just read

    def __str__(self):
        flags = ("noP" if self.forbid else "") + ("|p" if self.fulfilled else "|-")
        return f"({self.base}|{format_obligations(self.obligations)}|{flags})"


def remove_global_predictor(a: Automaton, clock) -> Automaton:
    """Replace ``y_p`` by obligation bookkeeping kept in the control state."""
    y = resolve_clock(a, clock, ClockKind.GLOBAL_PREDICTOR)
    if not mentions(a, y):
        return drop_clock(a, y)
    a = normalize_for_clock(a, y)
    lows, ups = collect_bounds(a, y)
    new_clocks = {bound_clock(y, x) for x in lows} | {bound_clock(y, x) for x in ups}
    by_source = defaultdict(list)
    for t in a.transitions:
        by_source[t.source].append((t, *split_guard(t, y)))
    b = Builder()

    def process(s: GlobalPredState):
        for t, theta, body in by_source[s.base]:
            has_p = y.prop in t.symbol.props
            if s.forbid and (has_p or body is not NULL):
                continue
            guard = theta | con(s.obligations, t.symbol, y)
            rest = frozenset() if has_p else s.obligations
            if body is NULL:
                if rest:
                    continue
                nxt, forbid, resets = frozenset(), True, t.resets
            else:
                lo, up = to_bounds(body)
                first = Upper(FIRST, up.op, up.value)
                nxt = rest | {Lower(lo.op, lo.value), first}
                resets = t.resets | {bound_clock(y, lo)}
                if first not in rest:
                    resets = resets | {bound_clock(y, up)}
                forbid = False
            b.emit(Transition(s, t.symbol, GlobalPredState(t.target, nxt, forbid, has_p), guard, resets, t.op, t.stack))

    for q0 in a.initial:
        b.add_initial(GlobalPredState(q0, frozenset(), False, False))
    b.drain(process)

    def acceptance(states):
        comps = [frozenset(s for s in states if s.base in f) for f in a.acceptance]
        comps.append(frozenset(s for s in states if not s.obligations or s.fulfilled))
        return comps

    return finish(a, b.initial, b.transitions, (a.clocks - {y}) | new_clocks, acceptance)
