"""Reference operational semantics over exact rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Optional, Sequence

from ..model import BOTTOM, NULL, POP, PUSH, Automaton, Clock
from ..words import Symbol, TimedNestedWord, valuation_columns


@dataclass(frozen=True)
class Configuration:
    state: Hashable
    stack: tuple  # bottom marker first
    valuation: tuple  # (clock name, value) pairs sorted by name
    position: int = 0
    time: Fraction = Fraction(0)

    def value(self, clock) -> Fraction:
        name = clock.name if isinstance(clock, Clock) else clock
        return dict(self.valuation)[name]

    def __str__(self):
        vals = ",".join(f"{k}={v}" for k, v in self.valuation)
        stack = "".join(str(g) for g in self.stack)
        return f"({self.state}, {stack}, {{{vals}}})"


@dataclass(frozen=True)
class TruncatedConfiguration:
    state: Hashable
    stack: tuple
    valuation: tuple
    truncated: frozenset  # names of clocks whose value was cut


def initial_configurations(a: Automaton) -> set:
    zero = tuple((c.name, Fraction(0)) for c in a.normal_clocks)
    return {Configuration(q, (BOTTOM,), zero) for q in a.initial}


def _needed_event_clocks(a: Automaton) -> set:
    return {atom.clock for t in a.transitions for atom in t.guard if atom.clock.is_event}


def _event_lookup(a: Automaton, ev: Optional[Mapping]) -> dict:
    ev = dict(ev or {})
    out = {}
    for c in _needed_event_clocks(a):
        for key in (c, c.name):
            if key in ev:
                v = ev[key]
                out[c] = None if v is None or v is NULL else Fraction(v)
                break
        else:
            raise ValueError(f"no value supplied for event clock {c.name}")
    return out


def step(a: Automaton, c: Configuration, symbol: Symbol, t, ev: Optional[Mapping] = None) -> set:
    """Successors of ``c`` on reading ``symbol`` at time ``t``."""
    t = Fraction(t)
    if t < c.time:
        raise ValueError(f"time {t} precedes the configuration's time {c.time}")
    evv = _event_lookup(a, ev)
    delta = t - c.time
    advanced = {k: v + delta for k, v in c.valuation}
    out = set()
    for tr in a.transitions:
        if tr.source != c.state or tr.symbol != symbol:
            continue
        if not all(atom.holds(evv[atom.clock] if atom.clock.is_event else advanced[atom.clock.name]) for atom in tr.guard):
            continue
        if tr.op == POP:
            top = c.stack[-1]
            if tr.stack is BOTTOM:
                if len(c.stack) != 1:
                    continue
                stack = c.stack
            else:
                if len(c.stack) == 1 or top != tr.stack:
                    continue
                stack = c.stack[:-1]
        elif tr.op == PUSH:
            stack = c.stack + (tr.stack,)
        else:
            stack = c.stack
        vals = dict(advanced)
        for r in tr.resets:
            vals[r.name] = Fraction(0)
        out.add(Configuration(tr.target, stack, tuple(sorted(vals.items())), c.position + 1, t))
    return out


def run_prefix(a: Automaton, w: TimedNestedWord, ev: Optional[Sequence[Mapping]] = None) -> set:
    """Every configuration reachable after reading the finite word ``w``.

    Without ``ev``, event-clock values are computed on ``w`` itself.
    """
    if ev is None:
        clocks = a.event_clocks
        cols = valuation_columns(w, clocks)
        ev = [{c: cols[k][i] for k, c in enumerate(clocks)} for i in range(len(w))]
    configs = initial_configurations(a)
    for i, (s, t) in enumerate(w.letters):
        nxt = set()
        for c in configs:
            nxt |= step(a, c, s, t, ev[i])
        configs = nxt
    return configs


def truncate(a: Automaton, c: Configuration) -> TruncatedConfiguration:
    cap = a.max_constant + 1
    cut = frozenset(k for k, v in c.valuation if v > cap)
    vals = tuple((k, min(v, Fraction(cap))) for k, v in c.valuation)
    return TruncatedConfiguration(c.state, c.stack, vals, cut)
