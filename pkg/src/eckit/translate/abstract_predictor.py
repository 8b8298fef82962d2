"""Removal of an abstract predictor clock ``y^abs_p``.

Each translated state is ``(q, O, K, b)``: the source state, the pending
obligations of the current MAP, the check set guessed for the current
position, and the guessed truth of ``p`` at the current position. The bit
is verified by every outgoing transition and feeds the extra Buchi
component that forces pending predictions on the infinite MAP to be met.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Hashable

from ..model import memoized, BOTTOM, INTERNAL, NULL, POP, PUSH, Automaton, Clock, Transition, normalize_for_clock, split_guard
from ..words import ClockKind, Tag
from .build import Builder, finish
from .common import (
    ALL_CHECKSETS,
    LIVE,
    CheckSet,
    Upper,
    abs_step,
    bound_clock,
    collect_bounds,
    con,
    drop_clock,
    format_obligations,
    live,
    mentions,
    resolve_clock,
)

BOOLS = (False, True)
EMPTY = frozenset()


@memoized
@dataclass(frozen=True)
class PredState:
    base: Hashable
    obligations: frozenset
    check: CheckSet
    fulfilled: bool

    def __str__(self):
        return f"({self.base}|{format_obligations(self.obligations)}|{self.check}|{'p' if self.fulfilled else '-'})"


@memoized
@dataclass(frozen=True)
class Pair:
    gamma: Hashable
    obligations: frozenset
    check: CheckSet

    def __str__(self):
        return f"<{self.gamma}|{format_obligations(self.obligations)}|{self.check}>"


class _Bad:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "bad"

    def __reduce__(self):
        return (_Bad, ())


BAD = _Bad()


class _Construction:
    def __init__(self, a: Automaton, y: Clock, mutations: frozenset):
        self.a = a
        self.y = y
        self.p = y.prop
        self.mut = mutations
        self.naive = "prev_symbol_fulfilled" in mutations
        self.by_source = defaultdict(list)
        for t in a.transitions:
            theta, body = split_guard(t, y)
            self.by_source[t.source].append((t, theta, body))
        self.b = Builder()
        self.pairs = defaultdict(set)  # check set -> pushed pairs
        self.ret_states = defaultdict(set)  # check set -> states waiting to pop

    def targets(self, q, obs, checks, has_p):
        """Successor states over the fulfilment guess."""
        for k in checks:
            if self.naive:
                yield PredState(q, obs, k, has_p)
            else:
                for b in BOOLS:
                    yield PredState(q, obs, k, b)

    def emit(self, s, t, guard, resets, stack, succ):
        for s2 in succ:
            self.b.emit(Transition(s, t.symbol, s2, guard, resets, t.op, stack))

    def run(self):
        for q0 in self.a.initial:
            for k in ALL_CHECKSETS:
                for b in ((False,) if self.naive else BOOLS):
                    self.b.add_initial(PredState(q0, EMPTY, k, b))
        self.b.drain(self.process)

    def process(self, s: PredState):
        k = s.check
        if k.tag is Tag.RET and not s.obligations:
            self.ret_states[k].add(s)
            for pair in list(self.pairs[k]):
                self.pop_pair(s, pair)
        for t, theta, body in self.by_source[s.base]:
            a = t.symbol
            if a.tag is not k.tag:
                continue
            has_p = self.p in a.props
            if not self.naive and has_p != s.fulfilled:
                continue
            if t.op == PUSH:
                self.push(s, t, theta, body, has_p)
            elif t.op == INTERNAL:
                self.internal(s, t, theta, body, has_p)
            elif t.stack is BOTTOM and not s.obligations:
                self.pop_bottom(s, t, theta, body, has_p)

    def push(self, s, t, theta, body, has_p):
        obs, k, q2 = s.obligations, s.check, t.target
        guard = theta | con(obs, t.symbol, self.y)
        r = abs_step(obs, k, t.symbol, body, self.y, self.mut)
        if r is not None:
            k_ret = CheckSet(Tag.RET, r.ev, r.pinf)
            pair = Pair(t.stack, r.obligations, k_ret)
            resets = t.resets | r.resets
            # next position is the matching return
            self.emit(s, t, guard, resets, pair, self.targets(q2, EMPTY, [k_ret], has_p))
            # next position starts the callee MAP
            inherited = frozenset(Upper(LIVE, o.op, o.value) for o in r.obligations if isinstance(o, Upper))
            pinfs = BOOLS if "drop_pinf_propagation" in self.mut else (False,)
            checks = [CheckSet(tag, ev, pi) for tag in (Tag.CALL, Tag.INT) for ev in BOOLS for pi in pinfs]
            self.emit(s, t, guard, resets, pair, self.targets(q2, inherited, checks, has_p))
            self.register(pair)
        if (
            "drop_bad" not in self.mut
            and body is NULL
            and k.ev == has_p
            and k.pinf
            and (has_p or not obs)
        ):
            checks = [CheckSet(tag, ev, True) for tag in (Tag.CALL, Tag.INT) for ev in BOOLS]
            self.emit(s, t, guard, t.resets, BAD, self.targets(q2, EMPTY, checks, has_p))

    def internal(self, s, t, theta, body, has_p):
        obs, k, q2 = s.obligations, s.check, t.target
        guard = theta | con(obs, t.symbol, self.y)
        if body is NULL and k.ev == has_p and (has_p or obs == live(obs)):
            checks = [CheckSet(Tag.RET, ev, pi) for ev in BOOLS for pi in BOOLS]
            self.emit(s, t, guard, t.resets, None, self.targets(q2, EMPTY, checks, has_p))
        r = abs_step(obs, k, t.symbol, body, self.y, self.mut)
        if r is not None:
            checks = [CheckSet(tag, r.ev, r.pinf) for tag in (Tag.CALL, Tag.INT)]
            self.emit(s, t, guard, t.resets | r.resets, None, self.targets(q2, r.obligations, checks, has_p))

    def register(self, pair: Pair):
        if pair in self.pairs[pair.check]:
            return
        self.pairs[pair.check].add(pair)
        for s in list(self.ret_states[pair.check]):
            self.pop_pair(s, pair)

    def pop_pair(self, s: PredState, pair: Pair):
        k = s.check
        for t, theta, body in self.by_source[s.base]:
            if t.op != POP or t.stack is BOTTOM or t.stack != pair.gamma:
                continue
            has_p = self.p in t.symbol.props
            if not self.naive and has_p != s.fulfilled:
                continue
            o_ret = pair.obligations
            guard = theta | con(o_ret, t.symbol, self.y)
            r = abs_step(o_ret, k, t.symbol, body, self.y, self.mut)
            if r is not None:
                checks = [CheckSet(tag, r.ev, r.pinf) for tag in (Tag.CALL, Tag.INT)]
                self.emit(s, t, guard, t.resets | r.resets, pair, self.targets(t.target, r.obligations, checks, has_p))
            if body is NULL and k.ev == has_p and (has_p or o_ret == live(o_ret)):
                checks = [CheckSet(Tag.RET, ev, pi) for ev in BOOLS for pi in BOOLS]
                self.emit(s, t, guard, t.resets, pair, self.targets(t.target, EMPTY, checks, has_p))

    def pop_bottom(self, s, t, theta, body, has_p):
        k = s.check
        if not k.pinf:
            return
        r = abs_step(EMPTY, k, t.symbol, body, self.y, self.mut)
        if r is not None:
            checks = [CheckSet(tag, r.ev, True) for tag in (Tag.CALL, Tag.INT)]
            self.emit(s, t, theta, t.resets | r.resets, BOTTOM, self.targets(t.target, r.obligations, checks, has_p))
        if body is NULL and k.ev == has_p:
            checks = [CheckSet(Tag.RET, ev, True) for ev in BOOLS]
            self.emit(s, t, theta, t.resets, BOTTOM, self.targets(t.target, EMPTY, checks, has_p))

    def acceptance(self, states):
        comps = [frozenset(s for s in states if s.base in f) for f in self.a.acceptance]
        if "drop_fulfilled" in self.mut:
            extra = frozenset(s for s in states if s.check.pinf and not s.check.ev)
        else:
            extra = frozenset(s for s in states if s.check.pinf and (not s.check.ev or s.fulfilled))
        comps.append(extra)
        return comps


def remove_abstract_predictor(a: Automaton, clock, mutations: frozenset = frozenset()) -> Automaton:
    """Equivalent automaton without the abstract predictor clock ``clock`` (a Clock, name or proposition)."""
    y = resolve_clock(a, clock, ClockKind.ABS_PREDICTOR)
    if not mentions(a, y):
        return drop_clock(a, y)
    a = normalize_for_clock(a, y)
    lows, ups = collect_bounds(a, y)
    new_clocks = {bound_clock(y, b) for b in lows} | {bound_clock(y, b) for b in ups}
    c = _Construction(a, y, frozenset(mutations))
    c.run()
    return finish(a, c.b.initial, c.b.transitions, (a.clocks - {y}) | new_clocks, c.acceptance)


def bound_counts(a: Automaton, y: Clock) -> tuple[int, int]:
    """``(L, U)``: distinct lower and upper bounds on ``y`` after normalization."""
    lows, ups = collect_bounds(normalize_for_clock(a, y), y)
    return len(lows), len(ups)
