"""Integer encoding of an automaton for the successor kernel."""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction

from ..model import BOTTOM, NULL, POP, PUSH, Automaton

_OPS = {"int": 0, PUSH: 1, POP: 2}


def compiled(a: Automaton) -> "Compiled":
    """Encoding of ``a``, memoised on the automaton object."""
    c = a.__dict__.get("_compiled")
    if c is None:
        c = a.__dict__["_compiled"] = Compiled(a)
    return c


class Compiled:
    """States, clocks and stack symbols numbered; guard constants scaled per word on demand."""

    def __init__(self, a: Automaton):
        self.a = a
        self.states = sorted(a.states, key=str)
        self.state_id = {s: i for i, s in enumerate(self.states)}
        self.normal = a.normal_clocks
        self.normal_id = {c: i for i, c in enumerate(self.normal)}
        self.event = a.event_clocks
        self.event_id = {c: i for i, c in enumerate(self.event)}
        gammas = sorted({t.stack for t in a.transitions if t.op != "int" and t.stack is not BOTTOM}, key=str)
        self.stack_symbols = [BOTTOM] + gammas
        self.stack_id = {g: i for i, g in enumerate(self.stack_symbols)}
        self.initial = sorted(self.state_id[q] for q in a.initial)
        self.max_constant = a.max_constant
        self._raw = defaultdict(list)
        for t in a.transitions:
            self._raw[t.symbol].append(t)
        self._unscaled: dict = {}
        self._rows: dict = {}
        self._atoms: dict = {}
        self._guards: dict = {}
        self._empty = [[] for _ in self.states]
        comps = a.acceptance
        if comps:
            self.m = len(comps)
            self.acc = [sum(1 << k for k, f in enumerate(comps) if s in f) for s in self.states]
        else:
            # no Buchi component: every infinite run is accepting
            self.m = 1
            self.acc = [1] * len(self.states)

    def cap(self, scale: int) -> int:
        return (self.max_constant + 1) * scale

    def _atom(self, atom):
        enc = self._atoms.get(atom)
        if enc is None:
            c = atom.clock
            slot = ~self.event_id[c] if c.is_event else self.normal_id[c]
            if atom.body is NULL:
                enc = (slot, 0, 0, -1, 0, 1)
            else:
                b = atom.body
                hi = -1 if b.upper is None else b.upper
                enc = (slot, b.lower, int(b.lower_op == ">"), hi, int(b.upper_op == "<"), 0)
            self._atoms[atom] = enc
        return enc

    def _symbol_transitions(self, symbol):
        enc = self._unscaled.get(symbol)
        if enc is None:
            enc = []
            for t in self._raw[symbol]:
                guard = tuple(sorted(self._atom(x) for x in t.guard))
                resets = tuple(sorted(self.normal_id[c] for c in t.resets))
                gamma = self.stack_id[t.stack] if t.op != "int" else 0
                enc.append((self.state_id[t.source], (guard, resets, _OPS[t.op], gamma, self.state_id[t.target])))
            self._unscaled[symbol] = enc
        return enc

    def _scaled_guard(self, guard, scale):
        key = (guard, scale)
        g = self._guards.get(key)
        if g is None:
            g = self._guards[key] = tuple(
                (slot, lo * scale, los, hi * scale if hi >= 0 else -1, his, isnull)
                for slot, lo, los, hi, his, isnull in guard
            )
        return g

    def row(self, symbol, scale: int = 1):
        """Encoded transitions on ``symbol`` indexed by source state id, constants times ``scale``."""
        key = (symbol, scale)
        row = self._rows.get(key)
        if row is None:
            if symbol not in self._raw:
                return self._empty
            row = [[] for _ in self.states]
            for src, (guard, resets, op, gamma, target) in self._symbol_transitions(symbol):
                row[src].append((self._scaled_guard(guard, scale), resets, op, gamma, target))
            self._rows[key] = row
        return row

    @staticmethod
    def scale_value(v, scale: int) -> int:
        if v is None:
            return -1
        s = Fraction(v) * scale
        if s.denominator != 1:
            raise AssertionError(f"value {v} is not on the 1/{scale} lattice")
        return int(s)
