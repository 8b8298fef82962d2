"""Nested visibly pushdown timed automata with normal and event clocks."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from functools import cached_property
from operator import attrgetter
from typing import Hashable, Iterable, Optional, Union

from .words import ClockKind, Symbol, Tag

def memoized(cls):
    """Cache ``hash`` and ``str`` of a frozen dataclass; its instances are nested deeply in translations."""
    key = attrgetter(*(f.name for f in fields(cls)))
    plain_str = cls.__str__

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = self.__dict__["_hash"] = hash(key(self))
            return h

    def __str__(self):
        d = self.__dict__
        s = d.get("_str")
        if s is None:
            s = d["_str"] = plain_str(self)
        return s

    def __getstate__(self):
        # string hashes are salted per process
        return {k: v for k, v in self.__dict__.items() if k not in ("_hash", "_str")}

    cls.__hash__ = __hash__
    cls.__str__ = __str__
    cls.__getstate__ = __getstate__
    return cls


LOWER_OPS = (">", ">=")
UPPER_OPS = ("<", "<=")


@dataclass(frozen=True)
class Clock:
    name: str
    kind: ClockKind = ClockKind.NORMAL
    prop: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ClockKind(self.kind))
        if self.kind.is_event and self.prop is None:
            raise ValueError(f"event clock {self.name} needs a proposition")
        if not self.kind.is_event and self.prop is not None:
            raise ValueError(f"normal clock {self.name} cannot carry a proposition")

    @property
    def is_event(self) -> bool:
        return self.kind.is_event

    def __str__(self):
        return self.name


class NullCheck:
    """The atomic constraint ``clock = NULL``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NULL"

    def __reduce__(self):
        return (NullCheck, ())


NULL = NullCheck()


@dataclass(frozen=True)
class Interval:
    lower_op: str = ">="
    lower: int = 0
    upper_op: str = "<"
    upper: Optional[int] = None  # None is +infinity

    def __post_init__(self):
        if self.lower_op not in LOWER_OPS or self.upper_op not in UPPER_OPS:
            raise ValueError(f"bad interval operators {self.lower_op!r}, {self.upper_op!r}")
        if self.lower < 0 or (self.upper is not None and self.upper < 0):
            raise ValueError("interval constants must be natural numbers")

    def is_empty(self) -> bool:
        if self.upper is None:
            return False
        if self.lower != self.upper:
            return self.lower > self.upper
        return self.lower_op == ">" or self.upper_op == "<"

    def contains(self, v) -> bool:
        if v < self.lower or (v == self.lower and self.lower_op == ">"):
            return False
        if self.upper is None:
            return True
        return v < self.upper or (v == self.upper and self.upper_op == "<=")

    def intersect(self, other: "Interval") -> "Interval":
        lo = max((self.lower, self.lower_op == ">"), (other.lower, other.lower_op == ">"))
        ups = [(u, op == "<") for u, op in ((self.upper, self.upper_op), (other.upper, other.upper_op)) if u is not None]
        if not ups:
            return Interval(">" if lo[1] else ">=", lo[0])
        hi = min(ups, key=lambda x: (x[0], not x[1]))
        return Interval(">" if lo[1] else ">=", lo[0], "<" if hi[1] else "<=", hi[0])

    def constants(self) -> list[int]:
        return [self.lower] if self.upper is None else [self.lower, self.upper]

    def __str__(self):
        left = "(" if self.lower_op == ">" else "["
        right = ")" if self.upper is None or self.upper_op == "<" else "]"
        return f"{left}{self.lower},{'inf' if self.upper is None else self.upper}{right}"


TOP = Interval()  # [0, inf)

Body = Union[Interval, NullCheck]


@memoized
@dataclass(frozen=True)
class Atom:
    clock: Clock
    body: Body

    def holds(self, value) -> bool:
        if self.body is NULL:
            return value is None
        return value is not None and self.body.contains(value)

    def __str__(self):
        return f"{self.clock}=NULL" if self.body is NULL else f"{self.clock}in{self.body}"


class Bottom:
    """The stack-bottom symbol; never pushed, never removed."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "⊤"

    def __reduce__(self):
        return (Bottom, ())


BOTTOM = Bottom()

PUSH, POP, INTERNAL = "push", "pop", "int"
_OP_FOR_TAG = {Tag.CALL: PUSH, Tag.RET: POP, Tag.INT: INTERNAL}


@memoized
@dataclass(frozen=True)
class Transition:
    source: Hashable
    symbol: Symbol
    target: Hashable
    guard: frozenset = frozenset()
    resets: frozenset = frozenset()
    op: str = ""
    stack: Hashable = None

    def __post_init__(self):
        if not self.op:
            object.__setattr__(self, "op", _OP_FOR_TAG[self.symbol.tag])
        if not isinstance(self.guard, frozenset):
            object.__setattr__(self, "guard", frozenset(self.guard))
        if not isinstance(self.resets, frozenset):
            object.__setattr__(self, "resets", frozenset(self.resets))

    def atoms_on(self, clock: Clock) -> list[Atom]:
        return [a for a in self.guard if a.clock == clock]


@dataclass(frozen=True)
class Automaton:
    props: frozenset
    states: frozenset
    initial: frozenset
    clocks: frozenset
    stack_alphabet: frozenset
    transitions: tuple
    acceptance: tuple = ()

    def __post_init__(self):
        for name in ("props", "states", "initial", "clocks", "stack_alphabet"):
            v = getattr(self, name)
            if not isinstance(v, frozenset):
                object.__setattr__(self, name, frozenset(v))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "acceptance", tuple(frozenset(f) for f in self.acceptance))

    @cached_property
    def max_constant(self) -> int:
        return max_constant(self)

    @property
    def event_clocks(self) -> list[Clock]:
        return sorted((c for c in self.clocks if c.is_event), key=lambda c: c.name)

    @property
    def normal_clocks(self) -> list[Clock]:
        return sorted((c for c in self.clocks if not c.is_event), key=lambda c: c.name)

    def clock(self, name: str) -> Clock:
        for c in self.clocks:
            if c.name == name:
                return c
        raise KeyError(name)

    def with_(self, **changes) -> "Automaton":
        return replace(self, **changes)


def max_constant(a: Automaton) -> int:
    best = 0
    for t in a.transitions:
        for atom in t.guard:
            if atom.body is not NULL:
                best = max(best, *atom.body.constants())
    return best


def validate(a: Automaton) -> list[str]:
    out = []
    names = {}
    for c in a.clocks:
        if c.name in names:
            out.append(f"clock name {c.name!r} declared twice")
        names[c.name] = c
        if c.is_event and c.prop not in a.props:
            out.append(f"clock {c.name}: proposition {c.prop!r} not in alphabet")
    if not a.initial <= a.states:
        out.append(f"initial states {sorted(map(str, a.initial - a.states))} not in Q")
    for k, comp in enumerate(a.acceptance):
        if not comp <= a.states:
            out.append(f"acceptance component {k} mentions unknown states")
    for k, t in enumerate(a.transitions):
        where = f"transition {k} ({t.source} -{t.symbol}-> {t.target})"
        if t.source not in a.states or t.target not in a.states:
            out.append(f"{where}: unknown state")
        if not t.symbol.props <= a.props:
            out.append(f"{where}: symbol uses propositions outside the alphabet")
        if t.op != _OP_FOR_TAG[t.symbol.tag]:
            out.append(f"{where}: visibly-pushdown violation ({t.op} on {t.symbol.tag.value} symbol)")
        if t.op == PUSH and (t.stack is BOTTOM or t.stack not in a.stack_alphabet):
            out.append(f"{where}: pushes {t.stack!r} which is not a stack symbol")
        if t.op == POP and t.stack is not BOTTOM and t.stack not in a.stack_alphabet:
            out.append(f"{where}: pops unknown stack symbol {t.stack!r}")
        if t.op == INTERNAL and t.stack is not None:
            out.append(f"{where}: internal transition carries a stack symbol")
        for c in t.resets:
            if c.is_event:
                out.append(f"{where}: reset violation, event clock {c.name} cannot be reset")
            elif c not in a.clocks:
                out.append(f"{where}: resets undeclared clock {c.name}")
        for atom in t.guard:
            if atom.clock not in a.clocks:
                out.append(f"{where}: constraint on undeclared clock {atom.clock.name}")
            if atom.body is NULL and not atom.clock.is_event:
                out.append(f"{where}: NULL check on normal clock {atom.clock.name}")
            if atom.body is not NULL and atom.body.is_empty():
                out.append(f"{where}: empty interval {atom.body} on {atom.clock.name}")
    return out


def merge_atoms(atoms: Iterable[Atom]) -> Optional[Body]:
    """Conjunction of atoms on one clock; ``None`` when unsatisfiable."""
    body: Optional[Body] = None
    for a in atoms:
        if body is None:
            body = a.body
        elif body is NULL or a.body is NULL:
            if body is not a.body:
                return None
        else:
            body = body.intersect(a.body)
            if body.is_empty():
                return None
    return body


def normalize_for_clock(a: Automaton, y: Clock) -> Automaton:
    """Rewrite ``a`` so every transition carries exactly one atom on ``y``."""
    out = []
    for t in a.transitions:
        mine = t.atoms_on(y)
        rest = t.guard - set(mine)
        if not mine:
            out.append(replace(t, guard=rest | {Atom(y, TOP)}))
            out.append(replace(t, guard=rest | {Atom(y, NULL)}))
            continue
        body = merge_atoms(mine)
        if body is None:
            continue
        out.append(replace(t, guard=rest | {Atom(y, body)}))
    return replace(a, transitions=tuple(out))


def split_guard(t: Transition, y: Clock) -> tuple[frozenset, Body]:
    """``(theta, I)`` for a transition normalized on ``y``."""
    mine = t.atoms_on(y)
    if len(mine) != 1:
        raise ValueError(f"transition {t.source}->{t.target} is not normalized for {y.name}")
    return t.guard - {mine[0]}, mine[0].body
