"""Obligations, check sets and the abstract-step predicate shared by the removals."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, NamedTuple, Optional

from ..model import NULL, Atom, Automaton, Body, Clock, Interval
from ..words import Symbol, Tag

FIRST, LIVE = "first", "live"

MUTATIONS = frozenset(
    {
        "drop_fulfilled",  # extra Buchi component ignores the fulfilment bit
        "prev_symbol_fulfilled",  # fulfilment bit means "p was just read"
        "skip_lower_reset",  # lower-bound clocks are never reset
        "upper_rereset",  # upper-bound clocks are reset on every prediction
        "drop_pinf_propagation",  # callee MAPs may claim p_inf
        "drop_bad",  # no branch for calls without matching return
    }
)


@dataclass(frozen=True)
class LowerBound:
    op: str
    value: int

    def __str__(self):
        return f"{self.op}{self.value}"

    def sort_key(self):
        return (self.value, self.op)

    def holds(self, v) -> bool:
        return v > self.value if self.op == ">" else v >= self.value

    @property
    def trivial(self) -> bool:
        return self.op == ">=" and self.value == 0


@dataclass(frozen=True)
class UpperBound:
    op: str
    value: Optional[int]

    def __str__(self):
        return f"{self.op}{'inf' if self.value is None else self.value}"

    def sort_key(self):
        return (self.value is None, self.value or 0, self.op)

    def holds(self, v) -> bool:
        if self.value is None:
            return True
        return v < self.value if self.op == "<" else v <= self.value

    @property
    def trivial(self) -> bool:
        return self.value is None


@dataclass(frozen=True)
class Lower:
    """Pending lower-bound obligation."""

    op: str
    value: int

    @property
    def bound(self) -> LowerBound:
        return LowerBound(self.op, self.value)

    def __str__(self):
        return f"{self.op}{self.value}"


@dataclass(frozen=True)
class Upper:
    """Pending upper-bound obligation, ``first`` (own MAP) or ``live`` (inherited from a caller)."""

    flag: str
    op: str
    value: Optional[int]

    @property
    def bound(self) -> UpperBound:
        return UpperBound(self.op, self.value)

    def __str__(self):
        return f"({self.flag},{self.op}{'inf' if self.value is None else self.value})"


def obligation_key(o):
    if isinstance(o, Lower):
        return (0, o.value, o.op, "")
    return (1, o.value is None, o.value or 0, o.op, o.flag)


def format_obligations(obs: Iterable) -> str:
    return "{" + ",".join(str(o) for o in sorted(obs, key=obligation_key)) + "}"


def well_formed(obs: frozenset) -> bool:
    """At most one flag per upper bound."""
    seen = set()
    for o in obs:
        if isinstance(o, Upper):
            if o.bound in seen:
                return False
            seen.add(o.bound)
    return True


@dataclass(frozen=True)
class CheckSet:
    tag: Tag
    ev: bool  # the MAP visiting this position reaches p at or after it
    pinf: bool

    def __str__(self):
        parts = [self.tag.value]
        if self.ev:
            parts.append("Fp")
        if self.pinf:
            parts.append("pinf")
        return "{" + ",".join(parts) + "}"


ALL_CHECKSETS = tuple(CheckSet(t, e, f) for t in Tag for e in (False, True) for f in (False, True))


def to_bounds(body: Body) -> tuple[LowerBound, UpperBound]:
    if body is NULL:
        raise ValueError("NULL check has no bound decomposition")
    return LowerBound(body.lower_op, body.lower), UpperBound(body.upper_op, body.upper)


def live(obs: frozenset) -> frozenset:
    return frozenset(o for o in obs if isinstance(o, Upper) and o.flag == LIVE)


def bound_clock(y: Clock, bound) -> Clock:
    return Clock(f"z[{y.name}{bound}]")


def con(obs: frozenset, a: Symbol, y: Clock) -> frozenset:
    """Clock constraint checking every obligation of ``obs`` when ``a`` carries p."""
    if not obs or y.prop not in a.props:
        return frozenset()
    atoms = set()
    for o in obs:
        if isinstance(o, Lower):
            atoms.add(Atom(bound_clock(y, o.bound), Interval(o.op, o.value)))
        elif o.value is not None:
            atoms.add(Atom(bound_clock(y, o.bound), Interval(">=", 0, o.op, o.value)))
        else:
            # z < inf: always true, kept for a uniform shape
            atoms.add(Atom(bound_clock(y, o.bound), Interval()))
    return frozenset(atoms)


class AbsStep(NamedTuple):
    resets: frozenset
    obligations: frozenset
    pinf: bool
    ev: bool


def abs_step(
    obs: frozenset,
    k: CheckSet,
    a: Symbol,
    body: Body,
    y: Clock,
    mutations: frozenset = frozenset(),
) -> Optional[AbsStep]:
    """Successor bookkeeping along the current MAP, or ``None`` when no successor exists.

    The tag of the successor check set is left to the caller.
    """
    if k.tag is not a.tag:
        return None
    has_p = y.prop in a.props
    ev_next = body is not NULL
    if k.ev != (has_p or ev_next):
        return None
    if body is NULL:
        if not has_p and obs != live(obs):
            return None
        return AbsStep(frozenset(), live(obs), k.pinf, False)
    lo, up = to_bounds(body)
    rest = live(obs) if has_p else obs
    flag = LIVE if Upper(LIVE, up.op, up.value) in rest else FIRST
    nxt = rest | {Lower(lo.op, lo.value), Upper(flag, up.op, up.value)}
    resets = set()
    if "skip_lower_reset" not in mutations:
        resets.add(bound_clock(y, lo))
    present = any(isinstance(o, Upper) and o.bound == up for o in obs)
    if (
        not present
        or (has_p and Upper(FIRST, up.op, up.value) in obs)
        or "upper_rereset" in mutations
    ):
        resets.add(bound_clock(y, up))
    return AbsStep(frozenset(resets), frozenset(nxt), k.pinf, ev_next)


def collect_bounds(a: Automaton, y: Clock) -> tuple[list[LowerBound], list[UpperBound]]:
    lows, ups = set(), set()
    for t in a.transitions:
        for atom in t.atoms_on(y):
            if atom.body is not NULL:
                lo, up = to_bounds(atom.body)
                lows.add(lo)
                ups.add(up)
    return sorted(lows, key=LowerBound.sort_key), sorted(ups, key=UpperBound.sort_key)


def mentions(a: Automaton, y: Clock) -> bool:
    return any(t.atoms_on(y) for t in a.transitions)


def drop_clock(a: Automaton, y: Clock) -> Automaton:
    """Remove a clock no constraint refers to."""
    return replace(a, clocks=a.clocks - {y})


def resolve_clock(a: Automaton, clock, kind) -> Clock:
    if isinstance(clock, Clock):
        y = clock
    else:
        matches = [c for c in a.clocks if c.name == clock or (c.kind is kind and c.prop == clock)]
        if len(matches) != 1:
            raise KeyError(f"no unique {kind.value} clock {clock!r}")
        y = matches[0]
    if y.kind is not kind:
        raise ValueError(f"clock {y.name} is a {y.kind.value} clock, expected {kind.value}")
    if y not in a.clocks:
        raise KeyError(f"clock {y.name} not declared by the automaton")
    return y
