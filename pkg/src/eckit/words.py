"""Timed nested words, their matching relation and maximal abstract paths.

Positions are 0-based. A finite word is a :class:`TimedNestedWord`; an
infinite ultimately periodic word is an :class:`UpWord` whose positions are
numbered along its infinite unrolling (prefix first, then period copies).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union


class Tag(str, Enum):
    CALL = "call"
    RET = "ret"
    INT = "int"


class ClockKind(str, Enum):
    NORMAL = "normal"
    GLOBAL_RECORDER = "global_recorder"
    GLOBAL_PREDICTOR = "global_predictor"
    ABS_RECORDER = "abs_recorder"
    ABS_PREDICTOR = "abs_predictor"

    @property
    def is_event(self) -> bool:
        return self is not ClockKind.NORMAL

    @property
    def is_predictor(self) -> bool:
        return self in (ClockKind.GLOBAL_PREDICTOR, ClockKind.ABS_PREDICTOR)

    @property
    def is_abstract(self) -> bool:
        return self in (ClockKind.ABS_RECORDER, ClockKind.ABS_PREDICTOR)


@dataclass(frozen=True)
class Symbol:
    """A letter of the pushdown alphabet: a proposition set plus a tag."""

    props: frozenset
    tag: Tag

    def __post_init__(self):
        if not isinstance(self.props, frozenset):
            object.__setattr__(self, "props", frozenset(self.props))
        if not isinstance(self.tag, Tag):
            object.__setattr__(self, "tag", Tag(self.tag))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.tag.value, tuple(sorted(self.props)))

    def __str__(self):
        return f"{self.tag.value}{{{','.join(sorted(self.props))}}}"


def sym(tag: str, *props: str) -> Symbol:
    return Symbol(frozenset(props), Tag(tag))


def _as_fraction(t) -> Fraction:
    return t if isinstance(t, Fraction) else Fraction(t)


def compute_matching(tags: Sequence[Tag]) -> tuple:
    """Partner index for every call/return, or None when pending/unmatched."""
    partner: list = [None] * len(tags)
    pending: list[int] = []
    for i, tag in enumerate(tags):
        if tag is Tag.CALL:
            pending.append(i)
        elif tag is Tag.RET and pending:
            c = pending.pop()
            partner[c] = i
            partner[i] = c
    return tuple(partner)


@dataclass(frozen=True)
class TimedNestedWord:
    letters: tuple
    _match: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        letters = tuple((s, _as_fraction(t)) for s, t in self.letters)
        object.__setattr__(self, "letters", letters)
        prev = Fraction(0)
        for i, (s, t) in enumerate(letters):
            if not isinstance(s, Symbol):
                raise TypeError(f"position {i}: expected Symbol, got {type(s).__name__}")
            if t < prev:
                raise ValueError(f"position {i}: timestamp {t} decreases (previous {prev})")
            prev = t
        object.__setattr__(self, "_match", compute_matching([s.tag for s, _ in letters]))

    @classmethod
    def of(cls, items: Iterable) -> "TimedNestedWord":
        return cls(tuple(items))

    def __len__(self):
        return len(self.letters)

    def symbol(self, i: int) -> Symbol:
        return self.letters[i][0]

    def time(self, i: int) -> Fraction:
        return self.letters[i][1]

    def tags(self) -> list:
        return [s.tag for s, _ in self.letters]

    def is_well_matched(self) -> bool:
        return all(
            m is not None for (s, _), m in zip(self.letters, self._match) if s.tag is not Tag.INT
        )

    def pending_calls(self) -> list[int]:
        return [i for i, (s, _) in enumerate(self.letters) if s.tag is Tag.CALL and self._match[i] is None]


@dataclass(frozen=True)
class UpWord:
    """``prefix . period^omega``; copy ``k`` of the period is shifted by ``k * period_duration``.

    Period timestamps are absolute for copy 0 and must fit inside one
    ``period_duration`` so the unrolling stays nondecreasing.
    """

    prefix: TimedNestedWord
    period: TimedNestedWord
    period_duration: Fraction

    def __post_init__(self):
        object.__setattr__(self, "period_duration", _as_fraction(self.period_duration))
        problems = self.violations()
        if problems:
            raise ValueError("; ".join(problems))

    def violations(self) -> list[str]:
        out = []
        if len(self.period) == 0:
            out.append("period is empty")
            return out
        if not self.period.is_well_matched():
            out.append("period is not well-matched")
        if self.period_duration <= 0:
            out.append("period duration must be positive")
        if len(self.prefix) and self.period.time(0) < self.prefix.time(len(self.prefix) - 1):
            out.append("period starts before the end of the prefix")
        span = self.period.time(len(self.period) - 1) - self.period.time(0)
        if span > self.period_duration:
            out.append("period spans more than its duration")
        return out

    def position_letter(self, i: int):
        n = len(self.prefix)
        if i < n:
            return self.prefix.letters[i]
        k, r = divmod(i - n, len(self.period))
        s, t = self.period.letters[r]
        return s, t + k * self.period_duration

    def unroll(self, copies: int) -> TimedNestedWord:
        letters = list(self.prefix.letters)
        for k in range(copies):
            shift = k * self.period_duration
            letters.extend((s, t + shift) for s, t in self.period.letters)
        return TimedNestedWord(tuple(letters))

    def copies_to_cover(self, i: int, lookahead: int = 3) -> int:
        n = len(self.prefix)
        k = 0 if i < n else (i - n) // len(self.period) + 1
        return k + lookahead


AnyWord = Union[TimedNestedWord, UpWord]


@dataclass(frozen=True)
class MapView:
    positions: tuple
    is_infinite: bool = False

    def __contains__(self, i):
        return i in self.positions


def _finite(w: AnyWord, i: int) -> TimedNestedWord:
    if isinstance(w, UpWord):
        return w.unroll(w.copies_to_cover(i))
    if not 0 <= i < len(w):
        raise IndexError(f"position {i} outside word of length {len(w)}")
    return w


def matching_return(w: AnyWord, i: int) -> Optional[int]:
    fw = _finite(w, i)
    if fw.symbol(i).tag is not Tag.CALL:
        raise ValueError(f"position {i} is not a call")
    return fw._match[i]


def abstract_successor(w: AnyWord, i: int) -> Optional[int]:
    fw = _finite(w, i)
    return _succ(fw, i)


def _succ(fw: TimedNestedWord, i: int) -> Optional[int]:
    if fw.letters[i][0].tag is Tag.CALL:
        return fw._match[i]
    j = i + 1
    if j < len(fw.letters) and fw.letters[j][0].tag is not Tag.RET:
        return j
    return None


def _pred(fw: TimedNestedWord, j: int) -> Optional[int]:
    tag = fw.letters[j][0].tag
    if tag is Tag.RET:
        return fw._match[j]
    if j == 0:
        return None
    return j - 1 if fw.letters[j - 1][0].tag is not Tag.CALL else None


def map_starts(fw: TimedNestedWord) -> list[int]:
    return [j for j in range(len(fw)) if _pred(fw, j) is None]


def map_chains(fw: TimedNestedWord) -> list[list[int]]:
    """All MAPs of a finite word, each as an increasing position list."""
    chains = []
    for j in map_starts(fw):
        chain = [j]
        nxt = _succ(fw, j)
        while nxt is not None:
            chain.append(nxt)
            nxt = _succ(fw, nxt)
        chains.append(chain)
    return chains


def map_of(w: AnyWord, i: int) -> MapView:
    fw = _finite(w, i)
    start = i
    while (p := _pred(fw, start)) is not None:
        start = p
    chain = [start]
    while (n := _succ(fw, chain[-1])) is not None:
        chain.append(n)
    infinite = False
    if isinstance(w, UpWord):
        # only a MAP cut off by the end of the window continues forever
        infinite = chain[-1] == len(fw) - 1
    return MapView(tuple(chain), infinite)


def p_infinity(w: AnyWord, i: int) -> bool:
    fw = _finite(w, i)
    start = map_of(fw, i).positions[0]
    if start == 0:
        return True
    before = start - 1
    return not (fw.symbol(before).tag is Tag.CALL and fw._match[before] is not None)


def eventually_abs_p(w: AnyWord, i: int, p: str) -> bool:
    fw = _finite(w, i)
    return any(p in fw.symbol(j).props for j in map_of(fw, i).positions if j >= i)


def event_clock_value(w: AnyWord, i: int, clock) -> Optional[Fraction]:
    """Value of an event clock at position ``i``; ``None`` stands for NULL.

    ``clock`` needs ``kind`` (an event :class:`ClockKind`) and ``prop``.
    """
    kind = ClockKind(clock.kind)
    if not kind.is_event:
        raise ValueError(f"{clock} is not an event clock")
    fw = _finite(w, i)
    if kind.is_abstract:
        candidates = map_of(fw, i).positions
    else:
        candidates = range(len(fw))
    t_i = fw.time(i)
    if kind.is_predictor:
        for j in candidates:
            if j > i and clock.prop in fw.symbol(j).props:
                return fw.time(j) - t_i
        return None
    best = None
    for j in candidates:
        if j < i and clock.prop in fw.symbol(j).props:
            best = j
    return None if best is None else t_i - fw.time(best)


def valuation_columns(fw: TimedNestedWord, clocks: Sequence) -> list[list]:
    """Event-clock values of every position, one list per clock (linear scans)."""
    chains = None
    cols = []
    n = len(fw)
    for clock in clocks:
        kind = ClockKind(clock.kind)
        col: list = [None] * n
        if kind.is_abstract:
            if chains is None:
                chains = map_chains(fw)
            paths = chains
        else:
            paths = [list(range(n))]
        for path in paths:
            order = reversed(path) if kind.is_predictor else path
            last = None
            for j in order:
                t = fw.letters[j][1]
                if last is not None:
                    col[j] = (last - t) if kind.is_predictor else (t - last)
                if clock.prop in fw.letters[j][0].props:
                    last = t
        cols.append(col)
    return cols


@dataclass(frozen=True)
class StableValuation:
    """Event-clock rows for ``prefix + copies`` period copies; the last copy repeats forever."""

    rows: tuple
    copies: int
    loop_start: int


def stable_valuation(up: UpWord, clocks: Sequence, cap: Optional[Fraction] = None) -> StableValuation:
    """Per-position event-clock values, truncated at ``cap`` and cut at the first stable copy.

    Predictor values are identical in every period copy; recorder values are
    either constant from the second copy on or grow by ``period_duration``
    per copy, so once two consecutive truncated copies agree all later copies
    agree too.
    """
    n, m = len(up.prefix), len(up.period)

    def trunc(v):
        if v is None or cap is None:
            return v
        return min(v, cap)

    copies = 6
    while True:
        fw = up.unroll(copies)
        cols = valuation_columns(fw, clocks)
        rows = [tuple(trunc(col[j]) for col in cols) for j in range(len(fw))]
        # the last two copies lack predictor lookahead
        usable = copies - 2
        for k in range(2, usable):
            a = rows[n + (k - 1) * m : n + k * m]
            b = rows[n + k * m : n + (k + 1) * m]
            if a == b:
                end = n + k * m
                return StableValuation(tuple(rows[:end]), k, end - m)
        if cap is None:
            raise ValueError("event-clock valuation does not stabilise without a truncation cap")
        copies *= 2
        if copies > 4096:
            raise RuntimeError("event-clock valuation failed the stabilisation check")
