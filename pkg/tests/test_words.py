from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from eckit.model import Clock
from eckit.words import (
    ClockKind,
    Tag,
    UpWord,
    abstract_successor,
    event_clock_value,
    eventually_abs_p,
    map_of,
    matching_return,
    p_infinity,
    stable_valuation,
    valuation_columns,
)

from conftest import tags_word, timed_words, up_words, word

YA = Clock("ya", ClockKind.ABS_PREDICTOR, "p")
XA = Clock("xa", ClockKind.ABS_RECORDER, "p")
YG = Clock("y", ClockKind.GLOBAL_PREDICTOR, "p")
XG = Clock("x", ClockKind.GLOBAL_RECORDER, "p")
ALL = (YA, XA, YG, XG)


def stack_scan(w):
    """Reference matching via an explicit stack."""
    out, stack = {}, []
    for i, (s, _) in enumerate(w.letters):
        if s.tag is Tag.CALL:
            stack.append(i)
        elif s.tag is Tag.RET and stack:
            out[stack.pop()] = i
    return out


def succ_ref(w, i):
    tags = [s.tag for s, _ in w.letters]
    m = stack_scan(w)
    if tags[i] is Tag.CALL:
        return m.get(i)
    if i + 1 < len(w) and tags[i + 1] is not Tag.RET:
        return i + 1
    return None


def chain_ref(w, i):
    """Brute-force MAP: walk back through every predecessor, then forward."""
    start = i
    while True:
        preds = [j for j in range(len(w)) if succ_ref(w, j) == start]
        assert len(preds) <= 1
        if not preds:
            break
        start = preds[0]
    chain = [start]
    while (nxt := succ_ref(w, chain[-1])) is not None:
        chain.append(nxt)
    return chain


def value_ref(w, i, clock):
    chain = chain_ref(w, i) if clock.kind.is_abstract else list(range(len(w)))
    if clock.kind.is_predictor:
        later = [j for j in chain if j > i and clock.prop in w.symbol(j).props]
        return w.time(later[0]) - w.time(i) if later else None
    earlier = [j for j in chain if j < i and clock.prop in w.symbol(j).props]
    return w.time(i) - w.time(earlier[-1]) if earlier else None


# -- worked examples


def test_matching_return_examples():
    assert matching_return(tags_word("call", "int", "ret"), 0) == 2
    assert matching_return(tags_word("call", "call", "ret"), 0) is None
    with pytest.raises(ValueError):
        matching_return(tags_word("int", "ret"), 0)


def test_abstract_successor_examples():
    assert abstract_successor(tags_word("int", "int"), 0) == 1
    assert abstract_successor(tags_word("call", "int", "ret"), 0) == 2
    assert abstract_successor(tags_word("int", "ret"), 0) is None
    assert abstract_successor(tags_word("call", "int"), 0) is None


def test_map_of_examples():
    assert map_of(tags_word("int", "int", "int"), 1).positions == (0, 1, 2)
    w = tags_word("call", "int", "ret", "int")
    assert map_of(w, 1).positions == (1,)
    assert map_of(w, 0).positions == (0, 2, 3)


def test_p_infinity_examples():
    assert p_infinity(tags_word("int", "int"), 1)
    assert not p_infinity(tags_word("call", "int", "ret"), 1)
    assert p_infinity(tags_word("call", "int"), 1)


def test_eventually_abs_p_examples():
    assert eventually_abs_p(word(("int", 0, "p")), 0, "p")
    assert not eventually_abs_p(word(("call", 0), ("int", 1, "p"), ("ret", 2)), 0, "p")
    assert eventually_abs_p(word(("int", 0), ("int", 1, "p")), 0, "p")


def test_event_clock_value_examples():
    w = word(("int", 0), ("call", 1), ("int", 2, "p"), ("ret", 3, "p"))
    assert event_clock_value(w, 0, YA) == 3
    assert event_clock_value(w, 2, YA) is None
    assert event_clock_value(w, 0, YG) == 2
    for c in (XA, XG):
        assert event_clock_value(w, 0, c) is None
    assert event_clock_value(w, 3, XG) == 1
    # the return's MAP predecessor is the call, whose MAP never saw p
    assert event_clock_value(w, 3, XA) is None


def test_own_position_never_satisfies():
    w = word(("int", 0, "p"), ("int", 1))
    assert event_clock_value(w, 0, YA) is None
    assert event_clock_value(w, 0, XA) is None


def test_upword_validation():
    with pytest.raises(ValueError):
        UpWord(tags_word(), tags_word("call"), Fraction(1))
    with pytest.raises(ValueError):
        UpWord(tags_word(), tags_word("int"), Fraction(0))


def test_upword_infinite_map_and_stabilisation():
    # p on the top level of the period only every copy: predictor value constant
    up = UpWord(word(("call", 0)), word(("int", 1, "p"), ("call", 2), ("int", 3), ("ret", 4)), Fraction(5))
    sv = stable_valuation(up, [YA, XA], cap=Fraction(10))
    n, m = len(up.prefix), len(up.period)
    assert sv.loop_start >= n + m
    assert len(sv.rows) == sv.loop_start + m
    # the top level of the period continues forever; the caller at 0 is unmatched
    assert map_of(up, 1).is_infinite
    assert p_infinity(up, 1) and p_infinity(up, 4)
    assert not p_infinity(up, 3)


# -- oracle agreement properties


@settings(max_examples=300, deadline=None)
@given(timed_words())
def test_matching_agrees_with_stack_scan(w):
    ref = stack_scan(w)
    for i, (s, _) in enumerate(w.letters):
        if s.tag is Tag.CALL:
            assert matching_return(w, i) == ref.get(i)


@settings(max_examples=300, deadline=None)
@given(timed_words())
def test_map_of_agrees_with_brute_force(w):
    for i in range(len(w)):
        assert list(map_of(w, i).positions) == chain_ref(w, i)


@settings(max_examples=200, deadline=None)
@given(timed_words(min_size=1))
def test_maps_partition_positions(w):
    views = [map_of(w, i) for i in range(len(w))]
    for i in range(len(w)):
        assert i in views[i].positions
        for j in range(len(w)):
            assert (i in views[j].positions) == (views[i] == views[j])


@settings(max_examples=200, deadline=None)
@given(timed_words())
def test_event_values_agree_with_reference(w):
    cols = valuation_columns(w, ALL)
    for k, c in enumerate(ALL):
        for i in range(len(w)):
            ref = value_ref(w, i, c)
            assert event_clock_value(w, i, c) == ref
            assert cols[k][i] == ref


@settings(max_examples=200, deadline=None)
@given(timed_words())
def test_abstract_predictor_dominance(w):
    for i in range(len(w)):
        chain = map_of(w, i).positions
        later_p = [j for j in chain if j > i and "p" in w.symbol(j).props]
        stop = later_p[0] if later_p else len(w)
        for j in chain:
            if i < j < stop:
                vi, vj = event_clock_value(w, i, YA), event_clock_value(w, j, YA)
                if vi is None:
                    assert vj is None
                else:
                    assert vj == vi - (w.time(j) - w.time(i))


@settings(max_examples=100, deadline=None)
@given(up_words())
def test_upword_has_at_most_one_infinite_map(up):
    n, m = len(up.prefix), len(up.period)
    # infinite MAPs are reported as a window-dependent prefix; identify them by their start
    starts = {map_of(up, i).positions[0] for i in range(n + 3 * m) if map_of(up, i).is_infinite}
    assert len(starts) <= 1
    for i in range(n + 3 * m):
        v = map_of(up, i)
        if v.is_infinite:
            assert p_infinity(up, i)
        elif starts and v.positions[0] >= min(starts):
            assert not p_infinity(up, i)


@settings(max_examples=100, deadline=None)
@given(up_words())
def test_stable_valuation_matches_long_unrolling(up):
    cap = Fraction(5)
    sv = stable_valuation(up, ALL, cap)
    m = len(up.period)
    fw = up.unroll(sv.copies + 6)
    cols = valuation_columns(fw, ALL)
    for i in range(len(fw) - 3 * m):
        j = i if i < len(sv.rows) else sv.loop_start + (i - sv.loop_start) % m
        expect = tuple(None if col[i] is None else min(col[i], cap) for col in cols)
        assert sv.rows[j] == expect, (i, j)
