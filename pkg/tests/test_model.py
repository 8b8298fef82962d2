from __future__ import annotations

from eckit.model import (
    BOTTOM,
    NULL,
    Atom,
    Automaton,
    Clock,
    Interval,
    Transition,
    max_constant,
    normalize_for_clock,
    validate,
)
from eckit.words import ClockKind, Symbol, Tag

P = "p"
Y = Clock("y", ClockKind.ABS_PREDICTOR, P)
Z = Clock("z")
INT = Symbol(frozenset(), Tag.INT)
CALL = Symbol(frozenset(), Tag.CALL)


def two_state(*transitions, clocks=(Y, Z)):
    return Automaton({P}, {"a", "b"}, {"a"}, set(clocks), {"g"}, transitions, [{"b"}])


def test_well_formed_automaton_has_no_violations():
    a = two_state(
        Transition("a", INT, "b", {Atom(Y, Interval(">", 1, "<", 3))}, {Z}),
        Transition("b", CALL, "a", op="push", stack="g"),
        Transition("a", Symbol(frozenset(), Tag.RET), "b", op="pop", stack=BOTTOM),
    )
    assert validate(a) == []


def test_push_on_internal_symbol_is_reported():
    problems = validate(two_state(Transition("a", INT, "b", op="push", stack="g")))
    assert len(problems) == 1 and "visibly-pushdown" in problems[0]


def test_event_clock_reset_is_reported():
    problems = validate(two_state(Transition("a", INT, "b", resets={Y})))
    assert len(problems) == 1 and "reset violation" in problems[0]


def test_misc_violations():
    a = Automaton({P}, {"a"}, {"x"}, {Z}, set(), [Transition("a", INT, "a", {Atom(Z, NULL)})], [{"b"}])
    text = "\n".join(validate(a))
    assert "initial" in text and "acceptance" in text and "NULL check on normal clock" in text
    assert any("pushes" in v for v in validate(two_state(Transition("a", CALL, "b", op="push", stack=BOTTOM))))


def test_normalize_splits_unconstrained_transitions():
    a = normalize_for_clock(two_state(Transition("a", INT, "b")), Y)
    bodies = sorted(str(next(iter(t.guard)).body) for t in a.transitions)
    assert bodies == ["NULL", "[0,inf)"]


def test_normalize_intersects_and_drops():
    a = two_state(
        Transition("a", INT, "b", {Atom(Y, Interval(">", 1, "<", 3)), Atom(Y, Interval(">", 2, "<", 5))}),
        Transition("b", INT, "a", {Atom(Y, Interval(">", 1, "<", 2)), Atom(Y, NULL)}),
    )
    n = normalize_for_clock(a, Y)
    assert [t.guard for t in n.transitions] == [frozenset({Atom(Y, Interval(">", 2, "<", 3))})]
    assert (n.states, n.initial, n.acceptance) == (a.states, a.initial, a.acceptance)


def test_normalize_at_most_doubles():
    a = two_state(Transition("a", INT, "b"), Transition("b", INT, "a", {Atom(Y, NULL)}))
    assert len(normalize_for_clock(a, Y).transitions) <= 2 * len(a.transitions)


def test_max_constant():
    assert max_constant(two_state(Transition("a", INT, "b"))) == 0
    a = two_state(Transition("a", INT, "b", {Atom(Y, Interval(">", 1)), Atom(Z, Interval(">=", 0, "<", 5))}))
    assert max_constant(a) == 5 == a.max_constant


def test_interval_semantics():
    i = Interval(">", 1, "<=", 3)
    assert [i.contains(v) for v in (1, 2, 3, 4)] == [False, True, True, False]
    assert Interval(">=", 2, "<", 2).is_empty() and not Interval(">=", 2, "<=", 2).is_empty()
    assert Atom(Y, NULL).holds(None) and not Atom(Y, Interval()).holds(None)
