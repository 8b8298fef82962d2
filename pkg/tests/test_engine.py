from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eckit.difftest import GenConfig, gen_automaton, gen_up_word
from eckit.engine import accepts, kernel, run_prefix, step
from eckit.engine.accept import explore, word_scale
from eckit.engine.compiled import compiled
from eckit.engine.semantics import Configuration, initial_configurations, truncate
from eckit.model import BOTTOM, Atom, Automaton, Clock, Interval, Transition
from eckit.words import Symbol, Tag, UpWord, valuation_columns

from conftest import fixture, word

Z = Clock("z")
INT = Symbol(frozenset(), Tag.INT)


def loop_automaton(*transitions, clocks=(Z,), acceptance=({"a"},)):
    return Automaton(set(), {"a", "b"}, {"a"}, set(clocks), {"g"}, transitions, acceptance)


# -- step / run_prefix


def test_step_examples():
    a = loop_automaton(Transition("a", INT, "a"))
    (c0,) = initial_configurations(a)
    assert step(a, c0, Symbol(frozenset(), Tag.CALL), 1) == set()
    (c1,) = step(a, c0, INT, 1)
    assert c1.state == "a" and c1.value(Z) == 1


def test_step_guard_arithmetic():
    a = loop_automaton(Transition("a", INT, "b", {Atom(Z, Interval(">=", 0, "<", 2))}))
    (c0,) = initial_configurations(a)
    assert step(a, c0, INT, 3) == set()
    assert len(step(a, c0, INT, Fraction(3, 2))) == 1


def test_step_rejects_time_travel_and_missing_event_values():
    y = Clock("y", "abs_predictor", "p")
    a = Automaton({"p"}, {"a"}, {"a"}, {y}, set(), [Transition("a", INT, "a", {Atom(y, Interval())})])
    (c0,) = initial_configurations(a)
    with pytest.raises(ValueError):
        step(a, c0, INT, 0, {})
    c1 = replace(c0, time=Fraction(2))
    with pytest.raises(ValueError):
        step(a, c1, INT, 1, {"y": 1})


def test_pop_on_bottom_keeps_bottom():
    ret = Symbol(frozenset(), Tag.RET)
    a = loop_automaton(Transition("a", ret, "a", op="pop", stack=BOTTOM), Transition("a", ret, "b", op="pop", stack="g"))
    (c0,) = initial_configurations(a)
    (c1,) = step(a, c0, ret, 0)
    assert c1.stack == (BOTTOM,) and c1.state == "a"


def test_run_prefix_examples():
    a = loop_automaton(Transition("a", INT, "a"), Transition("a", INT, "b", resets={Z}))
    assert run_prefix(a, word()) == initial_configurations(a)
    assert len(run_prefix(a, word(("int", 1)))) == 2
    det = loop_automaton(Transition("a", INT, "b"), Transition("b", INT, "a"))
    assert {c.state for c in run_prefix(det, word(("int", 0), ("int", 1), ("int", 2)))} == {"b"}


# -- acceptance examples


def test_universal_accepts_everything():
    a = fixture("universal.json")
    for name in ("word_near.json", "word_far.json", "word_nested.json"):
        assert accepts(a, fixture(name))


def test_unreachable_component_rejects():
    a = fixture("empty.json")
    assert not accepts(a, fixture("word_near.json"))


def test_predictor_guard_on_crafted_words():
    a = fixture("ecna.json")
    assert accepts(a, fixture("word_near.json"))
    assert not accepts(a, fixture("word_far.json"))
    assert not accepts(a, fixture("word_nested.json"))


def test_no_acceptance_family_means_any_infinite_run():
    a = loop_automaton(Transition("a", INT, "a"), acceptance=())
    up = UpWord(word(), word(("int", 0)), Fraction(1))
    assert accepts(a, up)
    assert not accepts(loop_automaton(acceptance=()), up)


# -- independent reference acceptance: per-letter exploration with exact rationals


def _clamp(a, c):
    t = truncate(a, c)
    return Configuration(c.state, c.stack, t.valuation, 0, c.time)


def ref_accepts(a: Automaton, up: UpWord, settle: int = 10) -> bool:
    n, m = len(up.prefix), len(up.period)
    fw = up.unroll(settle + 2)
    clocks = a.event_clocks
    cols = valuation_columns(fw, clocks)
    ev = [{c: cols[k][i] for k, c in enumerate(clocks)} for i in range(len(fw))]
    loop = n + settle * m
    configs = {_clamp(a, c) for c in initial_configurations(a)}
    for i in range(loop):
        s, t = fw.letters[i]
        configs = {_clamp(a, d) for c in configs for d in step(a, c, s, t, ev[i])}
    comps = [set(f) for f in a.acceptance] or [set(a.states)]
    before = [fw.time(loop + j - 1) for j in range(m)]

    def key(j, c, cnt):
        return (j, c.state, c.stack, c.valuation, cnt)

    frontier = [(0, replace(c, time=before[0]), 0) for c in configs]
    seen = {key(*x) for x in frontier}
    edges = {}
    while frontier:
        j, c, cnt = frontier.pop()
        s, t = fw.letters[loop + j]
        for d in step(a, c, s, t, ev[loop + j]):
            d = _clamp(a, d)
            nc, flag = cnt, False
            if d.state in comps[nc]:
                nc += 1
                if nc == len(comps):
                    nc, flag = 0, True
            nj = (j + 1) % m
            nxt = (nj, replace(d, time=before[nj]), nc)
            k = key(*nxt)
            edges.setdefault(key(j, c, cnt), set()).add((k, flag))
            if k not in seen:
                seen.add(k)
                frontier.append(nxt)

    def reaches(u, v):
        stack, vis = [u], {u}
        while stack:
            x = stack.pop()
            if x == v:
                return True
            for y, _ in edges.get(x, ()):
                if y not in vis:
                    vis.add(y)
                    stack.append(y)
        return False

    return any(reaches(v, u) for u, out in edges.items() for v, f in out if f)


def _cases(n, seed, **kw):
    cfg = GenConfig(seed=seed, cases=n, max_states=3, **kw)
    for case in range(n):
        a = gen_automaton(cfg, cfg.case_rng(case, "automaton"))
        rng = cfg.case_rng(case, "words")
        yield a, [gen_up_word(cfg, rng, sorted(a.props)) for _ in range(6)]


@pytest.mark.parametrize("seed", [11, 12, 13])
def test_accepts_agrees_with_reference_exploration(seed):
    for a, words in _cases(6, seed):
        for w in words:
            assert accepts(a, w) == ref_accepts(a, w), (seed, w)


def test_accepts_agrees_with_reference_without_event_clocks():
    for a, words in _cases(8, 21, clock_menu=()):
        for w in words:
            assert accepts(a, w) == ref_accepts(a, w)


# -- kernel backends


def test_kernel_backends_agree():
    if len(kernel.BACKENDS) < 2:
        pytest.skip("compiled kernel not built")
    for a, words in _cases(8, 5):
        for w in words:
            got = {b: explore(a, w, kernel.BACKENDS[b]) for b in kernel.BACKENDS}
            assert len(set(got.values())) == 1


def test_kernel_use_rejects_unknown_backend():
    with pytest.raises(ValueError):
        kernel.use("fortran")
    assert kernel.name() in kernel.BACKENDS


@pytest.mark.parametrize("backend", sorted(kernel.BACKENDS))
def test_kernel_prefix_matches_reference_step(backend):
    k = kernel.BACKENDS[backend]
    for a, words in _cases(8, 7):
        comp = compiled(a)
        for up in words:
            fw = up.unroll(2)
            scale = word_scale(up)
            cols = valuation_columns(fw, comp.event)
            evs = [tuple(comp.scale_value(col[i], scale) for col in cols) for i in range(len(fw))]
            rows = [comp.row(s, scale) for s, _ in fw.letters]
            times = [comp.scale_value(t, scale) for _, t in fw.letters]
            deltas = [times[0]] + [times[i] - times[i - 1] for i in range(1, len(times))]
            zeros = (0,) * len(comp.normal)
            got = k.run(rows, evs, deltas, {(q, (), zeros, 0, 0, 0) for q in comp.initial}, comp.cap(scale), comp.acc, 0)
            decoded = {
                (comp.states[q], tuple(comp.stack_symbols[g] for g in stack), tuple(Fraction(v, scale) for v in vals))
                for q, stack, vals, _, _, _ in got
            }
            ref = {(c.state, c.stack[1:], tuple(v for _, v in truncate(a, c).valuation)) for c in run_prefix(a, fw)}
            assert decoded == ref


# -- engine soundness properties

_values = st.fractions(min_value=0, max_value=12).map(lambda v: Fraction(round(v * 4), 4))


@st.composite
def guard_probes(draw):
    k = draw(st.integers(0, 4))
    lo = draw(st.integers(0, k))
    hi = draw(st.one_of(st.none(), st.integers(lo, k)))
    body = Interval(draw(st.sampled_from([">", ">="])), lo, draw(st.sampled_from(["<", "<="])), hi)
    return k, body, draw(_values)


def truncation_agrees(k, body, v) -> bool:
    """A guard with constants at most ``k`` cannot tell ``v`` from its truncation."""
    a = Automaton(set(), {"a"}, {"a"}, {Z}, set(), [Transition("a", INT, "a", {Atom(Z, Interval(">=", k))})])
    c = Configuration("a", (BOTTOM,), (("z", v),))
    cut = dict(truncate(a, c).valuation)["z"]
    atom = Atom(Z, body)
    return atom.holds(v) == atom.holds(cut)


@settings(max_examples=500, deadline=None)
@given(guard_probes())
def test_truncation_soundness(probe):
    assert truncation_agrees(*probe)


def neutral(a: Automaton, up: UpWord, below: tuple) -> bool:
    """Reading one period copy on top of ``below`` restores ``below`` and never looks under it."""
    fw = up.unroll(1)
    cols = valuation_columns(fw, a.event_clocks)
    n = len(up.prefix)
    base = {c.state for c in run_prefix(a, up.prefix)} or set(a.initial)
    results = []
    for stack in ((BOTTOM,), (BOTTOM,) + below):
        zeros = tuple((c.name, Fraction(0)) for c in a.normal_clocks)
        t0 = fw.time(n - 1) if n else Fraction(0)
        configs = {Configuration(q, stack, zeros, 0, t0) for q in base}
        for i in range(n, len(fw)):
            s, t = fw.letters[i]
            ev = {c: cols[k][i] for k, c in enumerate(a.event_clocks)}
            configs = {d for c in configs for d in step(a, c, s, t, ev)}
            if any(c.stack[: len(stack)] != stack for c in configs):
                return False
        if any(c.stack != stack for c in configs):
            return False
        results.append({(c.state, c.valuation) for c in configs})
    return results[0] == results[1]


def test_stack_neutrality_on_generated_cases():
    for a, words in _cases(10, 31):
        gammas = sorted(a.stack_alphabet)
        for w in words:
            assert neutral(a, w, tuple(gammas[:1] * 2))
