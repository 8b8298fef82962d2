"""JSON interchange documents for automata, words and reports."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .model import BOTTOM, INTERNAL, NULL, POP, PUSH, Atom, Automaton, Clock, Interval, Transition
from .words import ClockKind, Symbol, Tag, TimedNestedWord, UpWord

VERSION = 1
KINDS = ("automaton", "word", "upword", "report")


class ParseError(ValueError):
    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}" if where else msg)
        self.where = where
        self.msg = msg


# ---------------------------------------------------------------- serialize


def rational(v) -> dict:
    v = Fraction(v)
    return {"num": v.numerator, "den": v.denominator}


def _names(items, what: str) -> dict:
    out, seen = {}, set()
    for x in items:
        s = str(x)
        if s in seen:
            raise ValueError(f"two {what} share the printed name {s!r}")
        seen.add(s)
        out[x] = s
    return out


def symbol_json(s: Symbol) -> dict:
    return {"props": sorted(s.props), "tag": s.tag.value}


def _body_json(body) -> dict:
    if body is NULL:
        return {"null": True}
    return {
        "lower": {"op": body.lower_op, "value": body.lower},
        "upper": {"op": body.upper_op, "value": "inf" if body.upper is None else body.upper},
    }


def automaton_json(a: Automaton) -> dict:
    states = _names(a.states, "states")
    gammas = _names(a.stack_alphabet, "stack symbols")

    def gamma(g):
        return gammas[g] if g in gammas else str(g)

    def action(t):
        if t.op == INTERNAL:
            return {"op": "int"}
        if t.stack is BOTTOM:
            return {"op": "pop", "bottom": True}
        return {"op": t.op, "symbol": gamma(t.stack)}

    clocks = []
    for c in sorted(a.clocks, key=lambda c: c.name):
        d = {"name": c.name, "kind": c.kind.value}
        if c.prop is not None:
            d["prop"] = c.prop
        clocks.append(d)
    return {
        "props": sorted(a.props),
        "states": sorted(states.values()),
        "initial": sorted(states[q] for q in a.initial),
        "clocks": clocks,
        "stack_alphabet": sorted(gammas.values()),
        "transitions": [
            {
                "source": states[t.source],
                "symbol": symbol_json(t.symbol),
                "target": states[t.target],
                "guard": [dict(clock=atom.clock.name, **_body_json(atom.body)) for atom in sorted(t.guard, key=str)],
                "resets": sorted(c.name for c in t.resets),
                "action": action(t),
            }
            for t in a.transitions
        ],
        "acceptance": [sorted(states[q] for q in f) for f in a.acceptance],
    }


def letters_json(w: TimedNestedWord) -> list:
    return [{"symbol": symbol_json(s), "time": rational(t)} for s, t in w.letters]


def upword_json(w: UpWord) -> dict:
    return {
        "prefix": letters_json(w.prefix),
        "period": letters_json(w.period),
        "period_duration": rational(w.period_duration),
    }


def document(kind: str, payload: Any, **extra) -> dict:
    doc = {"kind": kind, "version": VERSION, "payload": payload}
    doc.update(extra)
    return doc


def to_document(obj, **extra) -> dict:
    if isinstance(obj, Automaton):
        return document("automaton", automaton_json(obj), **extra)
    if isinstance(obj, UpWord):
        return document("upword", upword_json(obj), **extra)
    if isinstance(obj, TimedNestedWord):
        return document("word", {"letters": letters_json(obj)}, **extra)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=False) + "\n"


# -------------------------------------------------------------------- parse


class _At:
    """Tiny JSON-path tracker for error messages."""

    def __init__(self, path: str = "$"):
        self.path = path

    def key(self, k) -> "_At":
        return _At(f"{self.path}[{k}]" if isinstance(k, int) else f"{self.path}.{k}")

    def fail(self, msg: str):
        raise ParseError(self.path, msg)

    def get(self, obj, k, typ=None, default=...):
        if not isinstance(obj, dict):
            self.fail("expected an object")
        if k not in obj:
            if default is not ...:
                return default
            self.fail(f"missing field {k!r}")
        v = obj[k]
        if typ is not None and not isinstance(v, typ):
            self.key(k).fail(f"expected {_typename(typ)}")
        return v


def _typename(typ) -> str:
    names = {dict: "an object", list: "an array", str: "a string", int: "an integer", bool: "a boolean"}
    if isinstance(typ, tuple):
        return " or ".join(names.get(t, t.__name__) for t in typ)
    return names.get(typ, typ.__name__)


def _int(at: _At, v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        at.fail("expected an integer")
    return v


def parse_rational(at: _At, v) -> Fraction:
    num = _int(at.key("num"), at.get(v, "num"))
    den = _int(at.key("den"), at.get(v, "den"))
    if den <= 0:
        at.key("den").fail("denominator must be positive")
    return Fraction(num, den)


def parse_symbol(at: _At, v) -> Symbol:
    props = at.get(v, "props", list)
    for k, p in enumerate(props):
        if not isinstance(p, str):
            at.key("props").key(k).fail("expected a string")
    tag = at.get(v, "tag", str)
    try:
        return Symbol(frozenset(props), Tag(tag))
    except ValueError:
        at.key("tag").fail(f"unknown tag {tag!r}")


def _parse_body(at: _At, v):
    if at.get(v, "null", bool, False):
        return NULL
    lo = at.get(v, "lower", dict, {"op": ">=", "value": 0})
    up = at.get(v, "upper", dict, {"op": "<", "value": "inf"})
    lo_at, up_at = at.key("lower"), at.key("upper")
    lv = _int(lo_at.key("value"), lo_at.get(lo, "value"))
    uv = up_at.get(up, "value")
    if uv != "inf":
        uv = _int(up_at.key("value"), uv)
    else:
        uv = None
    try:
        body = Interval(lo_at.get(lo, "op", str), lv, up_at.get(up, "op", str), uv)
    except ValueError as e:
        at.fail(str(e))
    if body.is_empty():
        at.fail(f"empty interval {body}")
    return body


def parse_automaton(payload, at: _At = None) -> Automaton:
    at = at or _At("$.payload")
    props = at.get(payload, "props", list)
    states = at.get(payload, "states", list)
    state_set = set(states)
    for k, s in enumerate(states):
        if not isinstance(s, str):
            at.key("states").key(k).fail("expected a string")
    clocks = {}
    for k, c in enumerate(at.get(payload, "clocks", list)):
        cat = at.key("clocks").key(k)
        name = cat.get(c, "name", str)
        kind = cat.get(c, "kind", str, "normal")
        try:
            clk = Clock(name, ClockKind(kind), cat.get(c, "prop", str, None))
        except ValueError as e:
            cat.fail(str(e))
        if name in clocks:
            cat.fail(f"clock {name!r} declared twice")
        clocks[name] = clk
    gammas = at.get(payload, "stack_alphabet", list, [])

    def clock(cat: _At, name):
        if name not in clocks:
            cat.fail(f"unknown clock {name!r}")
        return clocks[name]

    def state(sat: _At, s):
        if s not in state_set:
            sat.fail(f"unknown state {s!r}")
        return s

    initial = [state(at.key("initial").key(k), s) for k, s in enumerate(at.get(payload, "initial", list))]
    transitions = []
    for k, t in enumerate(at.get(payload, "transitions", list)):
        tat = at.key("transitions").key(k)
        symbol = parse_symbol(tat.key("symbol"), tat.get(t, "symbol", dict))
        guard = []
        for j, g in enumerate(tat.get(t, "guard", list, [])):
            gat = tat.key("guard").key(j)
            guard.append(Atom(clock(gat.key("clock"), gat.get(g, "clock", str)), _parse_body(gat, g)))
        resets = [clock(tat.key("resets").key(j), r) for j, r in enumerate(tat.get(t, "resets", list, []))]
        act = tat.get(t, "action", dict, None)
        aat = tat.key("action")
        if act is None:
            op = {Tag.CALL: PUSH, Tag.RET: POP, Tag.INT: INTERNAL}[symbol.tag]
            stack = None
            if op != INTERNAL:
                aat.fail("push and pop transitions need an action")
        else:
            op = aat.get(act, "op", str)
            if op not in (PUSH, POP, INTERNAL):
                aat.key("op").fail(f"unknown op {op!r}")
            if op == INTERNAL:
                stack = None
            elif op == POP and aat.get(act, "bottom", bool, False):
                stack = BOTTOM
            else:
                stack = aat.get(act, "symbol", str)
                if stack not in gammas:
                    aat.key("symbol").fail(f"unknown stack symbol {stack!r}")
        transitions.append(
            Transition(
                state(tat.key("source"), tat.get(t, "source", str)),
                symbol,
                state(tat.key("target"), tat.get(t, "target", str)),
                frozenset(guard),
                frozenset(resets),
                op,
                stack,
            )
        )
    acceptance = []
    for k, f in enumerate(at.get(payload, "acceptance", list, [])):
        fat = at.key("acceptance").key(k)
        if not isinstance(f, list):
            fat.fail("expected an array")
        acceptance.append(frozenset(state(fat.key(j), s) for j, s in enumerate(f)))
    return Automaton(
        frozenset(props),
        frozenset(states),
        frozenset(initial),
        frozenset(clocks.values()),
        frozenset(gammas),
        tuple(transitions),
        tuple(acceptance),
    )


def parse_letters(at: _At, v) -> TimedNestedWord:
    if not isinstance(v, list):
        at.fail("expected an array")
    letters = []
    for k, x in enumerate(v):
        lat = at.key(k)
        letters.append((parse_symbol(lat.key("symbol"), lat.get(x, "symbol", dict)), parse_rational(lat.key("time"), lat.get(x, "time", dict))))
    try:
        return TimedNestedWord(tuple(letters))
    except ValueError as e:
        at.fail(str(e))


def parse_upword(payload, at: _At = None) -> UpWord:
    at = at or _At("$.payload")
    prefix = parse_letters(at.key("prefix"), at.get(payload, "prefix", list))
    period = parse_letters(at.key("period"), at.get(payload, "period", list))
    d = parse_rational(at.key("period_duration"), at.get(payload, "period_duration", dict))
    try:
        return UpWord(prefix, period, d)
    except ValueError as e:
        at.fail(str(e))


def parse_document(doc, expect: str | None = None):
    """``(kind, value)`` for a decoded JSON document."""
    at = _At("$")
    kind = at.get(doc, "kind", str)
    if kind not in KINDS:
        at.key("kind").fail(f"unknown document kind {kind!r}")
    if expect is not None and kind != expect:
        at.key("kind").fail(f"expected a {expect} document, got {kind}")
    version = at.get(doc, "version")
    if version != VERSION:
        at.key("version").fail(f"unsupported version {version!r}")
    payload = at.get(doc, "payload")
    pat = at.key("payload")
    if kind == "automaton":
        return kind, parse_automaton(payload, pat)
    if kind == "upword":
        return kind, parse_upword(payload, pat)
    if kind == "word":
        return kind, parse_letters(pat.key("letters"), pat.get(payload, "letters", list))
    if not isinstance(payload, dict):
        pat.fail("expected an object")
    return kind, payload


def loads(text: str, expect: str | None = None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}", e.msg) from None
    return parse_document(doc, expect)


def load(path, expect: str | None = None):
    with open(path, encoding="utf-8") as f:
        text = f.read()
    try:
        return loads(text, expect)
    except ParseError as e:
        raise ParseError(f"{path}: {e.where}", e.msg) from None
