"""Random automata and words, and the differential translation oracle."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from itertools import combinations

from . import io
from .engine import accepts
from .model import BOTTOM, INTERNAL, NULL, POP, PUSH, Atom, Automaton, Clock, Interval, Transition, validate
from .translate.common import MUTATIONS
from .translate.pipeline import remove_all_event_clocks, remove_clock, ORDER
from .words import ClockKind, Symbol, Tag, TimedNestedWord, UpWord

EVENT_KINDS = (
    ClockKind.ABS_PREDICTOR,
    ClockKind.ABS_RECORDER,
    ClockKind.GLOBAL_RECORDER,
    ClockKind.GLOBAL_PREDICTOR,
)
_SHORT = {
    ClockKind.ABS_PREDICTOR: "ya",
    ClockKind.ABS_RECORDER: "xa",
    ClockKind.GLOBAL_PREDICTOR: "y",
    ClockKind.GLOBAL_RECORDER: "x",
}


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    cases: int = 20
    max_states: int = 4
    max_props: int = 2
    max_constant: int = 3
    clock_menu: tuple = EVENT_KINDS
    mixed: bool = False  # draw several event clocks per automaton
    words_per_case: int = 50
    prefix_len: int = 6
    period_len: int = 6
    event_atom_rate: float = 0.3
    intervals_per_clock: int = 2
    null_rate: float = 0.2
    mutations: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "clock_menu", tuple(ClockKind(k) for k in self.clock_menu))
        object.__setattr__(self, "mutations", frozenset(self.mutations))
        for name in ("cases", "max_states", "max_props", "max_constant", "words_per_case", "prefix_len", "period_len", "intervals_per_clock"):
            if getattr(self, name) < (0 if name == "prefix_len" else 1):
                raise ValueError(f"{name} must be positive")
        unknown = self.mutations - MUTATIONS
        if unknown:
            raise ValueError(f"unknown mutations {sorted(unknown)}")

    def case_rng(self, case: int, stream: str) -> random.Random:
        return random.Random(f"{self.seed}:{case}:{stream}")


# --------------------------------------------------------------- generators


def _interval(rng: random.Random, k: int) -> Interval:
    while True:
        lo = rng.randint(0, k)
        hi = None if rng.random() < 0.3 else rng.randint(lo, k)
        body = Interval(rng.choice((">", ">=")), lo, rng.choice(("<", "<=")), hi)
        if not body.is_empty() and (body.upper is not None or body.lower > 0 or rng.random() < 0.3):
            return body


def gen_automaton(cfg: GenConfig, rng: random.Random | int | None = None) -> Automaton:
    """Random nested VPTA within the bounds of ``cfg``."""
    if not isinstance(rng, random.Random):
        rng = random.Random(cfg.seed if rng is None else rng)
    props = [f"p{i}" for i in range(rng.randint(1, cfg.max_props))]
    states = [f"q{i}" for i in range(rng.randint(1, cfg.max_states))]
    if cfg.mixed:
        kinds = [rng.choice(cfg.clock_menu) for _ in range(2)]
    else:
        kinds = [rng.choice(cfg.clock_menu)] if cfg.clock_menu else []
    event = []
    for k, kind in enumerate(kinds):
        p = rng.choice(props)
        event.append(Clock(f"{_SHORT[kind]}{k}_{p}", kind, p))
    normal = [Clock("c0")] if rng.random() < 0.5 else []
    # a small interval menu per clock keeps the number of distinct bounds low
    menus = {y: [_interval(rng, cfg.max_constant) for _ in range(rng.randint(1, cfg.intervals_per_clock))] for y in event + normal}
    gammas = ["g0"] if rng.random() < 0.5 else ["g0", "g1"]
    symbols = [Symbol(frozenset(s), tag) for tag in Tag for r in range(len(props) + 1) for s in combinations(props, r)]
    transitions = []
    slots = []
    for q in states:
        for s in symbols:
            if s.tag is Tag.RET:
                slots.extend((q, s, g) for g in [BOTTOM] + gammas)
            else:
                slots.append((q, s, None))
    for q, s, popped in slots:
            n = rng.choices((0, 1, 2, 3), weights=(1, 6, 6, 3))[0]
            for _ in range(n):
                guard = set()
                for y in event:
                    if rng.random() < cfg.event_atom_rate:
                        body = NULL if rng.random() < cfg.null_rate else rng.choice(menus[y])
                        guard.add(Atom(y, body))
                for c in normal:
                    if rng.random() < 0.15:
                        guard.add(Atom(c, rng.choice(menus[c])))
                resets = {c for c in normal if rng.random() < 0.3}
                if s.tag is Tag.CALL:
                    op, stack = PUSH, rng.choice(gammas)
                elif s.tag is Tag.RET:
                    op, stack = POP, popped
                else:
                    op, stack = INTERNAL, None
                transitions.append(Transition(q, s, rng.choice(states), frozenset(guard), frozenset(resets), op, stack))
    acceptance = []
    for _ in range(rng.randint(1, 2)):
        acceptance.append(frozenset(rng.sample(states, rng.randint(1, max(1, len(states) // 2 + 1)))))
    a = Automaton(
        frozenset(props),
        frozenset(states),
        frozenset(rng.sample(states, rng.randint(1, min(2, len(states))))),
        frozenset(event + normal),
        frozenset(gammas),
        tuple(transitions),
        tuple(acceptance),
    )
    problems = validate(a)
    assert not problems, problems
    return a


_STEPS = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3))


def _well_matched_tags(rng: random.Random, n: int) -> list:
    tags: list = []
    depth = 0
    for i in range(n):
        left = n - i
        if depth == left:
            tags.append(Tag.RET)
            depth -= 1
            continue
        options = [Tag.INT]
        if depth + 2 <= left:
            options.append(Tag.CALL)
        if depth:
            options.append(Tag.RET)
        t = rng.choice(options)
        depth += {Tag.CALL: 1, Tag.RET: -1, Tag.INT: 0}[t]
        tags.append(t)
    return tags


def gen_up_word(cfg: GenConfig, rng: random.Random | int | None = None, props=("p0", "p1")) -> UpWord:
    """Random ultimately periodic word over ``props``; the period is well-matched."""
    if not isinstance(rng, random.Random):
        rng = random.Random(cfg.seed if rng is None else rng)
    props = sorted(props)
    silent = {p for p in props if rng.random() < 0.5}  # never occur in the period

    def letter(tag, allowed):
        chosen = frozenset(p for p in allowed if rng.random() < 0.5)
        return Symbol(chosen, tag)

    t = Fraction(0)
    prefix = []
    for _ in range(rng.randint(0, cfg.prefix_len)):
        t += rng.choice(_STEPS)
        prefix.append((letter(rng.choice(list(Tag)), props), t))
    n = rng.randint(1, cfg.period_len)
    if n == 1:
        tags = [Tag.INT]
    else:
        tags = _well_matched_tags(rng, n)
    allowed = [p for p in props if p not in silent]
    period = []
    for tag in tags:
        t += rng.choice(_STEPS)
        period.append((letter(tag, allowed), t))
    if allowed and not any(allowed[0] in s.props for s, _ in period) and rng.random() < 0.5:
        j = rng.randrange(len(period))
        s, tj = period[j]
        period[j] = (Symbol(s.props | {allowed[0]}, s.tag), tj)
    span = period[-1][1] - period[0][1]
    duration = span + rng.choice(_STEPS[1:])
    return UpWord(TimedNestedWord(tuple(prefix)), TimedNestedWord(tuple(period)), duration)


# -------------------------------------------------------------------- oracle


@dataclass
class Mismatch:
    case: int
    word: int
    stage: str  # the translation stage whose verdict differs from the source
    source: bool
    translated: bool
    automaton: dict
    upword: dict


@dataclass
class Report:
    config: dict
    cases: int = 0
    words: int = 0
    accepted: int = 0
    mismatches: list = field(default_factory=list)
    bound_violations: list = field(default_factory=list)
    constant_violations: list = field(default_factory=list)
    max_blowup: float = 1.0
    max_states: int = 0

    @property
    def ok(self) -> bool:
        return not (self.mismatches or self.bound_violations or self.constant_violations)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d

    def summary(self) -> str:
        lines = [
            f"cases {self.cases}, words {self.words}, accepted {self.accepted}/{self.words}",
            f"mismatches {len(self.mismatches)}, bound violations {len(self.bound_violations)}, "
            f"constant violations {len(self.constant_violations)}",
            f"largest translation {self.max_states} states, max blow-up {self.max_blowup:.1f}",
            "PASS" if self.ok else "FAIL",
        ]
        return "\n".join(lines)


def _config_dict(cfg: GenConfig) -> dict:
    d = asdict(cfg)
    d["clock_menu"] = [k.value for k in cfg.clock_menu]
    d["mutations"] = sorted(cfg.mutations)
    return d


def translation_stages(a: Automaton, mutations: frozenset = frozenset()):
    """``[(label, automaton)]`` after each single-clock removal, plus the pipeline stats."""
    final, stats = remove_all_event_clocks(a, mutations)
    stages = []
    cur = a
    clocks = [y for kind in ORDER for y in sorted((c for c in a.clocks if c.kind is kind), key=lambda c: c.name)]
    for y in clocks[:-1]:
        cur, _ = remove_clock(cur, y, mutations)
        stages.append((f"-{y.name}", cur))
    stages.append(("all", final))
    return stages, stats


def check_case(a: Automaton, words, mutations: frozenset = frozenset()):
    """Yields ``(word index, stage, source verdict, stage verdict)`` for each disagreement."""
    stages, stats = translation_stages(a, mutations)
    verdicts = []
    for w_i, w in enumerate(words):
        v = accepts(a, w)
        verdicts.append(v)
        for label, b in stages:
            vb = accepts(b, w)
            if vb != v:
                yield ("mismatch", w_i, label, v, vb)
                break
    yield ("done", stats, verdicts)


def difftest(cfg: GenConfig) -> Report:
    rep = Report(config=_config_dict(cfg))
    for case in range(cfg.cases):
        a = gen_automaton(cfg, cfg.case_rng(case, "automaton"))
        wrng = cfg.case_rng(case, "words")
        words = [gen_up_word(cfg, wrng, sorted(a.props)) for _ in range(cfg.words_per_case)]
        rep.cases += 1
        for item in check_case(a, words, cfg.mutations):
            if item[0] == "mismatch":
                _, w_i, label, v, vb = item
                rep.mismatches.append(
                    asdict(Mismatch(case, w_i, label, v, vb, io.automaton_json(a), io.upword_json(words[w_i])))
                )
                continue
            _, stats, verdicts = item
            rep.words += len(verdicts)
            rep.accepted += sum(verdicts)
            rep.max_blowup = max(rep.max_blowup, stats.blowup)
            rep.max_states = max(rep.max_states, stats.out_states)
            for s in stats.steps:
                if not (s.states_ok and s.clocks_ok):
                    rep.bound_violations.append(dict(case=case, **asdict(s)))
            if not stats.constant_ok:
                rep.constant_violations.append(
                    {"case": case, "before": stats.max_constant_in, "after": stats.max_constant_out}
                )
    return rep


# ----------------------------------------------------------------- shrinking


def mismatches(a: Automaton, w: UpWord, mutations: frozenset = frozenset()) -> bool:
    return any(item[0] == "mismatch" for item in check_case(a, [w], mutations))


def _restrict(a: Automaton, transitions) -> Automaton:
    transitions = tuple(transitions)
    used = set(a.initial) | {t.source for t in transitions} | {t.target for t in transitions}
    return replace(
        a,
        states=frozenset(used),
        transitions=transitions,
        acceptance=tuple(f & used for f in a.acceptance),
    )


def _word_variants(w: UpWord):
    pre, per = list(w.prefix.letters), list(w.period.letters)
    for i in range(len(pre)):
        yield UpWord(TimedNestedWord(tuple(pre[:i] + pre[i + 1 :])), w.period, w.period_duration)
    match = w.period._match
    for i in range(len(per)):
        if per[i][0].tag is Tag.RET:
            continue
        drop = {i}
        if per[i][0].tag is Tag.CALL:
            drop.add(match[i])
        rest = [x for j, x in enumerate(per) if j not in drop]
        if rest:
            yield UpWord(w.prefix, TimedNestedWord(tuple(rest)), w.period_duration)


def shrink(a: Automaton, w: UpWord, failing) -> tuple[Automaton, UpWord]:
    """Greedy deletion of transitions and letters while ``failing(a, w)`` stays true."""
    assert failing(a, w)
    changed = True
    while changed:
        changed = False
        trans = list(a.transitions)
        i = 0
        while i < len(trans):
            cand = _restrict(a, trans[:i] + trans[i + 1 :])
            if failing(cand, w):
                a, trans, changed = cand, trans[:i] + trans[i + 1 :], True
            else:
                i += 1
        progress = True
        while progress:
            progress = False
            for cand in _word_variants(w):
                if failing(a, cand):
                    w, progress, changed = cand, True, True
                    break
    return a, w
