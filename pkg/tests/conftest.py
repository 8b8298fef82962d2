from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from hypothesis import strategies as st

from eckit import io
from eckit.words import Symbol, Tag, TimedNestedWord, UpWord

FIXTURES = Path(__file__).parent / "fixtures"


def fixture(name: str):
    return io.load(FIXTURES / name)[1]


def word(*items) -> TimedNestedWord:
    """``word(("int", 0), ("call", 1, "p"), ...)``: tag, time, then propositions."""
    return TimedNestedWord(tuple((Symbol(frozenset(x[2:]), Tag(x[0])), Fraction(x[1])) for x in items))


def tags_word(*tags) -> TimedNestedWord:
    return word(*((t, i) for i, t in enumerate(tags)))


_steps = st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)])
_props = st.frozensets(st.sampled_from(["p", "q"]))


@st.composite
def timed_words(draw, min_size=0, max_size=20):
    n = draw(st.integers(min_size, max_size))
    t = Fraction(0)
    letters = []
    for _ in range(n):
        t += draw(_steps)
        letters.append((Symbol(draw(_props), draw(st.sampled_from(list(Tag)))), t))
    return TimedNestedWord(tuple(letters))


@st.composite
def well_matched_tags(draw, max_size=6):
    n = draw(st.integers(1, max_size))
    tags, depth = [], 0
    for i in range(n):
        left = n - i
        opts = [Tag.INT]
        if depth + 2 <= left:
            opts.append(Tag.CALL)
        if depth:
            opts.append(Tag.RET)
        tag = Tag.RET if depth == left else draw(st.sampled_from(opts))
        depth += {Tag.CALL: 1, Tag.RET: -1, Tag.INT: 0}[tag]
        tags.append(tag)
    return tags


@st.composite
def up_words(draw, max_prefix=6, max_period=6):
    prefix = draw(timed_words(max_size=max_prefix))
    t = prefix.time(len(prefix) - 1) if len(prefix) else Fraction(0)
    letters = []
    for tag in draw(well_matched_tags(max_period)):
        t += draw(_steps)
        letters.append((Symbol(draw(_props), tag), t))
    period = TimedNestedWord(tuple(letters))
    span = letters[-1][1] - letters[0][1]
    return UpWord(prefix, period, span + draw(_steps.filter(bool)))


CRITERIA: list[str] = []


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    CRITERIA.append(line)


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(CRITERIA):
            terminalreporter.write_line(line)
