"""Command-line front end: translate, member, run, difftest, stats, validate."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import io
from .difftest import EVENT_KINDS, GenConfig, difftest
from .engine import run_prefix
from .engine.accept import explore
from .model import validate
from .translate.common import MUTATIONS
from .translate.pipeline import Stats, event_atom_count, remove_all_event_clocks, remove_clock
from .words import ClockKind

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _load(path, kind):
    return _load_doc(path, kind)[1]


def _load_doc(path, kind):
    try:
        return io.load(path, kind)
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None


def _load_valid_automaton(path):
    a = _load(path, "automaton")
    problems = validate(a)
    if problems:
        raise UsageError(f"{path}: invalid automaton:\n  " + "\n  ".join(problems))
    return a


def _write(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)


def _translate(a, clock, mutations):
    if clock is None:
        return remove_all_event_clocks(a, mutations)
    matches = [c for c in a.clocks if c.name == clock]
    if not matches:
        raise UsageError(f"unknown clock {clock!r}")
    y = matches[0]
    if not y.is_event:
        raise UsageError(f"clock {clock!r} is a normal clock")
    b, step = remove_clock(a, y, mutations)
    stats = Stats(len(a.states), len(a.clocks), event_atom_count(a), len(b.states), len(b.clocks), a.max_constant, b.max_constant, [step])
    return b, stats


def cmd_translate(args) -> int:
    a = _load_valid_automaton(args.input)
    b, stats = _translate(a, None if args.all else args.clock, frozenset(args.mutation))
    _write(io.dumps(io.to_document(b, stats=stats.to_dict())), args.output)
    s = stats
    print(
        f"states {s.n_states} -> {s.out_states}, clocks {s.n_clocks} -> {s.out_clocks}, "
        f"bounds {'ok' if s.bounds_ok else 'VIOLATED'}, K {s.max_constant_in} -> {s.max_constant_out}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_member(args) -> int:
    a = _load_valid_automaton(args.automaton)
    w = _load(args.word, "upword")
    v = explore(a, w)
    print("ACCEPT" if v.accepted else "REJECT")
    if args.verbose:
        print(f"prefix configurations {v.prefix_configs}, boundary nodes {v.boundary_nodes}, edges {v.edges}")
    return EXIT_OK if v.accepted else EXIT_NEGATIVE


def cmd_run(args) -> int:
    a = _load_valid_automaton(args.automaton)
    w = _load(args.word, "word")
    configs = sorted(run_prefix(a, w), key=str)
    for c in configs:
        print(c)
    print(f"{len(configs)} configuration(s) after {len(w)} letter(s)", file=sys.stderr)
    return EXIT_OK if configs else EXIT_NEGATIVE


def _kinds(name: str):
    if name == "all":
        return EVENT_KINDS, False
    if name == "mixed":
        return EVENT_KINDS, True
    if name == "none":
        return (), False
    return (ClockKind(name),), False


def cmd_difftest(args) -> int:
    seed = int(os.environ.get("ECKIT_SEED", args.seed))
    menu, mixed = _kinds(args.kind)
    cfg = GenConfig(
        seed=seed,
        cases=args.cases,
        words_per_case=args.words,
        max_states=args.max_states,
        max_props=args.max_props,
        max_constant=args.max_constant,
        prefix_len=args.prefix_len,
        period_len=args.period_len,
        clock_menu=menu,
        mixed=mixed,
        intervals_per_clock=1 if mixed else 2,
        mutations=frozenset(args.mutation),
    )
    rep = difftest(cfg)
    if args.report:
        _write(io.dumps(io.document("report", rep.to_dict())), args.report)
    print(rep.summary())
    return EXIT_OK if rep.ok else EXIT_NEGATIVE


def cmd_stats(args) -> int:
    a = _load_valid_automaton(args.input)
    _, stats = remove_all_event_clocks(a)
    d = stats.to_dict()
    if args.json:
        print(json.dumps(d, indent=1, sort_keys=True))
        return EXIT_OK
    print(f"n_s={stats.n_states} n_c={stats.n_clocks} n_e={stats.n_event_atoms} K={stats.max_constant_in}")
    for s in stats.steps:
        print(
            f"  remove {s.clock} ({s.kind}): states {s.states_in} -> {s.states_out} (bound {s.state_bound}), "
            f"clocks {s.clocks_in} -> {s.clocks_out} (expected {s.expected_clocks}), L={s.lower_bounds} U={s.upper_bounds}"
        )
    print(f"result: {stats.out_states} states, {stats.out_clocks} clocks, K={stats.max_constant_out}, blow-up {stats.blowup:.1f}")
    return EXIT_OK


def cmd_validate(args) -> int:
    kind, value = _load_doc(args.input, None)
    if kind != "automaton":
        print(f"{kind} document ok")
        return EXIT_OK
    problems = validate(value)
    for p in problems:
        print(p)
    if not problems:
        print("automaton ok")
    return EXIT_NEGATIVE if problems else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eckit", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("translate", help="remove event clocks")
    t.add_argument("input")
    g = t.add_mutually_exclusive_group(required=True)
    g.add_argument("--clock", help="name of a single event clock to remove")
    g.add_argument("--all", action="store_true", help="remove every event clock")
    t.add_argument("-o", "--output", default="-")
    t.add_argument("--mutation", action="append", default=[], choices=sorted(MUTATIONS), help=argparse.SUPPRESS)
    t.set_defaults(func=cmd_translate)

    m = sub.add_parser("member", help="decide acceptance of an ultimately periodic word")
    m.add_argument("automaton")
    m.add_argument("word")
    m.add_argument("-v", "--verbose", action="store_true")
    m.set_defaults(func=cmd_member)

    r = sub.add_parser("run", help="configurations reached after a finite word")
    r.add_argument("automaton")
    r.add_argument("word")
    r.set_defaults(func=cmd_run)

    d = sub.add_parser("difftest", help="differential test of the translation")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--cases", type=int, default=20)
    d.add_argument("--words", type=int, default=50)
    d.add_argument("--kind", default="all", choices=["all", "mixed", "none"] + [k.value for k in EVENT_KINDS])
    d.add_argument("--max-states", type=int, default=4)
    d.add_argument("--max-props", type=int, default=2)
    d.add_argument("--max-constant", type=int, default=3)
    d.add_argument("--prefix-len", type=int, default=6)
    d.add_argument("--period-len", type=int, default=6)
    d.add_argument("--mutation", action="append", default=[], choices=sorted(MUTATIONS))
    d.add_argument("--report", help="write the JSON report here")
    d.set_defaults(func=cmd_difftest)

    s = sub.add_parser("stats", help="translation size statistics")
    s.add_argument("input")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_stats)

    v = sub.add_parser("validate", help="parse and validate a document")
    v.add_argument("input")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    try:
        return args.func(args)
    except (io.ParseError, UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
