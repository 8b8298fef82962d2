"""Worklist construction and pruning shared by the clock removals."""

from __future__ import annotations

from collections import defaultdict, deque
from typing import Hashable, Iterable

from ..model import BOTTOM, POP, PUSH, Automaton, Transition


class Builder:
    """Collects the reachable part of a translated automaton."""

    def __init__(self):
        self.states: set = set()
        self.initial: set = set()
        self.transitions: set = set()
        self.queue: deque = deque()

    def add_initial(self, s: Hashable) -> None:
        self.initial.add(s)
        self.visit(s)

    def visit(self, s: Hashable) -> None:
        if s not in self.states:
            self.states.add(s)
            self.queue.append(s)

    def emit(self, t: Transition) -> None:
        if t not in self.transitions:
            self.transitions.add(t)
            self.visit(t.target)

    def drain(self, handler) -> None:
        while self.queue:
            handler(self.queue.popleft())


def prune(initial: Iterable, transitions: Iterable[Transition]) -> tuple[set, set, list]:
    """Drop dead ends and unreachable parts until a fixpoint.

    A pop is kept only if some reachable push stores its stack symbol.
    Removing states without successors cannot change the set of infinite runs.
    """
    trans = list(transitions)
    initial = set(initial)
    while True:
        # dead-end removal
        changed = True
        while changed:
            sources = {t.source for t in trans}
            kept = [t for t in trans if t.target in sources]
            changed = len(kept) != len(trans)
            trans = kept
        sources = {t.source for t in trans}
        init = {s for s in initial if s in sources}
        # forward reachability with pushed-symbol tracking
        by_src = defaultdict(list)
        for t in trans:
            by_src[t.source].append(t)
        reach = set(init)
        pushed = {BOTTOM}
        blocked = defaultdict(list)
        stack = list(init)
        used = []
        while stack:
            s = stack.pop()
            for t in by_src[s]:
                if t.op == POP and t.stack not in pushed:
                    blocked[t.stack].append(t)
                    continue
                used.append(t)
                if t.op == PUSH and t.stack not in pushed:
                    pushed.add(t.stack)
                    for bt in blocked.pop(t.stack, ()):
                        used.append(bt)
                        if bt.target not in reach:
                            reach.add(bt.target)
                            stack.append(bt.target)
                if t.target not in reach:
                    reach.add(t.target)
                    stack.append(t.target)
        if len(used) == len(trans):
            return reach, init, trans
        trans = used
        initial = init


def finish(
    base: Automaton,
    initial: Iterable,
    transitions: Iterable[Transition],
    clocks,
    acceptance_of,
) -> Automaton:
    """Assemble the pruned automaton; ``acceptance_of(states)`` yields the Buchi family."""
    states, init, trans = prune(initial, transitions)
    trans.sort(key=_transition_key)
    stack_alphabet = {t.stack for t in trans if t.op == PUSH}
    return Automaton(
        props=base.props,
        states=frozenset(states),
        initial=frozenset(init),
        clocks=frozenset(clocks),
        stack_alphabet=frozenset(stack_alphabet),
        transitions=tuple(trans),
        acceptance=tuple(acceptance_of(states)),
    )


def _transition_key(t: Transition):
    return (str(t.source), t.symbol.sort_key(), str(t.target), t.op, str(t.stack), sorted(map(str, t.guard)), sorted(c.name for c in t.resets))
