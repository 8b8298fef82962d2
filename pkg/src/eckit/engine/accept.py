"""Buchi acceptance of ultimately periodic timed nested words."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ..model import Automaton
from ..words import UpWord, stable_valuation
from . import kernel as _kernel
from .compiled import compiled


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    prefix_configs: int
    boundary_nodes: int
    edges: int


def word_scale(up: UpWord) -> int:
    dens = [Fraction(t).denominator for _, t in up.prefix.letters]
    dens += [Fraction(t).denominator for _, t in up.period.letters]
    dens.append(up.period_duration.denominator)
    return lcm(*dens)


def explore(a: Automaton, up: UpWord, kernel=None) -> Verdict:
    k = kernel or _kernel.active()
    scale = word_scale(up)
    comp = compiled(a)
    n, m = len(up.prefix), len(up.period)
    if comp.event:
        sv = stable_valuation(up, comp.event, Fraction(a.max_constant + 1))
        copies, loop_start = sv.copies, sv.loop_start
        evs = [tuple(comp.scale_value(v, scale) for v in row) for row in sv.rows]
    else:
        # copy 1 is the first copy whose entry delay repeats forever
        copies, loop_start = 2, n + m
        evs = [()] * (n + 2 * m)
    fw = up.unroll(copies)
    times = [comp.scale_value(t, scale) for _, t in fw.letters]
    rows = [comp.row(s, scale) for s, _ in fw.letters]
    cap = comp.cap(scale)
    deltas = [times[0]] + [times[i] - times[i - 1] for i in range(1, len(times))]
    zeros = (0,) * len(comp.normal)

    configs = {(q, (), zeros, 0, 0, 0) for q in comp.initial}
    configs = k.run(rows[:loop_start], evs[:loop_start], deltas[:loop_start], configs, cap, comp.acc, 0)
    prefix_count = len(configs)
    if not configs:
        return Verdict(False, 0, 0, 0)
    depth = {len(c[1]) for c in configs}
    assert len(depth) == 1, "runs disagree on the stack height after the prefix"

    lo, hi = loop_start, loop_start + m
    p_rows, p_evs, p_deltas = rows[lo:hi], evs[lo:hi], deltas[lo:hi]
    node_id: dict = {}
    nodes: list = []

    def intern(key):
        i = node_id.get(key)
        if i is None:
            i = node_id[key] = len(nodes)
            nodes.append(key)
        return i

    for q, _, vals, _, _, _ in configs:
        intern((q, vals, 0))
    edges: dict = {}
    done = 0
    while done < len(nodes):
        batch = {(q, (), vals, c, 0, i) for i, (q, vals, c) in enumerate(nodes[done:], start=done)}
        done = len(nodes)
        out = k.run(p_rows, p_evs, p_deltas, batch, cap, comp.acc, comp.m)
        for q, stack, vals, c, flag, origin in out:
            assert not stack, "period copy left symbols on the stack"
            key = (origin, intern((q, vals, c)))
            if flag or key not in edges:
                edges[key] = flag
    return Verdict(_has_accepting_cycle(len(nodes), edges), prefix_count, len(nodes), len(edges))


def _has_accepting_cycle(n: int, edges: dict) -> bool:
    flagged = [e for e, f in edges.items() if f]
    if not flagged:
        return False
    src = np.fromiter((u for u, _ in edges), dtype=np.int64, count=len(edges))
    dst = np.fromiter((v for _, v in edges), dtype=np.int64, count=len(edges))
    g = csr_matrix((np.ones(len(edges), dtype=np.int8), (src, dst)), shape=(n, n))
    _, labels = connected_components(g, directed=True, connection="strong")
    return any(labels[u] == labels[v] for u, v in flagged)


def accepts(a: Automaton, up: UpWord, kernel=None) -> bool:
    """True iff some run on the unrolled word visits every Buchi component infinitely often."""
    return explore(a, up, kernel).accepted
