"""Compare the compiled and pure-Python successor kernels on translated automata.

    python3 benchmarks/bench_kernel.py [--cases N] [--words N] [--repeat N]
"""

from __future__ import annotations

import argparse
import time

from eckit.difftest import GenConfig, gen_automaton, gen_up_word
from eckit.engine import explore, kernel
from eckit.translate import remove_all_event_clocks
from eckit.words import ClockKind


def workload(cases: int, words: int):
    cfg = GenConfig(seed=11, clock_menu=(ClockKind.ABS_PREDICTOR,))
    pairs = []
    for case in range(cases):
        a = gen_automaton(cfg, cfg.case_rng(case, "automaton"))
        b, _ = remove_all_event_clocks(a)
        rng = cfg.case_rng(case, "words")
        pairs.extend((b, gen_up_word(cfg, rng, sorted(a.props))) for _ in range(words))
    return pairs


def timed(pairs, backend: str, repeat: int):
    kernel.use(backend)
    best, verdicts = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        verdicts = [explore(b, w).accepted for b, w in pairs]
        best = min(best, time.perf_counter() - t0)
    return best, verdicts


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cases", type=int, default=10)
    ap.add_argument("--words", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    pairs = workload(args.cases, args.words)
    # warm the per-automaton encodings so both backends time the kernel only
    timed(pairs, "python", 1)
    results = {}
    for backend in sorted(kernel.BACKENDS):
        results[backend] = timed(pairs, backend, args.repeat)
        print(f"{backend:>7}: {results[backend][0]:.3f} s for {len(pairs)} membership queries")
    if len(results) == 2:
        (tc, vc), (tp, vp) = results["cython"], results["python"]
        assert vc == vp, "backends disagree"
        print(f"speed-up {tp / tc:.2f}x, verdicts identical")


if __name__ == "__main__":
    main()
