# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled successor kernel; same contract as ``_kernel_py``."""


cpdef set step(list row, object configs, tuple ev, long delta, long cap, list acc, int m):
    cdef set out = set()
    cdef tuple cfg, stack, nstack, vals, adv, guard, resets, tr, atom
    cdef list nv, trans
    cdef long v, lo, hi, slot, q, c, nc, flag, nf, target, op, gamma, r
    cdef bint ok
    for cfg in configs:
        q = cfg[0]
        trans = row[q]
        if not trans:
            continue
        stack = cfg[1]
        vals = cfg[2]
        c = cfg[3]
        flag = cfg[4]
        nv = []
        for v in vals:
            v += delta
            nv.append(v if v < cap else cap)
        adv = tuple(nv)
        for tr in trans:
            guard = tr[0]
            ok = True
            for atom in guard:
                slot = atom[0]
                v = adv[slot] if slot >= 0 else ev[~slot]
                if atom[5]:
                    if v >= 0:
                        ok = False
                        break
                    continue
                lo = atom[1]
                if v < 0 or v < lo or (atom[2] and v == lo):
                    ok = False
                    break
                hi = atom[3]
                if hi >= 0 and (v > hi or (atom[4] and v == hi)):
                    ok = False
                    break
            if not ok:
                continue
            op = tr[2]
            gamma = tr[3]
            if op == 2:
                if gamma == 0:
                    if len(stack):
                        continue
                    nstack = stack
                else:
                    if not len(stack) or stack[len(stack) - 1] != gamma:
                        continue
                    nstack = stack[:len(stack) - 1]
            elif op == 1:
                nstack = stack + (gamma,)
            else:
                nstack = stack
            resets = tr[1]
            if resets:
                nv = list(adv)
                for r in resets:
                    nv[r] = 0
                vals = tuple(nv)
            else:
                vals = adv
            target = tr[4]
            nc = c
            nf = flag
            if m and (<long>acc[target] >> nc) & 1:
                nc += 1
                if nc == m:
                    nc = 0
                    nf = 1
            out.add((target, nstack, vals, nc, nf, cfg[5]))
    return out


def run(list rows, list evs, list deltas, object configs, long cap, list acc, int m):
    cdef Py_ssize_t i
    for i in range(len(rows)):
        if not configs:
            break
        configs = step(rows[i], configs, evs[i], deltas[i], cap, acc, m)
    return configs
