"""Pure-Python successor kernel over integer-scaled configurations.

A configuration is ``(state, stack, vals, counter, flag, origin)``: ``stack``
holds stack-symbol ids above the bottom marker, ``vals`` the scaled normal
clock values, ``counter``/``flag`` drive degeneralization and ``origin`` is
carried through untouched.
"""


def step(row, configs, ev, delta, cap, acc, m):
    out = set()
    add = out.add
    for cfg in configs:
        q, stack, vals, c, flag, origin = cfg
        trans = row[q]
        if not trans:
            continue
        adv = tuple([v + delta if v + delta < cap else cap for v in vals])
        for guard, resets, op, gamma, target in trans:
            ok = True
            for slot, lo, lo_strict, hi, hi_strict, isnull in guard:
                v = adv[slot] if slot >= 0 else ev[~slot]
                if isnull:
                    if v >= 0:
                        ok = False
                        break
                    continue
                if v < lo or (lo_strict and v == lo) or v < 0:
                    ok = False
                    break
                if hi >= 0 and (v > hi or (hi_strict and v == hi)):
                    ok = False
                    break
            if not ok:
                continue
            if op == 2:
                if gamma == 0:
                    if stack:
                        continue
                    nstack = stack
                else:
                    if not stack or stack[-1] != gamma:
                        continue
                    nstack = stack[:-1]
            elif op == 1:
                nstack = stack + (gamma,)
            else:
                nstack = stack
            if resets:
                nv = list(adv)
                for r in resets:
                    nv[r] = 0
                nv = tuple(nv)
            else:
                nv = adv
            nc, nf = c, flag
            if m and acc[target] >> nc & 1:
                nc += 1
                if nc == m:
                    nc = 0
                    nf = 1
            add((target, nstack, nv, nc, nf, origin))
    return out


def run(rows, evs, deltas, configs, cap, acc, m):
    for row, ev, delta in zip(rows, evs, deltas):
        if not configs:
            break
        configs = step(row, configs, ev, delta, cap, acc, m)
    return configs
