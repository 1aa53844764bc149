"""Independent reference computations used by the tests.

Nothing here imports the package: everything is recomputed from the model
definition with exact fractions or naive loops.
"""

from fractions import Fraction
from itertools import combinations, product


def enumerate_outcomes(n, k, a, b):
    """Yield ``(locks, signal, probability)`` for every lock set and signal under uniform locks."""
    cfgs = list(combinations(range(n), k))
    w = Fraction(1, len(cfgs)) if isinstance(a, Fraction) else 1.0 / len(cfgs)
    for locks in cfgs:
        for s in product((0, 1), repeat=n):
            pr = w
            for i in range(n):
                if i in locks:
                    pr *= a if s[i] else 1 - a
                else:
                    pr *= (1 - b) if s[i] else b
            yield locks, s, pr


def minus_count_by_enumeration(n, k, a, b):
    out = [0 * a] * (n + 1)
    for _, s, pr in enumerate_outcomes(n, k, a, b):
        out[n - sum(s)] += pr
    return out


def posterior_by_enumeration(n, k, a, b, x):
    """``(p_minus, p_plus)`` for box 0 given x minuses; None where undefined."""
    num = {0: 0 * a, 1: 0 * a}
    den = {0: 0 * a, 1: 0 * a}
    for locks, s, pr in enumerate_outcomes(n, k, a, b):
        if n - sum(s) != x:
            continue
        den[s[0]] += pr
        if 0 not in locks:
            num[s[0]] += pr
    return tuple(num[v] / den[v] if den[v] else None for v in (0, 1))


def fill_and_switch(n, x, m, d):
    """Drop bombs one at a time in the fill-and-switch order; return (minus counts, plus counts)."""
    minus, plus = [0] * x, [0] * (n - x)
    target_minus, target_plus = d, 1
    phase = "minus"
    for _ in range(m):
        while True:
            if phase == "minus":
                # fill layer by layer: the emptiest minus box below target gets the bomb
                j = min(range(x), key=lambda i: (minus[i], i))
                if minus[j] < target_minus:
                    minus[j] += 1
                    break
                phase = "plus"
            else:
                j = min(range(n - x), key=lambda i: (plus[i], i))
                if plus[j] < target_plus:
                    plus[j] += 1
                    break
                phase = "minus"
                target_minus += 1
                target_plus += 1
    return minus, plus


def compositions(m, parts):
    if parts == 1:
        yield (m,)
        return
    for first in range(m + 1):
        for rest in compositions(m - first, parts - 1):
            yield (first,) + rest


def brute_max(weights, q, m):
    """Maximum of sum_i w_i (1 - q**u_i) over every composition of m into len(weights) parts."""
    best = None
    for c in compositions(m, len(weights)):
        v = sum(w * (1 - q**u) for w, u in zip(weights, c))
        if best is None or v > best:
            best = v
    return best
