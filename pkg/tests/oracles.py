"""Independent oracles shared by several test modules."""

from fractions import Fraction
from math import ceil


def seifert_tau(e0, fibers, length):
    """tau(0) = 0, tau(i + 1) = tau(i) + 1 - e0 i - sum ceil(i b / a)."""
    t = [0]
    for i in range(length):
        step = 1 - e0 * i - sum(ceil(Fraction(i * b, a)) for a, b in fibers)
        t.append(t[-1] + step)
    return t


def tau_root_counts(e0, fibers, levels, length=4000):
    """Component counts of {i : tau(i) <= n} for n = min tau, min tau + 1, ..."""
    t = seifert_tau(e0, fibers, length)
    if not t[-1] > t[-2]:
        raise ValueError("tau sequence not yet increasing; raise length")
    low = min(t)
    out = []
    for n in range(low, low + levels):
        comps = 0
        inside = False
        for v in t:
            if v <= n and not inside:
                comps += 1
                inside = True
            elif v > n:
                inside = False
        out.append(comps)
    return out
