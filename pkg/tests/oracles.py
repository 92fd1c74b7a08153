"""Brute-force reference implementations shared by the tests.

Each one is deliberately naive and independent of the package internals it
checks.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def catalan(n: int) -> int:
    c = [1]
    for m in range(1, n + 1):
        c.append(sum(c[k] * c[m - 1 - k] for k in range(m)))
    return c[n]


def all_set_partitions(n: int):
    """Lists of blocks, via the 'insert element n' recursion."""
    if n == 0:
        yield []
        return
    for p in all_set_partitions(n - 1):
        for k in range(len(p)):
            yield [b + [n] if idx == k else b for idx, b in enumerate(p)]
        yield p + [[n]]


def crosses(blocks) -> bool:
    """Scan every quadruple a < b < c < e with a, c in one block and b, e in another."""
    label = {x: k for k, b in enumerate(blocks) for x in b}
    n = len(label)
    for a, b, c, e in combinations(range(1, n + 1), 4):
        if label[a] == label[c] and label[b] == label[e] and label[a] != label[b]:
            return True
    return False


def nc_by_filter(n: int) -> set:
    out = set()
    for p in all_set_partitions(n):
        if not crosses(p):
            out.add(tuple(sorted(tuple(sorted(b)) for b in p)))
    return out


def moments_by_expansion(kappa, m: int):
    """m_k by summing over all NC(k) from the filter enumeration (plain Fractions)."""
    out = []
    for k in range(1, m + 1):
        total = Fraction(0)
        for p in nc_by_filter(k):
            term = Fraction(1)
            for b in p:
                term *= kappa[len(b) - 1]
            total += term
        out.append(total)
    return out


def semicircle_moments(m: int):
    return [Fraction(0) if k % 2 else Fraction(catalan(k // 2)) for k in range(1, m + 1)]
