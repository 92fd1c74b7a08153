"""Univariate polynomials over Q: square-free parts, rational roots and
Sturm-sequence real root counting.

Polynomials are lists of coefficients in ascending degree.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import ArgumentError

Poly = list[Fraction]


def trim(p: Sequence) -> Poly:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence) -> int:
    return len(trim(p)) - 1


def evaluate(p: Sequence, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Sequence) -> Poly:
    return trim([k * c for k, c in enumerate(p)][1:])


def sub(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    return trim([(p[k] if k < len(p) else 0) - (q[k] if k < len(q) else 0) for k in range(n)])


def divmod_poly(a: Sequence, b: Sequence) -> tuple[Poly, Poly]:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / lead
        q[shift] = f
        for k, c in enumerate(b):
            r[k + shift] -= f * c
        r = trim(r)
    return trim(q), r


def monic(p: Sequence) -> Poly:
    p = trim(p)
    return [c / p[-1] for c in p] if p else p


def gcd(a: Sequence, b: Sequence) -> Poly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def squarefree_part(p: Sequence) -> Poly:
    p = trim(p)
    if len(p) <= 1:
        return monic(p)
    g = gcd(p, derivative(p))
    return monic(divmod_poly(p, g)[0])


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [k for k in range(1, math.isqrt(n) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def rational_roots(p: Sequence) -> list[Fraction]:
    """Distinct rational roots, by the rational root theorem."""
    p = trim(p)
    if not p:
        raise ArgumentError("the zero polynomial has every number as a root")
    roots = []
    while p and p[0] == 0:
        roots.append(Fraction(0))
        p = p[1:]
    if len(p) > 1:
        lcm = math.lcm(*(c.denominator for c in p))
        ints = [int(c * lcm) for c in p]
        for num in _divisors(ints[0]):
            for den in _divisors(ints[-1]):
                for cand in (Fraction(num, den), Fraction(-num, den)):
                    if evaluate(ints, cand) == 0:
                        roots.append(cand)
    return sorted(set(roots))


def sturm_sequence(p: Sequence) -> list[Poly]:
    """Sturm chain of the square-free part of ``p``."""
    f = squarefree_part(p)
    seq = [f, derivative(f)]
    while seq[-1]:
        seq.append([-c for c in divmod_poly(seq[-2], seq[-1])[1]])
    return [s for s in seq if s]


def _sign_at(p: Poly, x) -> int:
    if x == math.inf:
        v = p[-1]
    elif x == -math.inf:
        v = p[-1] * (-1) ** (len(p) - 1)
    else:
        v = evaluate(p, x)
    return (v > 0) - (v < 0)


def _variations(seq: list[Poly], x) -> int:
    signs = [s for s in (_sign_at(p, x) for p in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: Sequence, lo=-math.inf, hi=math.inf) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    p = trim(p)
    if not p:
        raise ArgumentError("the zero polynomial has infinitely many roots")
    if len(p) == 1:
        return 0
    seq = sturm_sequence(p)
    return _variations(seq, lo) - _variations(seq, hi)


def real_root_set(p: Sequence) -> tuple[list[Fraction], bool]:
    """Rational real roots of ``p`` and whether any irrational real root exists.

    The rational roots are divided out of the square-free part; the Sturm
    count of what remains tells whether further (irrational) real roots exist.
    """
    f = squarefree_part(p)
    if not f:
        raise ArgumentError("the zero polynomial has every number as a root")
    roots = rational_roots(f)
    rest = f
    for r in roots:
        rest = divmod_poly(rest, [-r, 1])[0]
    return roots, count_real_roots(rest) > 0
