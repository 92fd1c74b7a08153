"""Operator-valued moments and cumulants of rotated free variables.

Y_j = sum_i X_i (x) u_ij with X_1..X_d free, and E = phi (x) id.  Words are
Y_{j_1} b_1 Y_{j_2} b_2 ... Y_{j_n} b_n with b_k in the free *-algebra.
Scalars phi(...) commute with everything, so every expectation lands in the
free algebra with the cumulant parameters as coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import product
from typing import Iterable, Sequence

from .cumulants import FreeFamilySpec, joint_free_moment
from .errors import ArgumentError, TruncationError
from .freealg import FreePolynomial, Generator
from .ncpart import SetPartition, enumerate_nc, mobius_to_top
from .presentations import Presentation


@dataclass(frozen=True)
class OpWord:
    """Pairs (column j_k, algebra element b_k)."""

    slots: tuple[tuple[int, FreePolynomial], ...]

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple((int(j), b) for j, b in self.slots))
        if not self.slots:
            raise ArgumentError("an operator word needs at least one letter")

    @classmethod
    def of(cls, d: int, columns: Sequence[int], bs: Sequence[FreePolynomial] | None = None) -> "OpWord":
        if bs is None:
            bs = [FreePolynomial.one(d)] * len(columns)
        if len(bs) != len(columns):
            raise ArgumentError("need one b per column index")
        return cls(tuple(zip(columns, bs)))

    def __len__(self):
        return len(self.slots)

    @property
    def columns(self) -> tuple[int, ...]:
        return tuple(j for j, _ in self.slots)

    def __str__(self):
        return " ".join(f"Y{j}" + ("" if b == FreePolynomial.one(b.d) else f"({b})") for j, b in self.slots)


@dataclass(frozen=True)
class RotatedFamily:
    family: FreeFamilySpec
    presentation: Presentation | None = None

    def __post_init__(self):
        if self.presentation is not None and self.presentation.d != self.family.d:
            raise ArgumentError("family and presentation disagree on d")

    @property
    def d(self) -> int:
        return self.family.d

    def check(self, w: OpWord):
        if len(w) > self.family.order:
            raise TruncationError(f"word of length {len(w)} past truncation {self.family.order}")
        for j, b in w.slots:
            if not 1 <= j <= self.d:
                raise ArgumentError(f"column {j} outside 1..{self.d}")
            if b.d != self.d:
                raise ArgumentError("b over the wrong d")


def _rotated_word(d: int, rows: Sequence[int], w: OpWord) -> FreePolynomial:
    """u_{i_1 j_1} b_1 u_{i_2 j_2} b_2 ... b_n."""
    out = FreePolynomial.one(d)
    for i, (j, b) in zip(rows, w.slots):
        out = out * FreePolynomial.monomial(d, (Generator(i, j),)) * b
    return out


@lru_cache(maxsize=65536)
def _joint_moment(family: FreeFamilySpec, rows: tuple[int, ...]):
    return joint_free_moment(family, rows)


@lru_cache(maxsize=65536)
def _moment(family: FreeFamilySpec, w: OpWord) -> FreePolynomial:
    d = family.d
    total = FreePolynomial.zero(d)
    for rows in product(range(1, d + 1), repeat=len(w)):
        m = _joint_moment(family, rows)
        if m:
            total = total + m * _rotated_word(d, rows, w)
    return total


def opval_moment(fam: RotatedFamily, w: OpWord) -> FreePolynomial:
    """E(Y_{j_1} b_1 ... Y_{j_n} b_n)."""
    fam.check(w)
    return _moment(fam.family, w)


def opval_moment_nested(fam: RotatedFamily, w: OpWord, pi: SetPartition) -> FreePolynomial:
    """E_pi by collapsing interval blocks innermost first.

    A collapsed block's moment M is absorbed into the b of the letter just
    before it, or pulled out to the left when nothing precedes it.
    """
    if pi.n != len(w):
        raise ArgumentError(f"partition of {pi.n} points for a word of length {len(w)}")
    d = fam.d
    prefix = FreePolynomial.one(d)
    slots = {k: s for k, s in enumerate(w.slots, 1)}
    alive = list(range(1, len(w) + 1))
    blocks = [set(b) for b in pi.blocks]
    while blocks:
        pos = {k: t for t, k in enumerate(alive)}
        for bi, block in enumerate(blocks):
            idx = sorted(pos[k] for k in block)
            if idx[-1] - idx[0] == len(idx) - 1:
                break
        else:
            raise ArgumentError(f"{pi} has no interval block; is it crossing?")
        block = blocks.pop(bi)
        members = sorted(block)
        m = opval_moment(fam, OpWord(tuple(slots[k] for k in members)))
        first = pos[members[0]]
        if first == 0:
            prefix = prefix * m
        else:
            k = alive[first - 1]
            j, b = slots[k]
            slots[k] = (j, b * m)
        alive = [k for k in alive if k not in block]
    return prefix


def opval_cumulant_mobius(fam: RotatedFamily, w: OpWord) -> FreePolynomial:
    """kappa^B_n by Moebius inversion of nested moments over NC(n)."""
    fam.check(w)
    total = FreePolynomial.zero(fam.d)
    for pi in enumerate_nc(len(w)):
        mu = mobius_to_top(pi)
        if mu:
            total = total + mu * opval_moment_nested(fam, w, pi)
    return total


def opval_cumulant_closed(fam: RotatedFamily, w: OpWord) -> FreePolynomial:
    """sum_i kappa_n(X_i) u_{i j_1} b_1 ... u_{i j_n} b_n."""
    fam.check(w)
    n, d = len(w), fam.d
    total = FreePolynomial.zero(d)
    for i in range(1, d + 1):
        k = fam.family.kappa(n, i)
        if k:
            total = total + k * _rotated_word(d, [i] * n, w)
    return total


def freeness_constraints(
    fam: RotatedFamily,
    n: int,
    jword: Sequence[int],
    bs: Sequence[FreePolynomial] | None = None,
) -> list[FreePolynomial]:
    """Parameter-free polynomials that vanish when the Y's stay free over B.

    The closed-form cumulant is a linear form in the kappa_n(X_i).  With the
    kappa's treated as independent indeterminates, the form vanishes iff each
    coefficient does; under identical distribution there is a single kappa_n
    and a single summed coefficient.
    """
    jword = tuple(jword)
    if len(jword) != n or n < 2:
        raise ArgumentError("jword must have length n >= 2")
    if len(set(jword)) == 1:
        raise ArgumentError("constant column words impose no freeness constraint")
    d = fam.d
    sym = RotatedFamily(FreeFamilySpec.symbolic(d, n, fam.family.identical), fam.presentation)
    closed = opval_cumulant_closed(sym, OpWord.of(d, jword, bs))
    parts = closed.by_monomial()
    return [parts[m] for m in sorted(parts)]


def b_tuples(d: int, n: int, b_degree: int) -> Iterable[tuple[FreePolynomial, ...]]:
    """Tuples of n monomial b's (words in the generators) of total degree <= b_degree."""
    gens = [Generator(i, j) for i in range(1, d + 1) for j in range(1, d + 1)]

    def words(length):
        return [tuple(w) for w in product(gens, repeat=length)]

    def rec(k, budget):
        if k == n:
            yield ()
            return
        for length in range(budget + 1):
            for w in words(length):
                for rest in rec(k + 1, budget - length):
                    yield (FreePolynomial.monomial(d, w),) + rest

    yield from rec(0, b_degree)


def sum_polys(polys: Iterable[FreePolynomial], d: int) -> FreePolynomial:
    return reduce(lambda a, b: a + b, polys, FreePolynomial.zero(d))


__all__ = [
    "OpWord",
    "RotatedFamily",
    "b_tuples",
    "freeness_constraints",
    "opval_cumulant_closed",
    "opval_cumulant_mobius",
    "opval_moment",
    "opval_moment_nested",
]
