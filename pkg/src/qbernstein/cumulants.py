"""Scalar free cumulants: moment/cumulant transforms over NC(n), joint
moments of free families, semicircle recognition and free-CLT scaling."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import ArgumentError, TruncationError
from .ncpart import SetPartition, enumerate_nc, kernel_partition, mobius_to_top, refines
from .scalar import Scalar


@dataclass(frozen=True)
class DistributionSpec:
    """Free cumulants kappa_1..kappa_N of one variable, N the truncation order."""

    kappa: tuple[Scalar, ...]

    def __init__(self, kappa: Sequence):
        object.__setattr__(self, "kappa", tuple(Scalar.coerce(k) for k in kappa))
        if len(self.kappa) < 2:
            raise ArgumentError("a distribution needs truncation order N >= 2")

    @property
    def order(self) -> int:
        return len(self.kappa)

    def __getitem__(self, n: int) -> Scalar:
        """kappa_n, 1-based."""
        if n < 1:
            raise ArgumentError(f"cumulant order {n} < 1")
        if n > self.order:
            raise TruncationError(f"kappa_{n} requested but spec is truncated at {self.order}")
        return self.kappa[n - 1]

    @classmethod
    def symbolic(cls, index: int, order: int) -> "DistributionSpec":
        """kappa_n = parameter ``k{n,index}`` for n = 1..order."""
        return cls([Scalar.param(cumulant_param(n, index)) for n in range(1, order + 1)])

    @classmethod
    def semicircle(cls, order: int, mean=0, variance=1) -> "DistributionSpec":
        return cls([mean, variance] + [0] * (order - 2))

    def __str__(self):
        return "(" + ", ".join(str(k) for k in self.kappa) + ")"


def cumulant_param(n: int, index: int) -> str:
    return f"k{{{n},{index}}}"


@dataclass(frozen=True)
class FreeFamilySpec:
    """d free variables given by their marginal cumulants.

    Mixed cumulants of distinct variables are zero by construction; the joint
    law is never tabulated.
    """

    d: int
    specs: tuple[DistributionSpec, ...]
    identical: bool = False

    def __post_init__(self):
        object.__setattr__(self, "specs", tuple(self.specs))
        if self.d < 1 or len(self.specs) != self.d:
            raise ArgumentError(f"need exactly d={self.d} marginal specs, got {len(self.specs)}")
        if self.identical and any(s != self.specs[0] for s in self.specs):
            raise ArgumentError("identical flag set but marginals differ")
        orders = {s.order for s in self.specs}
        if len(orders) != 1:
            raise ArgumentError("marginals must share one truncation order")

    @classmethod
    def iid(cls, spec: DistributionSpec, d: int) -> "FreeFamilySpec":
        return cls(d, (spec,) * d, identical=True)

    @classmethod
    def symbolic(cls, d: int, order: int, identical: bool = False) -> "FreeFamilySpec":
        if identical:
            return cls.iid(DistributionSpec.symbolic(1, order), d)
        return cls(d, tuple(DistributionSpec.symbolic(i, order) for i in range(1, d + 1)))

    @property
    def order(self) -> int:
        return self.specs[0].order

    def kappa(self, n: int, i: int) -> Scalar:
        if not 1 <= i <= self.d:
            raise ArgumentError(f"variable index {i} outside 1..{self.d}")
        return self.specs[i - 1][n]


@lru_cache(maxsize=None)
def _block_types(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    counts = Counter(tuple(sorted(p.block_sizes())) for p in enumerate_nc(n))
    return tuple(sorted(counts.items()))


@lru_cache(maxsize=None)
def _mobius_types(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    weights: Counter = Counter()
    for p in enumerate_nc(n):
        weights[tuple(sorted(p.block_sizes()))] += mobius_to_top(p)
    return tuple(sorted((k, w) for k, w in weights.items() if w))


def _product(values: Sequence[Scalar], sizes: Sequence[int]) -> Scalar:
    out = Scalar.const(1)
    for s in sizes:
        out = out * values[s - 1]
    return out


def moments_from_cumulants(spec: DistributionSpec, m: int) -> tuple[Scalar, ...]:
    """m_k = sum over NC(k) of the product of kappa_|B|, for k = 1..m."""
    if m > spec.order:
        raise TruncationError(f"moments up to {m} need cumulants up to {m}, spec has {spec.order}")
    out = []
    for k in range(1, m + 1):
        total = Scalar()
        for sizes, count in _block_types(k):
            total = total + count * _product(spec.kappa, sizes)
        out.append(total)
    return tuple(out)


def cumulants_from_moments(moments: Sequence) -> DistributionSpec:
    """kappa_n = sum over NC(n) of m_pi * mu(pi, 1_n)."""
    ms = [Scalar.coerce(x) for x in moments]
    kappa = []
    for n in range(1, len(ms) + 1):
        total = Scalar()
        for sizes, weight in _mobius_types(n):
            total = total + weight * _product(ms, sizes)
        kappa.append(total)
    return DistributionSpec(kappa)


@lru_cache(maxsize=4096)
def _admissible(kernel: SetPartition) -> tuple[tuple[tuple[int, ...], ...], ...]:
    return tuple(p.blocks for p in enumerate_nc(kernel.n) if refines(p, kernel))


def joint_free_moment(family: FreeFamilySpec, word: Sequence[int]) -> Scalar:
    """phi(X_{i_1} ... X_{i_n}) for a free family.

    Only partitions whose blocks stay inside one variable contribute, since
    mixed free cumulants of free variables vanish.
    """
    word = tuple(word)
    if not word:
        return Scalar.const(1)
    if len(word) > family.order:
        raise TruncationError(f"word of length {len(word)} past truncation {family.order}")
    for i in word:
        if not 1 <= i <= family.d:
            raise ArgumentError(f"variable index {i} outside 1..{family.d}")
    total = Scalar()
    for blocks in _admissible(kernel_partition(word)):
        term = Scalar.const(1)
        for b in blocks:
            term = term * family.kappa(len(b), word[b[0] - 1])
        total = total + term
    return total


def is_semicircular(spec: DistributionSpec) -> tuple[bool, tuple[Scalar, Scalar]]:
    """Whether kappa_n = 0 for 3 <= n <= N; also returns (mean, variance)."""
    if spec.order < 3:
        raise ArgumentError("semicircle test needs truncation order >= 3")
    ok = all(k.is_zero() for k in spec.kappa[2:])
    return ok, (spec.kappa[0], spec.kappa[1])


def clt_scaled_spec(spec: DistributionSpec, count: int) -> DistributionSpec:
    """Cumulants of (a_1 + ... + a_count) / sqrt(count) for free copies a_i.

    kappa_n scales by count^(1 - n/2); ``count`` must be a perfect square so
    the result stays rational.
    """
    if count < 1:
        raise ArgumentError("count must be positive")
    if not spec.kappa[0].is_zero():
        raise ArgumentError("CLT scaling needs a centered spec (kappa_1 = 0)")
    root = math.isqrt(count)
    if root * root != count:
        raise ArgumentError(f"count {count} is not a perfect square")
    return DistributionSpec(
        [k * Fraction(root) ** (2 - n) for n, k in enumerate(spec.kappa, 1)]
    )


def semicircle_moments(m: int, variance=1) -> tuple[Fraction, ...]:
    """Moments of the centered semicircle law: Catalan numbers at even orders."""
    out = []
    for k in range(1, m + 1):
        if k % 2:
            out.append(Fraction(0))
        else:
            h = k // 2
            out.append(Fraction(math.comb(2 * h, h), h + 1) * Fraction(variance) ** h)
    return tuple(out)
