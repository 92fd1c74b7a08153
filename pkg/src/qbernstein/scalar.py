"""Exact scalars: Laurent polynomials over Q in commuting named parameters.

A parameter monomial is a sorted tuple of ``(name, exponent)`` pairs with
nonzero exponents; the empty tuple is the constant monomial.  Parameters
such as ``k{4,1}`` stand for cumulants kappa_4(X_1).  Negative exponents are
representable here; whether a parameter may be inverted is decided by the
proof session that owns the computation.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from .errors import ArgumentError

Mono = tuple[tuple[str, int], ...]
ONE_MONO: Mono = ()

Number = Union[int, Fraction]


@lru_cache(maxsize=1 << 16)
def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for name, e in b:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted((k, e) for k, e in exps.items() if e))


def mono_inv(a: Mono) -> Mono:
    return tuple((k, -e) for k, e in a)


def mono_str(m: Mono) -> str:
    return " ".join(k if e == 1 else f"{k}^{e}" for k, e in m)


def mono_has_negative(m: Mono) -> bool:
    return any(e < 0 for _, e in m)


def fraction_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Scalar:
    """Immutable Laurent polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Mono, Number] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def const(cls, c: Number) -> "Scalar":
        return cls({ONE_MONO: c})

    @classmethod
    def param(cls, name: str, exponent: int = 1) -> "Scalar":
        if not exponent:
            return cls.const(1)
        return cls({((name, exponent),): 1})

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar.const(x)
        raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")

    @property
    def terms(self) -> dict[Mono, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(m == ONE_MONO for m in self._terms)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ArgumentError(f"{self} is not a rational constant")
        return self._terms.get(ONE_MONO, Fraction(0))

    def params(self) -> set[str]:
        return {k for m in self._terms for k, _ in m}

    def __add__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        other = Scalar.coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Scalar(out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        other = Scalar.coerce(other)
        out: dict[Mono, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Scalar(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) != 1:
                raise ArgumentError("only monomial scalars can be inverted")
            (m, c), = self._terms.items()
            return Scalar({tuple((n, e * k) for n, e in m): Fraction(1) / c ** -k})
        out = Scalar.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def evaluate(self, values: Mapping[str, Number]) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for name, e in m:
                try:
                    x = Fraction(values[name])
                except KeyError:
                    raise ArgumentError(f"no value for parameter {name}") from None
                if e < 0 and x == 0:
                    raise ArgumentError(f"parameter {name} inverted at value 0")
                v *= x ** e
            total += v
        return total

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m in sorted(self._terms):
            c = self._terms[m]
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not m:
                body = fraction_str(a)
            elif a == 1:
                body = mono_str(m)
            else:
                body = f"{fraction_str(a)} * {mono_str(m)}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Scalar({str(self)!r})"


def parse_scalar(text: str) -> Scalar:
    """Inverse of ``str(Scalar)``; parameters are written ``k{n,i}^e``."""
    from .freealg import parse_poly

    p = parse_poly(text, d=1)
    if p.degree() > 0:
        raise ArgumentError(f"{text!r} contains generators")
    return p.coefficient(())
