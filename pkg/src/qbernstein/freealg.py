"""The free *-algebra on self-adjoint generators u[i,j], 1 <= i,j <= d.

Coefficients are exact: rationals times monomials in named parameters (see
:mod:`qbernstein.scalar`).  Internally a polynomial is a dict keyed by
``(word, parameter monomial)`` with nonzero ``Fraction`` values.

Text form, used for transcripts::

    -3/2 * k{4,1} u[1,1] u[1,2] + u[2,2] u[2,2] - 1

Printing is canonical (terms in degree-lex word order) and ``parse_poly``
inverts it exactly.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import ArgumentError, ResourceError
from .scalar import ONE_MONO, Mono, Scalar, fraction_str, mono_has_negative, mono_mul, mono_str

MAX_TERMS = 10**6


class Generator(NamedTuple):
    i: int
    j: int

    def __str__(self):
        return f"u[{self.i},{self.j}]"


Word = tuple[Generator, ...]


def word_key(w: Word):
    """Canonical order on words: degree first, then lexicographic on (i, j)."""
    return (len(w), w)


def word_str(w: Word) -> str:
    return " ".join(str(g) for g in w)


class FreePolynomial:
    """Immutable element of the free *-algebra with parameterised coefficients."""

    __slots__ = ("d", "_terms", "_hash")

    def __init__(self, d: int, terms: Mapping[tuple[Word, Mono], Fraction] | None = None, *, _clean=False):
        if d < 1:
            raise ArgumentError("d must be positive")
        self.d = d
        if _clean:
            self._terms = terms
        else:
            self._terms = {}
            for (w, m), c in (terms or {}).items():
                c = Fraction(c)
                if c:
                    for g in w:
                        if not (1 <= g[0] <= d and 1 <= g[1] <= d):
                            raise ArgumentError(f"generator {g} outside 1..{d}")
                    self._terms[(tuple(Generator(*g) for g in w), m)] = c
        self._hash = None
        if len(self._terms) > MAX_TERMS:
            raise ResourceError(f"polynomial exceeds {MAX_TERMS} terms")

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, d: int) -> "FreePolynomial":
        return cls(d, {}, _clean=True)

    @classmethod
    def one(cls, d: int) -> "FreePolynomial":
        return cls(d, {((), ONE_MONO): Fraction(1)}, _clean=True)

    @classmethod
    def gen(cls, d: int, i: int, j: int) -> "FreePolynomial":
        return cls(d, {(((i, j),), ONE_MONO): 1})

    @classmethod
    def monomial(cls, d: int, word: Iterable, coeff=1) -> "FreePolynomial":
        word = tuple(word)
        return cls.scalar(d, coeff) * cls(d, {(word, ONE_MONO): 1})

    @classmethod
    def scalar(cls, d: int, s) -> "FreePolynomial":
        s = Scalar.coerce(s)
        return cls(d, {((), m): c for m, c in s.items()}, _clean=True)

    # inspection ---------------------------------------------------------

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def degree(self) -> int:
        return max((len(w) for w, _ in self._terms), default=-1)

    def words(self) -> list[Word]:
        return sorted({w for w, _ in self._terms}, key=word_key)

    def coefficient(self, word: Iterable) -> Scalar:
        word = tuple(Generator(*g) for g in word)
        return Scalar({m: c for (w, m), c in self._terms.items() if w == word})

    def params(self) -> set[str]:
        return {k for (_, m) in self._terms for k, _ in m}

    def inverted_params(self) -> set[str]:
        return {k for (_, m) in self._terms for k, e in m if e < 0}

    def by_monomial(self) -> dict[Mono, "FreePolynomial"]:
        """Split into parameter-free polynomials, one per parameter monomial."""
        parts: dict[Mono, dict] = {}
        for (w, m), c in self._terms.items():
            parts.setdefault(m, {})[(w, ONE_MONO)] = c
        return {m: FreePolynomial(self.d, t, _clean=True) for m, t in parts.items()}

    # arithmetic ---------------------------------------------------------

    def _check(self, other: "FreePolynomial"):
        if other.d != self.d:
            raise ArgumentError(f"mismatched d: {self.d} vs {other.d}")

    def _lift(self, other) -> "FreePolynomial":
        if isinstance(other, FreePolynomial):
            self._check(other)
            return other
        return FreePolynomial.scalar(self.d, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return FreePolynomial(self.d, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return FreePolynomial(self.d, {k: -c for k, c in self._terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict = {}
        for (w1, m1), c1 in self._terms.items():
            for (w2, m2), c2 in other._terms.items():
                k = (w1 + w2, mono_mul(m1, m2))
                v = out.get(k, 0) + c1 * c2
                if v:
                    out[k] = v
                else:
                    del out[k]
            if len(out) > MAX_TERMS:
                raise ResourceError(f"product exceeds {MAX_TERMS} terms")
        return FreePolynomial(self.d, out, _clean=True)

    def __rmul__(self, other):
        return self._lift(other) * self

    def __pow__(self, k: int):
        if k < 0:
            raise ArgumentError("negative powers of polynomials are undefined")
        out = FreePolynomial.one(self.d)
        for _ in range(k):
            out = out * self
        return out

    def adjoint(self) -> "FreePolynomial":
        """Reverse every word; rational and parameter coefficients are real."""
        return FreePolynomial(
            self.d, {(w[::-1], m): c for (w, m), c in self._terms.items()}, _clean=True
        )

    def __eq__(self, other):
        if not isinstance(other, FreePolynomial):
            return NotImplemented
        return self.d == other.d and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.d, frozenset(self._terms.items())))
        return self._hash

    # text form ----------------------------------------------------------

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: (word_key(t[0][0]), t[0][1]))

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for k, ((w, m), c) in enumerate(self.sorted_terms()):
            factors = " ".join(x for x in (mono_str(m), word_str(w)) if x)
            a = abs(c)
            if not factors:
                body = fraction_str(a)
            elif a == 1:
                body = factors
            else:
                body = f"{fraction_str(a)} * {factors}"
            if k == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(("- " if c < 0 else "+ ") + body)
        return " ".join(out)

    def __repr__(self):
        return f"FreePolynomial(d={self.d}, {str(self)!r})"


def gen(d: int, i: int, j: int) -> FreePolynomial:
    return FreePolynomial.gen(d, i, j)


def unit(d: int) -> FreePolynomial:
    return FreePolynomial.one(d)


def poly_mul(p: FreePolynomial, q: FreePolynomial) -> FreePolynomial:
    return p * q


def poly_adjoint(p: FreePolynomial) -> FreePolynomial:
    return p.adjoint()


def univariate_at(coeffs: Sequence, g: Generator, d: int) -> FreePolynomial:
    """sum_k coeffs[k] * g^k (coefficients in ascending degree)."""
    terms = {}
    for k, c in enumerate(coeffs):
        c = Fraction(c)
        if c:
            terms[((Generator(*g),) * k, ONE_MONO)] = c
    return FreePolynomial(d, terms)


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<gen>u\[\s*(?P<gi>\d+)\s*,\s*(?P<gj>\d+)\s*\])(?:\^(?P<gexp>\d+))?"
    r"|(?P<num>\d+(?:/\d+)?)"
    r"|(?P<param>[A-Za-z_]\w*(?:\{[^}]*\})?)(?:\^(?P<pexp>-?\d+))?"
    r"|(?P<op>[*+-])"
    r")"
)


def parse_poly(text: str, d: int) -> FreePolynomial:
    """Parse the canonical text form (and lenient variants of it)."""
    pos, n = 0, len(text)
    terms: dict = {}
    sign, coeff, mono, word = 1, Fraction(1), ONE_MONO, []
    have_term = False

    def flush():
        nonlocal sign, coeff, mono, word, have_term
        if have_term:
            key = (tuple(word), mono)
            v = terms.get(key, 0) + sign * coeff
            if v:
                terms[key] = v
            else:
                terms.pop(key, None)
        sign, coeff, mono, word, have_term = 1, Fraction(1), ONE_MONO, [], False

    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ArgumentError(f"cannot parse {text[pos:pos + 20]!r}")
        pos = m.end()
        if m.group("gen"):
            i, j = int(m.group("gi")), int(m.group("gj"))
            if not (1 <= i <= d and 1 <= j <= d):
                raise ArgumentError(f"generator u[{i},{j}] outside 1..{d}")
            word.extend([Generator(i, j)] * int(m.group("gexp") or 1))
            have_term = True
        elif m.group("num"):
            coeff *= Fraction(m.group("num"))
            have_term = True
        elif m.group("param"):
            mono = mono_mul(mono, ((m.group("param"), int(m.group("pexp") or 1)),))
            have_term = True
        else:
            op = m.group("op")
            if op == "*":
                continue
            if have_term:
                flush()
            if op == "-":
                sign = -sign
    flush()
    return FreePolynomial(d, terms)


# rewriting -----------------------------------------------------------------


class RewriteRule(NamedTuple):
    """Two-letter rewrite ``pattern -> sign * replacement`` (or -> 0).

    ``relation``/``scale``/``star`` record the justification:
    pattern - sign*replacement == scale * R (or scale * R* when ``star``),
    where R is relation number ``relation`` of the owning presentation.
    """

    pattern: tuple[Generator, Generator]
    replacement: tuple[Generator, Generator] | None
    sign: int = 1
    relation: int | None = None
    scale: Fraction = Fraction(1)
    star: bool = False

    def check(self):
        if len(self.pattern) != 2:
            raise ArgumentError("rewrite patterns have two letters")
        if self.replacement is not None:
            if word_key(tuple(self.replacement)) >= word_key(tuple(self.pattern)):
                raise ArgumentError(f"rule {self} does not decrease the word order")
        return self

    def difference(self, d: int) -> FreePolynomial:
        p = FreePolynomial.monomial(d, self.pattern)
        if self.replacement is None:
            return p
        return p - FreePolynomial.monomial(d, self.replacement, self.sign)


class Rewriter:
    """Leftmost-first application of two-letter rules, memoised per word."""

    def __init__(self, rules: Iterable[RewriteRule]):
        self.rules: dict = {}
        for r in rules:
            r.check()
            key = tuple(r.pattern)
            if key in self.rules and self.rules[key] != r:
                raise ArgumentError(f"two rules for pattern {key}")
            self.rules[key] = r
        self._memo: dict = {}

    def reduce_word(self, w: Word):
        """Return ``(sign, normal_form_or_None, steps)``.

        Each step is ``(sign_before, left, rule, right)``: the word
        ``sign_before * left+pattern+right`` was rewritten at that point.
        """
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        rules = self.rules
        cur, sign, steps = list(w), 1, []
        i = 0
        while i < len(cur) - 1:
            r = rules.get((cur[i], cur[i + 1]))
            if r is None:
                i += 1
                continue
            left, right = tuple(cur[:i]), tuple(cur[i + 2:])
            steps.append((sign, left, r, right))
            if r.replacement is None:
                cur = None
                break
            cur[i:i + 2] = r.replacement
            sign *= r.sign
            i = max(i - 1, 0)
        out = (sign, None if cur is None else tuple(cur), tuple(steps))
        self._memo[w] = out
        return out

    def reduce(self, p: FreePolynomial, trace: list | None = None) -> FreePolynomial:
        """Normal form of ``p``.

        If ``trace`` is a list, it receives ``(left, relation, right, star)``
        quadruples with  p - reduce(p) = sum left * R_relation^(*) * right.
        """
        d = p.d
        out: dict = {}
        for (w, m), c in p.items():
            sign, nf, steps = self.reduce_word(w)
            if nf is not None:
                k = (nf, m)
                v = out.get(k, 0) + sign * c
                if v:
                    out[k] = v
                else:
                    del out[k]
            if trace is not None:
                for s, left, r, right in steps:
                    if r.relation is None:
                        raise ArgumentError(f"rule {r} carries no justification")
                    lcoef = FreePolynomial(d, {(left, m): c * s * r.scale}, _clean=True)
                    rpoly = FreePolynomial(d, {(right, ONE_MONO): Fraction(1)}, _clean=True)
                    trace.append((lcoef, r.relation, rpoly, r.star))
        return FreePolynomial(d, out, _clean=True)


def monomial_reduce(p: FreePolynomial, rules: Iterable[RewriteRule]) -> FreePolynomial:
    """Apply two-letter rewrite rules leftmost-first until no pattern remains."""
    return Rewriter(rules).reduce(p)


# evaluation ----------------------------------------------------------------


def _as_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=object)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ArgumentError("assignment values must be square matrices")
    return np.vectorize(Fraction, otypes=[object])(m)


def eval_matrix(
    p: FreePolynomial,
    assignment: Mapping,
    params: Mapping[str, object] | None = None,
    nonzero: Iterable[str] = (),
) -> np.ndarray:
    """Evaluate ``p`` homomorphically with generators sent to rational matrices."""
    params = dict(params or {})
    mats = {Generator(*g): _as_matrix(a) for g, a in assignment.items()}
    dims = {m.shape[0] for m in mats.values()}
    if len(dims) > 1:
        raise ArgumentError(f"matrices of different sizes {sorted(dims)}")
    if not dims:
        raise ArgumentError("empty assignment")
    (size,) = dims
    for name in nonzero:
        if name in params and Fraction(params[name]) == 0:
            raise ArgumentError(f"parameter {name} is declared nonzero but assigned 0")
    # work with integer matrices L*M and rescale each word by L^-len at the end
    scale = math.lcm(*(x.denominator for m in mats.values() for x in m.flat))
    ints = {g: np.vectorize(lambda x: int(x * scale), otypes=[object])(m) for g, m in mats.items()}
    cache: dict = {(): np.eye(size, dtype=int).astype(object)}

    def word_value(w):
        v = cache.get(w)
        if v is None:
            if w[-1] not in ints:
                raise ArgumentError(f"no matrix for {w[-1]}")
            v = word_value(w[:-1]).dot(ints[w[-1]])
            cache[w] = v
        return v

    by_word: dict = {}
    for (w, m), c in p.items():
        coeff = Scalar({m: c}).evaluate(params) if m else c
        if coeff:
            by_word[w] = by_word.get(w, 0) + coeff
    total = np.full((size, size), Fraction(0), dtype=object)
    for w, coeff in by_word.items():
        if coeff:
            total = total + (Fraction(coeff) / scale ** len(w)) * word_value(w)
    return total


def has_inverted(p: FreePolynomial) -> bool:
    return any(mono_has_negative(m) for (_, m), _ in p.items())
