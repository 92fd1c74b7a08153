"""Degree-bounded ideal membership by exact sparse row reduction.

The candidate span is { w_L * F * w_R : F a fact or its adjoint, total degree
<= D } over Q.  Two reductions keep it small without changing the answer:

* Relations backing the presentation's rewrite rules are applied as a
  confluent rewriting system, so rows and target are compared in normal
  form and multiplier words range over normal words only.
* Every preset relation is homogeneous for the Z_2^(2d) grading that counts
  row and column indices mod 2.  When all facts are homogeneous, only rows
  whose grade occurs in the target can contribute.

A ``member`` answer always comes with a certificate built from the row
combination plus the rewriting traces; the caller replays it through the
session.  ``inconclusive`` asserts nothing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import ArgumentError, ResourceError
from .freealg import FreePolynomial, Generator, Rewriter, Word
from .kernel import Certificate, CertTerm
from .scalar import ONE_MONO


@dataclass
class SearchResult:
    status: str  # "member" | "inconclusive"
    certificate: Certificate | None
    degree_bound: int
    rows: int
    columns: int
    graded: bool
    notes: list[str] = field(default_factory=list)

    @property
    def member(self) -> bool:
        return self.status == "member"

    def summary(self) -> dict:
        return {
            "status": self.status,
            "degree_bound": self.degree_bound,
            "rows": self.rows,
            "columns": self.columns,
            "graded": self.graded,
        }


def grade(w: Word, d: int) -> int:
    g = 0
    for i, j in w:
        g ^= 1 << (i - 1)
        g ^= 1 << (d + j - 1)
    return g


def poly_grades(p: FreePolynomial) -> set[int]:
    return {grade(w, p.d) for (w, _), _ in p.items()}


def _col_key(col):
    w, m = col
    return (len(w), w, m)


class _Echelon:
    """Incremental row echelon form keyed by the largest column of each row."""

    def __init__(self):
        self.pivots: dict = {}

    def reduce(self, vec: dict, combo: dict) -> tuple[dict, dict]:
        vec, combo = dict(vec), dict(combo)
        while vec:
            lead = max(vec, key=_col_key)
            piv = self.pivots.get(lead)
            if piv is None:
                return vec, combo
            pvec, pcombo = piv
            f = vec[lead] / pvec[lead]
            for k, c in pvec.items():
                v = vec.get(k, 0) - f * c
                if v:
                    vec[k] = v
                else:
                    vec.pop(k, None)
            for k, c in pcombo.items():
                v = combo.get(k, 0) - f * c
                if v:
                    combo[k] = v
                else:
                    combo.pop(k, None)
        return vec, combo

    def insert(self, vec: dict, combo: dict) -> bool:
        vec, combo = self.reduce(vec, combo)
        if not vec:
            return False
        lead = max(vec, key=_col_key)
        self.pivots[lead] = (vec, combo)
        return True


def _normal_words(d: int, max_len: int, rewriter: Rewriter | None) -> list[list[Word]]:
    gens = [Generator(i, j) for i in range(1, d + 1) for j in range(1, d + 1)]
    by_len: list[list[Word]] = [[()]]
    for n in range(1, max_len + 1):
        layer = []
        for w in by_len[-1]:
            for g in gens:
                x = w + (g,)
                if rewriter is not None:
                    sign, nf, _ = rewriter.reduce_word(x)
                    if nf != x:
                        continue
                layer.append(x)
        by_len.append(layer)
    return by_len


def search_membership(session, p: FreePolynomial, degree_bound: int | None = None, cap: int = 10**7) -> SearchResult:
    d = session.d
    if p.d != d:
        raise ArgumentError("target over the wrong d")
    D = p.degree() + 2 if degree_bound is None else degree_bound
    if D < p.degree():
        raise ArgumentError(f"degree bound {D} below target degree {p.degree()}")
    pres = session.presentation
    rewriter = Rewriter(pres.rules) if pres.rules else None
    rule_relations = {r.relation for r in pres.rules}

    def normal(q: FreePolynomial, trace: list):
        return rewriter.reduce(q, trace) if rewriter is not None else q

    target_trace: list = []
    target = normal(p, target_trace)

    def finish(combo: dict, rows_meta: list) -> Certificate:
        terms = [CertTerm(left, k, right, star) for left, k, right, star in target_trace]
        for rid, c in combo.items():
            fact, wl, wr, star, trace = rows_meta[rid]
            terms.append(CertTerm(FreePolynomial.monomial(d, wl, c), fact, FreePolynomial.monomial(d, wr), star))
            for left, k, right, st in trace:
                terms.append(CertTerm(-c * left, k, right, st))
        return Certificate(p, terms)

    if target.is_zero():
        return SearchResult("member", finish({}, []), D, 0, 0, rewriter is not None)

    # candidate generators: facts not already encoded by the rewriting system
    gens = []
    for k, fact in enumerate(session.facts):
        if k in rule_relations:
            continue
        f = fact.poly
        gens.append((k, f, False))
        fs = f.adjoint()
        if fs != f and fs != -f:
            gens.append((k, fs, True))

    graded = all(len(poly_grades(f)) == 1 for _, f, _ in gens)
    wanted = poly_grades(target)
    words = _normal_words(d, max(0, D - min((f.degree() for _, f, _ in gens), default=0)), rewriter)
    by_len_grade: list[dict[int, list[Word]]] = []
    for layer in words:
        buckets: dict[int, list[Word]] = {}
        for w in layer:
            buckets.setdefault(grade(w, d), []).append(w)
        by_len_grade.append(buckets)

    def pairs(f: FreePolynomial):
        budget = D - f.degree()
        fg = next(iter(poly_grades(f))) if graded else 0
        for ll in range(budget + 1):
            for lr in range(budget - ll + 1):
                for gl, lefts in by_len_grade[ll].items():
                    for gr, rights in by_len_grade[lr].items():
                        if graded and (gl ^ fg ^ gr) not in wanted:
                            continue
                        yield from product(lefts, rights)

    total = 0
    for _, f, _ in gens:
        budget = D - f.degree()
        if budget < 0:
            continue
        fg = next(iter(poly_grades(f))) if graded else 0
        for ll in range(budget + 1):
            for lr in range(budget - ll + 1):
                for gl, lefts in by_len_grade[ll].items():
                    for gr, rights in by_len_grade[lr].items():
                        if not graded or (gl ^ fg ^ gr) in wanted:
                            total += len(lefts) * len(rights)
        if total > cap:
            raise ResourceError(f"spanning set exceeds {cap} rows at degree bound {D}")

    ech = _Echelon()
    rows_meta: list = []
    columns: set = set()
    for k, f, star in gens:
        if D - f.degree() < 0:
            continue
        for wl, wr in pairs(f):
            row_poly = FreePolynomial.monomial(d, wl) * f * FreePolynomial.monomial(d, wr)
            trace: list = []
            row = normal(row_poly, trace)
            if row.is_zero():
                continue
            rid = len(rows_meta)
            rows_meta.append((k, wl, wr, star, trace))
            vec = dict(row.items())
            columns.update(vec)
            ech.insert(vec, {rid: Fraction(1)})

    vec, combo = ech.reduce(dict(target.items()), {})
    if vec:
        return SearchResult("inconclusive", None, D, len(rows_meta), len(columns), graded)
    # target = sum_r (-combo_r) row_r after reduction to zero
    combo = {rid: -c for rid, c in combo.items()}
    return SearchResult("member", finish(combo, rows_meta), D, len(rows_meta), len(columns), graded)


__all__ = ["SearchResult", "search_membership", "grade", "ONE_MONO"]
