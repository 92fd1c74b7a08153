"""Presentations of O_d^+, H_d^+ and O_{-1}(d) by generators and relations.

A relation R stands for R = 0 in every *-representation; since generators
are self-adjoint, R* = 0 holds as well.  Relations that come in adjoint pairs
(u_ij u_ij' and u_ij' u_ij) are therefore listed once per unordered pair, and
rewrite rules may cite a relation through its adjoint.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .errors import ArgumentError
from .freealg import FreePolynomial, Generator, RewriteRule, gen, parse_poly, unit

KINDS = ("O+", "H+", "O-1")

NORMONE_JUSTIFICATION = "u_ij^2 <= sum_k u_kj^2 = 1 (column normalisation)"


@dataclass(frozen=True)
class Presentation:
    d: int
    kind: str
    relations: tuple[tuple[str, FreePolynomial], ...]
    rules: tuple[RewriteRule, ...] = ()
    contractions: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for label, rel in self.relations:
            if rel.d != self.d:
                raise ArgumentError(f"relation {label} lives over d={rel.d}")
        for r in self.rules:
            r.check()
            if r.relation is None or not 0 <= r.relation < len(self.relations):
                raise ArgumentError(f"rule {r} cites no listed relation")
            rel = self.relations[r.relation][1]
            if r.star:
                rel = rel.adjoint()
            if r.difference(self.d) != rel * r.scale:
                raise ArgumentError(f"rule {r} is not a multiple of relation {r.relation}")

    @property
    def generators(self) -> list[Generator]:
        return [Generator(i, j) for i in range(1, self.d + 1) for j in range(1, self.d + 1)]

    def polynomials(self) -> list[FreePolynomial]:
        return [p for _, p in self.relations]

    def labels(self) -> list[str]:
        return [label for label, _ in self.relations]

    def count(self, prefix: str) -> int:
        return sum(1 for label in self.labels() if label.startswith(prefix))

    def without(self, prefix: str) -> "Presentation":
        """Drop every relation whose label starts with ``prefix``.

        Rules and contraction justifications that depended on a dropped
        relation go with it.
        """
        keep = [k for k, (label, _) in enumerate(self.relations) if not label.startswith(prefix)]
        remap = {old: new for new, old in enumerate(keep)}
        rels = tuple(self.relations[k] for k in keep)
        rules = tuple(r._replace(relation=remap[r.relation]) for r in self.rules if r.relation in remap)
        return Presentation(self.d, f"{self.kind} minus {prefix}", rels, rules, _contractions(self.d, rels))

    def extended(self, kind: str, relations: Iterable[tuple[str, FreePolynomial]]) -> "Presentation":
        rels = self.relations + tuple(relations)
        return Presentation(self.d, kind, rels, self.rules, _contractions(self.d, rels))

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "kind": self.kind,
            "relations": [[label, str(p)] for label, p in self.relations],
            "rules": [
                {
                    "pattern": [list(g) for g in r.pattern],
                    "replacement": None if r.replacement is None else [list(g) for g in r.replacement],
                    "sign": r.sign,
                    "relation": r.relation,
                    "scale": str(r.scale),
                    "star": r.star,
                }
                for r in self.rules
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Presentation":
        d = data["d"]
        rels = tuple((label, parse_poly(text, d)) for label, text in data["relations"])
        rules = tuple(
            RewriteRule(
                tuple(Generator(*g) for g in r["pattern"]),
                None if r["replacement"] is None else tuple(Generator(*g) for g in r["replacement"]),
                r["sign"],
                r["relation"],
                Fraction(r["scale"]),
                r["star"],
            )
            for r in data["rules"]
        )
        return cls(d, data["kind"], rels, rules, _contractions(d, rels))


def _contractions(d: int, relations) -> dict:
    """Generators with a recorded norm bound, anchored to column normalisation."""
    have = {label for label, _ in relations}
    out = {}
    for j in range(1, d + 1):
        if f"normone col {j}" in have:
            for i in range(1, d + 1):
                out[Generator(i, j)] = NORMONE_JUSTIFICATION
    return out


def _orthogonal_relations(d: int) -> list[tuple[str, FreePolynomial]]:
    u = lambda i, j: gen(d, i, j)  # noqa: E731
    rng = range(1, d + 1)
    rels = []
    for j in rng:
        rels.append((f"normone col {j}", sum((u(i, j) * u(i, j) for i in rng), FreePolynomial.zero(d)) - unit(d)))
    for i in rng:
        rels.append((f"normone row {i}", sum((u(i, j) * u(i, j) for j in rng), FreePolynomial.zero(d)) - unit(d)))
    for j in rng:
        for jp in rng:
            if j != jp:
                rels.append((f"ortho col {j},{jp}", sum((u(i, j) * u(i, jp) for i in rng), FreePolynomial.zero(d))))
    for i in rng:
        for ip in rng:
            if i != ip:
                rels.append((f"ortho row {i},{ip}", sum((u(i, j) * u(ip, j) for j in rng), FreePolynomial.zero(d))))
    return rels


def _share_line(a: Generator, b: Generator) -> bool:
    return a.i == b.i or a.j == b.j


def hyperoctahedral_monomials(d: int) -> list[tuple[str, tuple[Generator, Generator]]]:
    """(label, (a, b)) for a < b in one row or column."""
    gens = [Generator(i, j) for i in range(1, d + 1) for j in range(1, d + 1)]
    out = []
    for a, b in combinations(gens, 2):
        if a.i == b.i:
            out.append((f"mono row {a.i}: {a}{b}", (a, b)))
        elif a.j == b.j:
            out.append((f"mono col {a.j}: {a}{b}", (a, b)))
    return out


def preset_presentation(kind: str, d: int) -> Presentation:
    """O+ (free orthogonal), H+ (hyperoctahedral) or O-1 (twisted orthogonal)."""
    if kind not in KINDS:
        raise ArgumentError(f"unknown presentation kind {kind!r}; choose from {KINDS}")
    if d < 2:
        raise ArgumentError("presets need d >= 2")
    rels = _orthogonal_relations(d)
    rules = []
    gens = [Generator(i, j) for i in range(1, d + 1) for j in range(1, d + 1)]
    if kind == "H+":
        for label, (a, b) in hyperoctahedral_monomials(d):
            idx = len(rels)
            rels.append((label, FreePolynomial.monomial(d, (a, b))))
            rules.append(RewriteRule((a, b), None, 1, idx, Fraction(1), False))
            rules.append(RewriteRule((b, a), None, 1, idx, Fraction(1), True))
    elif kind == "O-1":
        for a, b in combinations(gens, 2):
            ab = FreePolynomial.monomial(d, (a, b))
            ba = FreePolynomial.monomial(d, (b, a))
            idx = len(rels)
            if _share_line(a, b):
                rels.append((f"anticommute {a}{b}", ab + ba))
                rules.append(RewriteRule((b, a), (a, b), -1, idx, Fraction(1), False))
            else:
                rels.append((f"commute {a}{b}", ab - ba))
                rules.append(RewriteRule((b, a), (a, b), 1, idx, Fraction(-1), False))
    rels_t = tuple(rels)
    return Presentation(d, kind, rels_t, tuple(rules), _contractions(d, rels_t))


def commutator_relations(d: int, disjoint_only: bool = False) -> list[tuple[str, FreePolynomial]]:
    """[u_a, u_b] for a < b (all pairs, or only pairs in different rows and columns)."""
    gens = [Generator(i, j) for i in range(1, d + 1) for j in range(1, d + 1)]
    out = []
    for a, b in combinations(gens, 2):
        if disjoint_only and _share_line(a, b):
            continue
        out.append((f"commutator {a}{b}", FreePolynomial.monomial(d, (a, b)) - FreePolynomial.monomial(d, (b, a))))
    return out
