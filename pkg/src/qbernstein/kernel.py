"""A proof kernel for finitely presented *-algebras.

A *fact* is a polynomial that evaluates to 0 in every *-representation of
the session's presentation (generators as bounded self-adjoint operators)
that also satisfies the session's assumptions, for every admissible value of
the parameters.  Facts only enter the store through:

* the presentation's relations and explicit assumptions,
* replayable certificates  target = sum_k left_k * fact_k * right_k,
* positivity splitting   (sum_k x_k^* x_k = 0  =>  every x_k = 0),
* star cancellation      (p p^* = 0  =>  p = 0),
* spectral shrinking     (p(g) = 0, q vanishes on the real roots of p  =>  q(g) = 0).

Every step is logged; :meth:`Session.replay` rebuilds an identical store
from the log.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ArgumentError, CertificateError, RuleNotApplicable, SpectralRefusal
from .freealg import FreePolynomial, Generator, parse_poly, univariate_at
from .presentations import Presentation
from .roots import real_root_set, trim, evaluate
from .scalar import Scalar

TRANSCRIPT_VERSION = 1


@dataclass(frozen=True)
class Fact:
    poly: FreePolynomial
    provenance: str  # "relation" | "assumed" | "derived"
    rule: str = ""
    inputs: tuple[int, ...] = ()
    label: str = ""


@dataclass(frozen=True)
class CertTerm:
    left: FreePolynomial
    fact: int
    right: FreePolynomial
    star: bool = False


@dataclass(frozen=True)
class Certificate:
    """Claim: ``target`` equals sum left_k * F_k * right_k (F_k^* when ``star``)."""

    target: FreePolynomial
    terms: tuple[CertTerm, ...] = ()

    def __init__(self, target: FreePolynomial, terms: Iterable = ()):
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "terms", tuple(t if isinstance(t, CertTerm) else CertTerm(*t) for t in terms))

    def combination(self, facts: Sequence[FreePolynomial]) -> FreePolynomial:
        d = self.target.d
        total = FreePolynomial.zero(d)
        for t in self.terms:
            f = facts[t.fact].adjoint() if t.star else facts[t.fact]
            total = total + t.left * f * t.right
        return total

    def residual(self, facts: Sequence[FreePolynomial]) -> FreePolynomial:
        return self.target - self.combination(facts)

    def remap(self, mapping) -> "Certificate":
        return Certificate(self.target, [CertTerm(t.left, mapping[t.fact], t.right, t.star) for t in self.terms])

    def to_dict(self) -> dict:
        return {
            "target": str(self.target),
            "terms": [
                {"left": str(t.left), "fact": t.fact, "right": str(t.right), "star": t.star}
                for t in self.terms
            ],
        }

    @classmethod
    def from_dict(cls, data: dict, d: int) -> "Certificate":
        return cls(
            parse_poly(data["target"], d),
            [
                CertTerm(parse_poly(t["left"], d), t["fact"], parse_poly(t["right"], d), t["star"])
                for t in data["terms"]
            ],
        )


@dataclass(frozen=True)
class PosTerm:
    """One summand q^* h q of a positivity split.

    ``kind`` is ``"square"`` for h = g^2 or ``"contraction"`` for h = 1 - g^2.
    """

    q: FreePolynomial
    g: Generator
    kind: str

    def h(self, d: int) -> FreePolynomial:
        g2 = FreePolynomial.monomial(d, (self.g, self.g))
        if self.kind == "square":
            return g2
        if self.kind == "contraction":
            return FreePolynomial.one(d) - g2
        raise ArgumentError(f"unknown positive factor kind {self.kind!r}")

    def root_factor(self, d: int) -> FreePolynomial:
        """h' with h' q = 0 deducible from (h^(1/2) q)^* (h^(1/2) q) = 0."""
        if self.kind == "square":
            return FreePolynomial.monomial(d, (self.g,))
        return self.h(d)

    def to_dict(self) -> dict:
        return {"q": str(self.q), "g": list(self.g), "kind": self.kind}


@dataclass
class Session:
    presentation: Presentation
    facts: list[Fact] = field(default_factory=list)
    nonzero: set[str] = field(default_factory=set)
    zero: set[str] = field(default_factory=set)
    log: list[dict] = field(default_factory=list)

    def __post_init__(self):
        self._index: dict[FreePolynomial, int] = {}
        if not self.facts:
            for label, rel in self.presentation.relations:
                self._append(Fact(rel, "relation", label=label))

    @property
    def d(self) -> int:
        return self.presentation.d

    # fact store -----------------------------------------------------------

    def polys(self) -> list[FreePolynomial]:
        return [f.poly for f in self.facts]

    def index_of(self, p: FreePolynomial) -> int | None:
        return self._index.get(p)

    def require(self, p: FreePolynomial) -> int:
        k = self.index_of(p)
        if k is None:
            raise RuleNotApplicable(f"{p} is not a fact")
        return k

    def has(self, p: FreePolynomial) -> bool:
        return p in self._index

    def _append(self, fact: Fact) -> tuple[str, int | None]:
        if fact.poly.d != self.d:
            raise ArgumentError(f"fact over d={fact.poly.d} in a d={self.d} session")
        if fact.poly.is_zero():
            return "noop", None
        k = self._index.get(fact.poly)
        if k is not None:
            return "duplicate", k
        self.facts.append(fact)
        self._index[fact.poly] = len(self.facts) - 1
        return "accepted", len(self.facts) - 1

    def _record(self, entry: dict, outcome: str, new: Sequence[int | None] = ()):
        entry["outcome"] = outcome
        entry["facts"] = [k for k in new if k is not None]
        self.log.append(entry)

    def _check_inverses(self, polys: Iterable[FreePolynomial]):
        for p in polys:
            bad = p.inverted_params() - self.nonzero
            if bad:
                raise RuleNotApplicable(f"parameters {sorted(bad)} inverted without a nonzero declaration")

    # assumptions -------------------------------------------------------------

    def add_assumed_fact(self, p: FreePolynomial, label: str = "") -> "Session":
        self._check_inverses([p])
        outcome, k = self._append(Fact(p, "assumed", label=label))
        self._record({"rule": "assume", "inputs": {"label": label}, "target": str(p)}, outcome, [k])
        return self

    def declare_nonzero(self, param: str) -> "Session":
        if param in self.zero:
            raise ArgumentError(f"{param} was already assumed to vanish")
        self.nonzero.add(param)
        self._record({"rule": "declare_nonzero", "inputs": {"param": param}}, "accepted")
        return self

    def declare_zero(self, param: str) -> "Session":
        """Assume the parameter vanishes, recorded as the fact param * 1."""
        if param in self.nonzero:
            raise ArgumentError(f"{param} was already declared nonzero")
        self.zero.add(param)
        outcome, k = self._append(Fact(FreePolynomial.scalar(self.d, Scalar.param(param)), "assumed", label=f"{param} = 0"))
        self._record({"rule": "declare_zero", "inputs": {"param": param}}, outcome, [k])
        return self

    # certificates -------------------------------------------------------------

    def _verify(self, cert: Certificate):
        n = len(self.facts)
        for t in cert.terms:
            if not 0 <= t.fact < n:
                raise ArgumentError(f"certificate cites fact {t.fact}; store has {n}")
            if t.left.d != self.d or t.right.d != self.d:
                raise ArgumentError("certificate multiplier over the wrong d")
        self._check_inverses([cert.target] + [t.left for t in cert.terms] + [t.right for t in cert.terms])
        res = cert.residual(self.polys())
        if not res.is_zero():
            raise CertificateError(f"certificate leaves a nonzero residual ({len(res)} terms)", res)

    def check_certificate(self, cert: Certificate, label: str = "") -> "Session":
        """Accept ``cert.target`` as a derived fact if the combination is exact."""
        entry = {"rule": "certificate", "inputs": {"label": label}, "target": str(cert.target), "certificate": cert.to_dict()}
        try:
            self._verify(cert)
        except (CertificateError, RuleNotApplicable) as exc:
            self._record(entry, "rejected")
            raise exc
        outcome, k = self._append(
            Fact(cert.target, "derived", "certificate", tuple(sorted({t.fact for t in cert.terms})), label)
        )
        self._record(entry, outcome, [k])
        return self

    def _witness(self, cert: Certificate, expected: FreePolynomial) -> int:
        if cert.target != expected:
            raise CertificateError("witness certifies a different polynomial", expected - cert.target)
        self._verify(cert)
        _, k = self._append(Fact(cert.target, "derived", "certificate", tuple(sorted({t.fact for t in cert.terms}))))
        return k

    # C*-rules ------------------------------------------------------------------

    def positivity_split(self, decomposition: Sequence[PosTerm], witness: Certificate, label: str = "") -> "Session":
        """From sum_k q_k^* h_k q_k = 0 with every h_k >= 0, conclude h'_k q_k = 0."""
        d = self.d
        entry = {
            "rule": "positivity_split",
            "inputs": {"label": label, "decomposition": [t.to_dict() for t in decomposition]},
            "target": str(witness.target),
            "certificate": witness.to_dict(),
        }
        try:
            if not decomposition:
                raise ArgumentError("empty decomposition")
            for t in decomposition:
                if t.kind == "contraction" and t.g not in self.presentation.contractions:
                    raise RuleNotApplicable(f"{t.g} has no recorded norm bound; 1 - g^2 may fail to be positive")
            expected = FreePolynomial.zero(d)
            for t in decomposition:
                expected = expected + t.q.adjoint() * t.h(d) * t.q
            k = self._witness(witness, expected)
        except (CertificateError, RuleNotApplicable, ArgumentError) as exc:
            self._record(entry, "rejected")
            raise exc
        new = []
        for t in decomposition:
            fact = t.root_factor(d) * t.q
            new.append(self._append(Fact(fact, "derived", "positivity_split", (k,), label))[1])
        self._record(entry, "accepted", [k] + new)
        return self

    def star_cancel(self, p: FreePolynomial, witness: Certificate, label: str = "") -> "Session":
        """From p p^* = 0 conclude p = 0."""
        entry = {"rule": "star_cancel", "inputs": {"label": label}, "target": str(p), "certificate": witness.to_dict()}
        try:
            k = self._witness(witness, p * p.adjoint())
        except (CertificateError, RuleNotApplicable, ArgumentError) as exc:
            self._record(entry, "rejected")
            raise exc
        outcome, kp = self._append(Fact(p, "derived", "star_cancel", (k,), label))
        self._record(entry, outcome, [k, kp])
        return self

    def spectral_shrink(
        self,
        g: Generator,
        p: Sequence,
        q: Sequence,
        witness: Certificate,
        label: str = "",
    ) -> "Session":
        """From p(g) = 0 conclude q(g) = 0 when q vanishes on every real root of p.

        ``p`` and ``q`` are rational coefficient lists in ascending degree.
        The real roots of p are found exactly; p with possibly irrational real
        roots is refused.
        """
        g = Generator(*g)
        p, q = trim(p), trim(q)
        entry = {
            "rule": "spectral_shrink",
            "inputs": {"label": label, "g": list(g), "p": [str(c) for c in p], "q": [str(c) for c in q]},
            "target": str(univariate_at(q, g, self.d)),
            "certificate": witness.to_dict(),
        }
        try:
            if not p:
                raise ArgumentError("p must be a nonzero polynomial")
            k = self._witness(witness, univariate_at(p, g, self.d))
            roots, irrational = real_root_set(p)
            if irrational:
                raise SpectralRefusal(f"p = {p} may have irrational real roots; refusing")
            missed = [r for r in roots if evaluate(q, r) != 0]
            if missed:
                raise RuleNotApplicable(f"q does not vanish at real roots {missed} of p")
        except (CertificateError, RuleNotApplicable, ArgumentError) as exc:
            self._record(entry, "rejected")
            raise exc
        outcome, kq = self._append(Fact(univariate_at(q, g, self.d), "derived", "spectral_shrink", (k,), label))
        self._record(entry, "accepted", [k, kq])
        return self

    # search -------------------------------------------------------------------

    def search_membership(self, p: FreePolynomial, degree_bound: int | None = None, cap: int = 10**7):
        from .search import search_membership

        return search_membership(self, p, degree_bound, cap)

    # transcripts -------------------------------------------------------------

    def store(self) -> list[list[str]]:
        return [[str(f.poly), f.provenance] for f in self.facts]

    def store_hash(self) -> str:
        return _digest(self.store())

    def transcript(self) -> dict:
        return {
            "version": TRANSCRIPT_VERSION,
            "presentation": self.presentation.to_dict(),
            "entries": self.log,
            "store_hash": self.store_hash(),
        }

    def transcript_hash(self) -> str:
        return _digest(self.transcript())

    @classmethod
    def replay(cls, transcript: dict) -> "Session":
        """Re-run every logged step from an empty session; outcomes must agree."""
        pres = Presentation.from_dict(transcript["presentation"])
        s = cls(pres)
        d = pres.d
        for entry in transcript["entries"]:
            rule, inputs = entry["rule"], entry.get("inputs", {})
            label = inputs.get("label", "")
            try:
                if rule == "assume":
                    s.add_assumed_fact(parse_poly(entry["target"], d), label)
                elif rule == "declare_nonzero":
                    s.declare_nonzero(inputs["param"])
                elif rule == "declare_zero":
                    s.declare_zero(inputs["param"])
                elif rule == "certificate":
                    s.check_certificate(Certificate.from_dict(entry["certificate"], d), label)
                elif rule == "positivity_split":
                    dec = [PosTerm(parse_poly(t["q"], d), Generator(*t["g"]), t["kind"]) for t in inputs["decomposition"]]
                    s.positivity_split(dec, Certificate.from_dict(entry["certificate"], d), label)
                elif rule == "star_cancel":
                    s.star_cancel(parse_poly(entry["target"], d), Certificate.from_dict(entry["certificate"], d), label)
                elif rule == "spectral_shrink":
                    s.spectral_shrink(
                        Generator(*inputs["g"]),
                        [Fraction(c) for c in inputs["p"]],
                        [Fraction(c) for c in inputs["q"]],
                        Certificate.from_dict(entry["certificate"], d),
                        label,
                    )
                else:
                    raise ArgumentError(f"unknown transcript rule {rule!r}")
            except (CertificateError, RuleNotApplicable):
                if entry["outcome"] != "rejected":
                    raise
            if s.log[-1]["outcome"] != entry["outcome"]:
                raise CertificateError(f"replay diverged at {rule}: {s.log[-1]['outcome']} vs {entry['outcome']}")
        if "store_hash" in transcript and s.store_hash() != transcript["store_hash"]:
            raise CertificateError("replayed fact store differs from the recorded one")
        return s

    def describe(self, k: int) -> str:
        f = self.facts[k]
        return f"[{k}] {f.provenance}{'/' + f.rule if f.rule else ''} {f.label}: {f.poly}"


def _digest(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def preset_session(kind: str, d: int) -> Session:
    from .presentations import preset_presentation

    return Session(preset_presentation(kind, d))


__all__ = [
    "Certificate",
    "CertTerm",
    "Fact",
    "PosTerm",
    "Session",
    "preset_session",
]
