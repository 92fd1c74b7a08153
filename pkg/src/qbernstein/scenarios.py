"""End-to-end pipelines: each one builds a session, feeds it the freeness
constraints or relations it needs, and replays an explicit chain of
certificates and C*-rules.  Generic search is only used where no explicit
combination is known.
"""
from __future__ import annotations

import time
from fractions import Fraction
from itertools import permutations, product

from .cumulants import (
    DistributionSpec,
    FreeFamilySpec,
    clt_scaled_spec,
    cumulant_param,
    is_semicircular,
    moments_from_cumulants,
    semicircle_moments,
)
from .errors import ArgumentError, CertificateError, ResourceError, RuleNotApplicable
from .freealg import FreePolynomial, Generator, Rewriter
from .kernel import Certificate, CertTerm, PosTerm, Session
from .models import evaluate_all, find_nonvanishing_model, twisted_representation
from .opvalued import OpWord, RotatedFamily, b_tuples, opval_cumulant_closed, opval_cumulant_mobius
from .presentations import commutator_relations, hyperoctahedral_monomials, preset_presentation
from .report import INCONCLUSIVE, REFUTED, VERIFIED, Case, Report
from .scalar import Scalar


# small helpers ---------------------------------------------------------------


def _one(d):
    return FreePolynomial.one(d)


def _pw(d, i, j, k=1):
    """u_ij^k."""
    return FreePolynomial.monomial(d, (Generator(i, j),) * k)


def _word(d, *gens):
    return FreePolynomial.monomial(d, tuple(Generator(*g) for g in gens))


def _sum(polys, d):
    total = FreePolynomial.zero(d)
    for p in polys:
        total = total + p
    return total


def _relations(session: Session) -> dict[str, int]:
    return {f.label: k for k, f in enumerate(session.facts) if f.provenance == "relation"}


def _failure(exc: Exception) -> dict:
    out = {"error": f"{type(exc).__name__}: {exc}"}
    residual = getattr(exc, "residual", None)
    if residual is not None:
        out["residual"] = str(residual)
    return out


def _entry_cases(report: Report, session: Session, d: int, goal, failure, entries=None):
    """One case per entry (i, j): verified iff goal(i, j) is a fact."""
    h = report.attach(session)
    for i, j in entries or product(range(1, d + 1), repeat=2):
        target = goal(i, j)
        if session.has(target):
            report.add(Case(f"u[{i},{j}]", VERIFIED, transcript_hash=h, details={"fact": str(target)}))
        else:
            witness = failure or {"error": f"{target} was not derived"}
            report.add(Case(f"u[{i},{j}]", REFUTED, witness=witness, transcript_hash=h))


def _finish(report: Report, t0: float) -> Report:
    report.duration_ms = (time.perf_counter() - t0) * 1000
    return report


def _cube_goal(d):
    return lambda i, j: _pw(d, i, j, 2) - _pw(d, i, j, 4)


# even and odd cumulants --------------------------------------------------------


def _assume_cumulant(session, fam, jword, label):
    f = opval_cumulant_closed(fam, OpWord.of(fam.d, jword))
    session.add_assumed_fact(f, label)
    return session.require(f)


def _jlabel(n, jword):
    return f"kappa_{n}^B(" + ",".join(f"Y{j}" for j in jword) + ") = 0"


def scenario_even(d: int, n: int, columns=None) -> Report:
    """From freeness of the rotated family, derive u_ij^2 = u_ij^4 using even n."""
    t0 = time.perf_counter()
    if d < 2:
        raise ArgumentError("d >= 2 required")
    if n < 4 or n % 2:
        raise ArgumentError("even case needs even n >= 4")
    cols = list(range(1, d + 1)) if columns is None else list(columns)
    report = Report("even", {"d": d, "n": n, "columns": cols})
    pres = preset_presentation("O+", d)
    s = Session(pres)
    rel = _relations(s)
    fam = RotatedFamily(FreeFamilySpec.symbolic(d, n, identical=True), pres)
    kname = cumulant_param(n, 1)
    K, Kinv = Scalar.param(kname), Scalar.param(kname, -1)
    one, m = _one(d), n // 2 - 1
    failure = None
    try:
        s.declare_nonzero(kname)
        for j in cols:
            assumed = [
                _assume_cumulant(s, fam, (jp, jp) + (j,) * (n - 2), _jlabel(n, (jp, jp) + (j,) * (n - 2)))
                for jp in range(1, d + 1)
                if jp != j
            ]
            weighted = _sum((K * (one - _pw(d, i, j, 2)) * _pw(d, i, j, n - 2) for i in range(1, d + 1)), d)
            terms = [CertTerm(one, k, one) for k in assumed]
            terms += [CertTerm(-K * one, rel[f"normone row {i}"], _pw(d, i, j, n - 2)) for i in range(1, d + 1)]
            s.check_certificate(Certificate(weighted, terms), f"column {j}: sum over j' != j")
            sym = _sum((_pw(d, i, j, m) * (one - _pw(d, i, j, 2)) * _pw(d, i, j, m) for i in range(1, d + 1)), d)
            s.check_certificate(Certificate(sym, [CertTerm(Kinv * one, s.require(weighted), one)]), f"column {j}: divide by {kname}")
            s.positivity_split(
                [PosTerm(_pw(d, i, j, m), Generator(i, j), "contraction") for i in range(1, d + 1)],
                Certificate(sym, [CertTerm(one, s.require(sym), one)]),
                f"column {j}: sum of positive terms",
            )
            for i in range(1, d + 1):
                base = _pw(d, i, j, m) - _pw(d, i, j, m + 2)
                high = _pw(d, i, j, n) - _pw(d, i, j, n + 2)
                s.check_certificate(Certificate(high, [CertTerm(_pw(d, i, j, m + 2), s.require(base), one)]), f"u[{i},{j}]^n = u[{i},{j}]^(n+2)")
                p = [0] * n + [1, 0, -1]
                s.spectral_shrink(Generator(i, j), p, [0, 0, 1, 0, -1], Certificate(high, [CertTerm(one, s.require(high), one)]), f"spectrum of u[{i},{j}]")
    except (CertificateError, RuleNotApplicable) as exc:
        failure = _failure(exc)
    _entry_cases(report, s, d, _cube_goal(d), failure, [(i, j) for j in cols for i in range(1, d + 1)])
    return _finish(report, t0)


def scenario_odd(d: int, n: int) -> Report:
    """From freeness of the rotated family, derive u_ij^2 = u_ij^4 using odd n."""
    t0 = time.perf_counter()
    if d < 2:
        raise ArgumentError("d >= 2 required")
    if n < 3 or n % 2 == 0:
        raise ArgumentError("odd case needs odd n >= 3")
    report = Report("odd", {"d": d, "n": n})
    pres = preset_presentation("O+", d)
    s = Session(pres)
    rel = _relations(s)
    fam = RotatedFamily(FreeFamilySpec.symbolic(d, n, identical=True), pres)
    kname = cumulant_param(n, 1)
    K, Kinv = Scalar.param(kname), Scalar.param(kname, -1)
    one, r = _one(d), (n - 3) // 2
    rng = range(1, d + 1)
    steps: list[str] = []
    failure = None

    def cert(target, terms, label):
        s.check_certificate(Certificate(target, terms), label)
        steps.append(label)
        return s.require(target)

    def tail_poly(i, tail):
        out = one
        for t in tail:
            out = out * _pw(d, i, t, 2)
        return out

    try:
        s.declare_nonzero(kname)
        odd1 = {}
        for j, jp in permutations(rng, 2):
            cur = {}
            for tail in product(rng, repeat=r):
                jword = (j, jp, jp) + sum(((t, t) for t in tail), ())
                cur[tail] = _assume_cumulant(s, fam, jword, _jlabel(n, jword))
            # sum over j_1, then j_2, ...
            for level in range(r):
                nxt = {}
                for rest in product(rng, repeat=r - level - 1):
                    target = _sum((K * _pw(d, i, j) * _pw(d, i, jp, 2) * tail_poly(i, rest) for i in rng), d)
                    terms = [CertTerm(one, cur[(c,) + rest], one) for c in rng]
                    terms += [
                        CertTerm(-K * _pw(d, i, j) * _pw(d, i, jp, 2), rel[f"normone row {i}"], tail_poly(i, rest))
                        for i in rng
                    ]
                    nxt[rest] = cert(target, terms, f"({j},{jp}): summed over j_{level + 1}")
                cur = nxt
            weighted = s.facts[cur[()]].poly
            x = _sum((_pw(d, i, j) * _pw(d, i, jp, 2) for i in rng), d)
            odd1[j, jp] = cert(x, [CertTerm(Kinv * one, cur[()], one)], f"({j},{jp}): sum_i u_ij u_ij'^2 = 0")
            assert weighted == K * x
        # sum_i u_ij - u_ij^3 = 0 for each column
        odd2 = {}
        for j in rng:
            target = _sum((_pw(d, i, j) - _pw(d, i, j, 3) for i in rng), d)
            terms = [CertTerm(one, odd1[j, jp], one) for jp in rng if jp != j]
            terms += [CertTerm(-_pw(d, i, j), rel[f"normone row {i}"], one) for i in rng]
            odd2[j] = cert(target, terms, f"column {j}: sum_i u_ij = sum_i u_ij^3")
        # X^* X with X = sum_i u_ij u_ij'^2
        xx = {}
        for j, jp in permutations(rng, 2):
            x = s.facts[odd1[j, jp]].poly
            xx[j, jp] = cert(x.adjoint() * x, [CertTerm(x.adjoint(), odd1[j, jp], one)], f"({j},{jp}): X^* X = 0")
        total = []
        for jp in rng:
            s1 = _sum((_pw(d, i, jp) for i in rng), d)
            s3 = _sum((_pw(d, i, jp, 3) for i in rng), d)
            four = _sum((_pw(d, i, jp, 4) for i in rng), d)
            terms = [CertTerm(one, xx[j, jp], one) for j in rng if j != jp]
            terms += [CertTerm(-_pw(d, i, jp, 2), rel[f"normone row {i}"], _pw(d, i, jp, 2)) for i in rng]
            terms += [
                CertTerm(-_pw(d, i, jp, 2), rel[f"ortho row {i},{ip}"], _pw(d, ip, jp, 2))
                for i, ip in permutations(rng, 2)
            ]
            w = cert(four - s3 * s3, terms, f"column {jp}: sum_i u^4 = (sum_i u^3)^2")
            v = cert(
                four - s1 * s1,
                [CertTerm(one, w, one), CertTerm(-s1, odd2[jp], one), CertTerm(-one, odd2[jp], s3)],
                f"column {jp}: sum_i u^4 = (sum_i u)^2",
            )
            total.append(v)
        z = _sum((_pw(d, i, jp) * (one - _pw(d, i, jp, 2)) * _pw(d, i, jp) for i, jp in product(rng, repeat=2)), d)
        terms = [CertTerm(-one, v, one) for v in total]
        terms += [CertTerm(-one, rel[f"ortho row {i},{ip}"], one) for i, ip in permutations(rng, 2)]
        cert(z, terms, "sum_{i,j'} u (1 - u^2) u = 0")
        s.positivity_split(
            [PosTerm(_pw(d, i, jp), Generator(i, jp), "contraction") for i, jp in product(rng, repeat=2)],
            Certificate(z, [CertTerm(one, s.require(z), one)]),
            "sum of positive terms",
        )
        for i, jp in product(rng, repeat=2):
            base = _pw(d, i, jp) - _pw(d, i, jp, 3)
            s.spectral_shrink(Generator(i, jp), [0, 1, 0, -1], [0, 0, 1, 0, -1], Certificate(base, [CertTerm(one, s.require(base), one)]), f"spectrum of u[{i},{jp}]")
    except (CertificateError, RuleNotApplicable) as exc:
        failure = _failure(exc)
    report.notes.append(f"{len(steps)} certified identities")
    _entry_cases(report, s, d, _cube_goal(d), failure)
    return _finish(report, t0)


# d = 2 without identical distribution ------------------------------------------


def _d2_chain(s: Session, n: int, p: int, j: int, jp: int) -> int:
    """Certify k_p (u_pj'^(n-2) - u_pj'^n) = 0; return its fact index."""
    d, q = 2, 3 - p
    one = _one(d)
    rel = _relations(s)
    fam = RotatedFamily(FreeFamilySpec.symbolic(2, n, identical=False), s.presentation)
    a, b = Scalar.param(cumulant_param(n, p)), Scalar.param(cumulant_param(n, q))
    f1 = _assume_cumulant(s, fam, (j, j) + (jp,) * (n - 2), _jlabel(n, (j, j) + (jp,) * (n - 2)))
    f2 = _assume_cumulant(s, fam, (j,) + (jp,) * (n - 1), _jlabel(n, (j,) + (jp,) * (n - 1)))
    uq, up = _pw(d, q, jp), lambda k: _pw(d, p, jp, k)
    tag = f"rows {p},{q}, columns {j},{jp}"

    def cert(target, terms, label):
        s.check_certificate(Certificate(target, terms), f"{tag}: {label}")
        return s.require(target)

    d1 = cert(
        a * uq * up(n - 2) - a * uq * up(n) + b * _pw(d, q, jp, n - 1) - b * _pw(d, q, jp, n + 1),
        [
            CertTerm(uq, f1, one),
            CertTerm(-a * uq, rel[f"normone row {p}"], up(n - 2)),
            CertTerm(-b * uq, rel[f"normone row {q}"], _pw(d, q, jp, n - 2)),
        ],
        "left multiplication and row normalisation",
    )
    d2 = cert(
        a * uq * up(n - 2) + a * _pw(d, q, j) * _pw(d, p, j) * up(n - 1) + b * _pw(d, q, jp, n - 1) - b * _pw(d, q, jp, n + 1),
        [CertTerm(one, d1, one), CertTerm(a * one, rel[f"ortho row {q},{p}"], up(n - 1))],
        "orthogonality substitution",
    )
    d3 = cert(
        a * uq * up(n - 2) - b * (_pw(d, q, j, 2) + _pw(d, q, jp, 2) - one) * _pw(d, q, jp, n - 1),
        [CertTerm(one, d2, one), CertTerm(-_pw(d, q, j), f2, one)],
        "substitute the second cumulant relation",
    )
    d4 = cert(
        a * uq * up(n - 2),
        [CertTerm(one, d3, one), CertTerm(b * one, rel[f"normone row {q}"], _pw(d, q, jp, n - 1))],
        "the parenthesis vanishes",
    )
    return cert(
        a * (up(n - 2) - up(n)),
        [CertTerm(uq, d4, one), CertTerm(-a * one, rel[f"normone col {jp}"], up(n - 2))],
        "left multiplication and column normalisation",
    )


def _d2_branch(s: Session, n: int, p: int):
    """With k_p != 0 declared, derive u^2 = u^4 for all four entries."""
    d, q = 2, 3 - p
    one = _one(d)
    rel = _relations(s)
    ainv = Scalar.param(cumulant_param(n, p), -1)
    for j, jp in ((2, 1), (1, 2)):
        k = _d2_chain(s, n, p, j, jp)
        base = _pw(d, p, jp, n - 2) - _pw(d, p, jp, n)
        s.check_certificate(Certificate(base, [CertTerm(ainv * one, k, one)]), f"divide by {cumulant_param(n, p)}")
        poly = [0] * (n - 2) + [1, 0, -1]
        s.spectral_shrink(Generator(p, jp), poly, [0, 0, 1, 0, -1], Certificate(base, [CertTerm(one, s.require(base), one)]))
        # move to the other row: u_qj'^2 = 1 - u_pj'^2 + C_j'
        big_p = _pw(d, p, jp, 2)
        c = rel[f"normone col {jp}"]
        cpoly = s.facts[c].poly
        sq = _pw(d, q, jp, 2)
        s.check_certificate(
            Certificate(
                sq - sq * sq,
                [
                    CertTerm(one, s.require(big_p - big_p * big_p), one),
                    CertTerm(one, c, one),
                    CertTerm(-(one - big_p), c, one),
                    CertTerm(-one, c, one - big_p),
                    CertTerm(-cpoly, c, one),
                ],
            ),
            f"transfer to u[{q},{jp}]",
        )


def scenario_d2_remark(n: int) -> Report:
    """d = 2 with independent kappa_n(X_1), kappa_n(X_2): either all u_ij^2 are
    projections or both cumulants vanish."""
    t0 = time.perf_counter()
    if n < 3:
        raise ArgumentError("n >= 3 required")
    d = 2
    report = Report("d2", {"d": 2, "n": n})
    k1, k2 = cumulant_param(n, 1), cumulant_param(n, 2)
    goal = _cube_goal(d)

    def run(key, zero, nonzero_row):
        s = Session(preset_presentation("O+", d))
        failure = None
        try:
            for name in zero:
                s.declare_zero(name)
            if nonzero_row is not None:
                s.declare_nonzero(cumulant_param(n, nonzero_row))
                _d2_branch(s, n, nonzero_row)
            else:
                fam = RotatedFamily(FreeFamilySpec.symbolic(2, n, identical=False), s.presentation)
                for j, jp in ((2, 1), (1, 2)):
                    _assume_cumulant(s, fam, (j, j) + (jp,) * (n - 2), _jlabel(n, (j, j) + (jp,) * (n - 2)))
        except (CertificateError, RuleNotApplicable) as exc:
            failure = _failure(exc)
        h = report.attach(s)
        if nonzero_row is None:
            zeros = [FreePolynomial.scalar(d, Scalar.param(z)) for z in zero]
            ok = all(s.has(z) for z in zeros)
            conclusion = f"{' and '.join(z + ' = 0' for z in zero)}"
        else:
            ok = all(s.has(goal(i, j)) for i, j in product((1, 2), repeat=2))
            conclusion = "u_ij^2 = u_ij^4 for all i, j"
        if ok and failure is None:
            report.add(Case(key, VERIFIED, transcript_hash=h, details={"conclusion": conclusion}))
        else:
            report.add(Case(key, REFUTED, witness=failure or {"error": "conclusion not derived"}, transcript_hash=h))

    run(f"{k1} != 0", [], 1)
    run(f"{k1} = 0, {k2} != 0", [k1], 2)
    run(f"{k1} = 0, {k2} = 0", [k1, k2], None)
    return _finish(report, t0)


# cube relation vs monomial relations ----------------------------------------


def _line_members(d, kind, idx):
    if kind == "col":
        return [(i, idx) for i in range(1, d + 1)]
    return [(idx, j) for j in range(1, d + 1)]


def _monomial_fact(s: Session, a, b):
    """Index and star flag of the fact u_a u_b, possibly as the adjoint of u_b u_a."""
    d = s.d
    k = s.index_of(_word(d, a, b))
    if k is not None:
        return k, False
    k = s.index_of(_word(d, b, a))
    if k is not None:
        return k, True
    raise RuleNotApplicable(f"no fact for {_word(d, a, b)}")


def _monomial_to_cube(s: Session):
    """From u_ij u_ij' = 0 = u_ij u_i'j and normalisation, derive u_ij = u_ij^3."""
    d = s.d
    one = _one(d)
    rel = _relations(s)
    for j in range(1, d + 1):
        line = _line_members(d, "col", j)
        sq = _sum((_pw(d, *g, 2) for g in line), d)
        target = _sum((_pw(d, *g, 2) - _pw(d, *g, 4) for g in line), d)
        terms = []
        if f"normone col {j}" in rel:
            terms.append(CertTerm(-one, rel[f"normone col {j}"], sq))
        for a, b in permutations(line, 2):
            k, star = _monomial_fact(s, a, b)
            terms.append(CertTerm(_pw(d, *a), k, _pw(d, *b), star))
        s.check_certificate(Certificate(target, terms), f"column {j}: (sum_i u_ij^2)^2")
        s.positivity_split(
            [PosTerm(_pw(d, *g), Generator(*g), "contraction") for g in line],
            Certificate(target, [CertTerm(one, s.require(target), one)]),
            f"column {j}: sum of positive terms",
        )


def _cube_to_monomial(s: Session):
    """From u_ij = u_ij^3 and normalisation, derive u_a u_b = 0 along every row and column."""
    d = s.d
    one = _one(d)
    rel = _relations(s)
    for kind in ("col", "row"):
        for idx in range(1, d + 1):
            line = _line_members(d, kind, idx)
            c = rel[f"normone {kind} {idx}"]
            for a in line:
                ua2 = _pw(d, *a, 2)
                others = [g for g in line if g != a]
                target = _sum((ua2 * _pw(d, *g, 2) * ua2 for g in others), d)
                s.positivity_split(
                    [PosTerm(ua2, Generator(*g), "square") for g in others],
                    Certificate(target, [CertTerm(ua2, c, ua2), CertTerm(-_pw(d, *a, 3), rel[f"cube {a[0]},{a[1]}"], one)]),
                    f"{kind} {idx}: projections summing to 1 around u[{a[0]},{a[1]}]",
                )
                for g in others:
                    p = _word(d, g, a)
                    s.star_cancel(p, Certificate(p * p.adjoint(), [CertTerm(one, s.require(_word(d, g, a, a)), _pw(d, *g))]))


def scenario_relation_equivalence(d: int) -> Report:
    t0 = time.perf_counter()
    if d < 2:
        raise ArgumentError("d >= 2 required")
    report = Report("equiv", {"d": d})
    entries = list(product(range(1, d + 1), repeat=2))

    def forward(pres, key, control=False):
        s = Session(pres)
        failure = None
        try:
            _monomial_to_cube(s)
        except (CertificateError, RuleNotApplicable) as exc:
            failure = _failure(exc)
        h = report.attach(s)
        goals = [_pw(d, i, j) - _pw(d, i, j, 3) for i, j in entries]
        if failure is None and all(s.has(g) for g in goals):
            report.add(Case(key, VERIFIED, transcript_hash=h, control=control))
        else:
            report.add(Case(key, REFUTED, witness=failure or {"error": "u - u^3 not derived"}, transcript_hash=h, control=control))

    hplus = preset_presentation("H+", d)
    forward(hplus, "monomial => cube")
    forward(hplus.without("normone"), "monomial => cube without normalisation", control=True)

    cube = preset_presentation("O+", d).extended(
        "O+ with u = u^3", [(f"cube {i},{j}", _pw(d, i, j, 3) - _pw(d, i, j)) for i, j in entries]
    )
    s = Session(cube)
    failure = None
    try:
        _cube_to_monomial(s)
    except (CertificateError, RuleNotApplicable) as exc:
        failure = _failure(exc)
    h = report.attach(s)
    goals = [FreePolynomial.monomial(d, pair) for _, pair in hyperoctahedral_monomials(d)]
    goals += [FreePolynomial.monomial(d, pair[::-1]) for _, pair in hyperoctahedral_monomials(d)]
    if failure is None and all(s.has(g) for g in goals):
        report.add(Case("cube => monomial", VERIFIED, transcript_hash=h, details={"monomials": len(goals)}))
    else:
        report.add(Case("cube => monomial", REFUTED, witness=failure or {"error": "monomials not derived"}, transcript_hash=h))
    return _finish(report, t0)


# O_{-1}(d) probes ------------------------------------------------------------------


def scenario_o_minus_one(d: int, degree_bound: int = 4, cap: int = 10**7) -> Report:
    t0 = time.perf_counter()
    if d < 3:
        raise ArgumentError("probes need d >= 3")
    report = Report("ominus", {"d": d, "degree_bound": degree_bound})
    one = _one(d)
    pairs = [pair for _, pair in hyperoctahedral_monomials(d)]
    u11u12 = _word(d, (1, 1), (1, 2))

    # (a) classical points: add every commutator
    pres = preset_presentation("O-1", d)
    classical = pres.extended("O-1 + commutators", commutator_relations(d))
    s = Session(classical)
    rel = _relations(s)
    failure = None
    try:
        for a, b in pairs:
            anti, comm = rel[f"anticommute {a}{b}"], rel[f"commutator {a}{b}"]
            half = Fraction(1, 2) * one
            s.check_certificate(Certificate(_word(d, a, b), [CertTerm(half, anti, one), CertTerm(half, comm, one)]), f"{a}{b}")
            s.check_certificate(Certificate(_word(d, b, a), [CertTerm(half, anti, one), CertTerm(-half, comm, one)]), f"{b}{a}")
        cross = Session(classical).search_membership(u11u12, 2, cap)
    except (CertificateError, RuleNotApplicable) as exc:
        failure, cross = _failure(exc), None
    h = report.attach(s)
    ok = failure is None and all(s.has(FreePolynomial.monomial(d, p)) and s.has(FreePolynomial.monomial(d, p[::-1])) for p in pairs)
    details = {"monomials": 2 * len(pairs)}
    if cross is not None:
        details["search_cross_check"] = cross.summary()
        ok = ok and cross.member
    report.add(Case("a: classical points satisfy the H_d relations", VERIFIED if ok else REFUTED, witness=None if ok else failure, transcript_hash=h, details=details))

    # (b) u11 u12 is not a consequence of the O_{-1}(d) relations
    s = Session(pres)
    try:
        res = s.search_membership(u11u12, degree_bound, cap)
        search = res.summary()
    except ResourceError as exc:
        res, search = None, {"status": "resource cap", "error": str(exc)}
    rep = twisted_representation(d)
    rel_ok = all(evaluate_all(pres.polynomials(), rep))
    nonzero = not evaluate_all([u11u12], rep)[0]
    witness = {
        "search": search,
        "representation": {
            "construction": "u_ij = a_ij x_i (x) x_j, A = I - (2/d) J, x's anticommuting symmetric involutions",
            "size": rep[Generator(1, 1)].shape[0],
            "relations_hold": rel_ok,
            "u[1,1] u[1,2] nonzero": nonzero,
        },
    }
    if res is not None and res.member:
        verdict = REFUTED  # would contradict the representation: a soundness bug
    elif rel_ok and nonzero:
        verdict = VERIFIED
    else:
        verdict = INCONCLUSIVE
    report.add(Case("b: O_{-1}(d) does not factor through H_d^+", verdict, witness=witness, transcript_hash=report.attach(s)))

    # (c) disjoint commutators inside the H_d^+ ideal?
    hp = preset_presentation("H+", d)
    gens = [Generator(i, j) for i in range(1, d + 1) for j in range(1, d + 1)]
    for a, b in ((a, b) for a in gens for b in gens if a < b and a.i != b.i and a.j != b.j):
        s = Session(hp)
        comm = _word(d, a, b) - _word(d, b, a)
        try:
            res = s.search_membership(comm, degree_bound, cap)
            search = res.summary()
            if res.member:
                s.check_certificate(res.certificate, f"[{a},{b}]")
        except ResourceError as exc:
            res, search = None, {"status": "resource cap", "error": str(exc)}
        key = f"c: [{a},{b}] in the H_d^+ ideal"
        th = report.attach(s)
        if res is not None and res.member:
            report.add(Case(key, VERIFIED, transcript_hash=th, details={"search": search}))
            continue
        model = find_nonvanishing_model([comm], hp.polynomials(), d)
        if model is not None:
            report.add(Case(key, REFUTED, witness={"search": search, "model": model}, transcript_hash=th))
        else:
            report.add(Case(key, INCONCLUSIVE, witness={"search": search, "exhausted_bound": degree_bound}, transcript_hash=th))
    return _finish(report, t0)


# H_d^+ preserves freeness ------------------------------------------------------------


def _b_label(b: FreePolynomial) -> str:
    return "1" if b == FreePolynomial.one(b.d) else str(b)


def hplus_case(d: int, n: int, jword, bs, search_cap: int = 200_000, mobius_max_n: int = 4, model_attempts: int = 12):
    """Check one mixed cumulant over H_d^+; returns (Case, Session)."""
    pres = preset_presentation("H+", d)
    rewriter = Rewriter(pres.rules)
    fam = RotatedFamily(FreeFamilySpec.symbolic(d, n, identical=False), pres)
    w = OpWord.of(d, jword, bs)
    key = f"n={n} j={''.join(map(str, jword))} b=({', '.join(_b_label(b) for b in bs)})"
    closed = opval_cumulant_closed(fam, w)
    s = Session(pres)
    details: dict = {"terms": len(closed)}
    if n <= mobius_max_n:
        agree = closed == opval_cumulant_mobius(fam, w)
        details["moebius_agrees"] = agree
        if not agree:
            return Case(key, REFUTED, witness={"error": "closed form and Moebius inversion disagree"}, details=details), s
    parts = closed.by_monomial()
    open_parts, how = [], []
    for mono in sorted(parts):
        part = parts[mono]
        trace: list = []
        if rewriter.reduce(part, trace).is_zero():
            s.check_certificate(Certificate(part, [CertTerm(*t) for t in trace]), f"{key}: monomial rules")
            how.append("rewriting")
            continue
        try:
            res = s.search_membership(part, part.degree(), search_cap)
        except ResourceError:
            res = None
        if res is not None and res.member:
            s.check_certificate(res.certificate, f"{key}: search")
            how.append("search")
        else:
            open_parts.append(part)
    details["closed_by"] = how
    if not open_parts:
        return Case(key, VERIFIED, details=details), s
    model = find_nonvanishing_model(open_parts, pres.polynomials(), d, attempts=model_attempts)
    if model is not None:
        return Case(key, REFUTED, witness=model, details=details), s
    return Case(key, INCONCLUSIVE, witness={"open": [str(p) for p in open_parts], "exhausted_bound": max(p.degree() for p in open_parts)}, details=details), s


def _hplus_worker(args):
    case, s = hplus_case(*args)
    return case, s.transcript_hash(), s.transcript(), s


def scenario_hplus_preservation(d: int, n_max: int, b_degree: int = 0, mobius_max_n: int = 4, threads: int = 1) -> Report:
    """Mixed operator-valued cumulants over H_d^+ vanish (b's interleaved up to a degree)."""
    t0 = time.perf_counter()
    if d < 2 or n_max < 2:
        raise ArgumentError("d >= 2 and n_max >= 2 required")
    report = Report("hplus", {"d": d, "n_max": n_max, "b_degree": b_degree})
    jobs = []
    for n in range(2, n_max + 1):
        for jword in product(range(1, d + 1), repeat=n):
            if len(set(jword)) == 1:
                continue
            for bs in b_tuples(d, n, b_degree):
                jobs.append((d, n, jword, bs, 200_000, mobius_max_n))
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_hplus_worker, jobs, chunksize=16))
    else:
        results = [_hplus_worker(j) for j in jobs]
    for case, h, transcript, s in results:
        case.transcript_hash = h
        report.transcripts[h] = transcript
        report.sessions.append(s)
        report.add(case)
    report.notes.append(f"coverage: {len(jobs)} cases, b monomials of total degree <= {b_degree}")
    return _finish(report, t0)


# composition and CLT -------------------------------------------------------------------


def scenario_semicircle_conclusion(d: int, n_max: int) -> Report:
    t0 = time.perf_counter()
    if d < 2:
        raise ArgumentError("d >= 2 required")
    report = Report("semicircle", {"d": d, "n_max": n_max})
    forced = []
    for n in range(3, n_max + 1):
        sub = scenario_even(d, n) if n % 2 == 0 else scenario_odd(d, n)
        report.transcripts.update(sub.transcripts)
        report.sessions.extend(sub.sessions)
        h = next(iter(sub.transcripts))
        if sub.all_ok:
            forced.append(n)
            report.add(Case(f"n={n}", VERIFIED, transcript_hash=h, details={"derived": "u_ij^2 = u_ij^4 whenever kappa_n != 0"}))
        else:
            bad = next(c for c in sub.cases if not c.ok)
            report.add(Case(f"n={n}", REFUTED, witness=bad.witness, transcript_hash=h))
    all_forced = len(forced) == max(n_max - 2, 0)
    if n_max < 3:
        report.notes.append("vacuous: no cumulant order n >= 3 in range")
        report.add(Case("conclusion", VERIFIED, details={"vacuous": True}))
    elif all_forced:
        kappa = [Scalar.param("mean"), Scalar.param("variance")] + [0] * (n_max - 2)
        semi, (mean, var) = is_semicircular(DistributionSpec(kappa))
        record = {
            "statement": f"freeness preserved and X not inside H_{d}^+ imply kappa_n = 0 for 3 <= n <= {n_max}",
            "forced_zero": [f"kappa_{n}" for n in forced],
            "is_semicircular": semi,
            "mean": str(mean),
            "variance": str(var),
        }
        report.add(Case("conclusion", VERIFIED if semi else REFUTED, details=record))
    else:
        report.add(Case("conclusion", REFUTED, witness={"error": "some order did not force u^2 = u^4"}))
    return _finish(report, t0)


def clt_demo(order: int, counts, spec: DistributionSpec | None = None) -> Report:
    """Moments of clt_scaled_spec against the semicircle, exactly."""
    t0 = time.perf_counter()
    if not 2 <= order <= 8:
        raise ArgumentError("order must be between 2 and 8")
    counts = list(counts)
    if spec is None:
        spec = DistributionSpec([0, 1] + [1] * (order - 2))
    if spec.order < order:
        raise ArgumentError("spec truncated below the requested order")
    report = Report("clt", {"order": order, "counts": counts, "spec": str(spec)})
    symbolic = DistributionSpec([0, 1] + [Scalar.param(cumulant_param(n, 1)) for n in range(3, order + 1)])
    semi = semicircle_moments(order)
    errors = []
    for count in counts:
        scaled = clt_scaled_spec(spec, count)
        moments = moments_from_cumulants(scaled, order)
        err = [m.as_fraction() - s for m, s in zip(moments, semi)]
        errors.append(err)
        details = {"moments": [str(m) for m in moments], "errors": [str(e) for e in err]}
        ok = True
        if order >= 4:
            m4 = moments_from_cumulants(clt_scaled_spec(symbolic, count), 4)[3]
            expected = 2 + Scalar.param(cumulant_param(4, 1)) * Fraction(1, count)
            details["m4"] = str(m4)
            ok = m4 == expected
        if count == 1:
            ok = ok and tuple(moments) == moments_from_cumulants(spec, order)
        report.add(Case(f"count={count}", VERIFIED if ok else REFUTED, details=details))
    if len(counts) > 1:
        top = [abs(e[order - 1]) for e in errors]
        decreasing = all(b < a for a, b in zip(top, top[1:])) or all(t == 0 for t in top)
        report.add(Case(f"order-{order} error decays", VERIFIED if decreasing else REFUTED, details={"abs_errors": [str(t) for t in top]}))
    return _finish(report, t0)


SCENARIOS = {
    "even": scenario_even,
    "odd": scenario_odd,
    "d2": scenario_d2_remark,
    "hplus": scenario_hplus_preservation,
    "ominus": scenario_o_minus_one,
    "equiv": scenario_relation_equivalence,
    "semicircle": scenario_semicircle_conclusion,
}

__all__ = [
    "SCENARIOS",
    "clt_demo",
    "hplus_case",
    "scenario_d2_remark",
    "scenario_even",
    "scenario_hplus_preservation",
    "scenario_o_minus_one",
    "scenario_odd",
    "scenario_relation_equivalence",
    "scenario_semicircle_conclusion",
]
