"""Concrete matrix models used to sanity-check facts and refute memberships.

* Signed permutation matrices give 1x1 models (u_ij -> scalar entry) of all
  three presets; every derived fact must vanish there.
* ``twisted_representation`` builds rational matrices satisfying every
  O_{-1}(d) relation with u_11 u_12 != 0.
* ``hyperoctahedral_model`` builds random integer representations of H_d^+,
  used to show that a polynomial is outside the H_d^+ ideal.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .freealg import FreePolynomial, Generator, eval_matrix


def random_signed_permutation(d: int, rng: random.Random) -> list[list[int]]:
    perm = list(range(d))
    rng.shuffle(perm)
    return [[rng.choice((-1, 1)) if perm[i] == j else 0 for j in range(d)] for i in range(d)]


def scalar_assignment(matrix) -> dict[Generator, list[list[int]]]:
    """u_ij -> the 1x1 matrix [m_ij]."""
    d = len(matrix)
    return {Generator(i + 1, j + 1): [[matrix[i][j]]] for i in range(d) for j in range(d)}


def random_params(names: Iterable[str], zero: Iterable[str], rng: random.Random) -> dict[str, Fraction]:
    zero = set(zero)
    out = {}
    for name in sorted(names):
        if name in zero:
            out[name] = Fraction(0)
        else:
            num = rng.choice([k for k in range(-9, 10) if k])
            out[name] = Fraction(num, rng.randint(1, 5))
    return out


def is_zero_matrix(m: np.ndarray) -> bool:
    return all(x == 0 for x in m.flat)


def eval_scalar(p: FreePolynomial, entries: Mapping[Generator, int], params: Mapping[str, Fraction]) -> Fraction:
    """p at a 1x1 model, without building matrices."""
    total = Fraction(0)
    for (w, m), c in p.items():
        v = c
        for g in w:
            v *= entries[g]
            if not v:
                break
        if v:
            for name, e in m:
                v *= params[name] ** e
            total += v
    return total


def soundness_failures(session, trials: int = 20, seed: int = 0) -> list[dict]:
    """Facts that fail to vanish at random signed permutation models.

    Parameters declared zero are set to 0; all others get random nonzero
    rationals.  An empty list means every fact passed every trial.
    """
    rng = random.Random(seed)
    d = session.d
    names = set()
    for f in session.facts:
        names |= f.poly.params()
    failures = []
    for t in range(trials):
        matrix = random_signed_permutation(d, rng)
        entries = {Generator(i + 1, j + 1): matrix[i][j] for i in range(d) for j in range(d)}
        params = random_params(names, session.zero, rng)
        for k, f in enumerate(session.facts):
            if eval_scalar(f.poly, entries, params):
                failures.append({"trial": t, "fact": k, "poly": str(f.poly), "matrix": matrix})
    return failures


def householder_orthogonal(d: int) -> list[list[Fraction]]:
    """I - (2/d) J: rational, symmetric, orthogonal, no zero entries for d >= 3."""
    return [[Fraction(int(i == j)) - Fraction(2, d) for j in range(d)] for i in range(d)]


def anticommuting_involutions(m: int) -> list[np.ndarray]:
    """m pairwise anticommuting real symmetric involutions of size 2^(m-1)."""
    sx = np.array([[0, 1], [1, 0]], dtype=object)
    sz = np.array([[1, 0], [0, -1]], dtype=object)
    fam = [np.array([[1]], dtype=object)]
    for _ in range(m - 1):
        size = fam[0].shape[0]
        fam = [np.kron(sx, g) for g in fam] + [np.kron(sz, np.eye(size, dtype=int).astype(object))]
    return fam


def twisted_representation(d: int) -> dict[Generator, np.ndarray]:
    """u_ij = a_ij x_i (x) y_j for a rational orthogonal A and anticommuting x's, y's.

    Entries in one row or column anticommute (one tensor factor anticommutes,
    the other squares to 1), disjoint entries commute (both factors
    anticommute), and orthogonality of A gives the quadratic relations.
    """
    if d < 3:
        raise ValueError("needs d >= 3 so that the orthogonal matrix has no zero entries")
    a = householder_orthogonal(d)
    xs = anticommuting_involutions(d)
    out = {}
    for i in range(d):
        for j in range(d):
            out[Generator(i + 1, j + 1)] = a[i][j] * np.kron(xs[i], xs[j])
    return out


def _random_signed_involution(points: list[int], rng: random.Random) -> dict[int, tuple[int, int]]:
    """Symmetric signed involution on ``points``: p -> (image, sign)."""
    pts = points[:]
    rng.shuffle(pts)
    out = {}
    while pts:
        a = pts.pop()
        if pts and rng.random() < 0.7:
            b = pts.pop()
            s = rng.choice((-1, 1))
            out[a] = (b, s)
            out[b] = (a, s)
        else:
            out[a] = (a, rng.choice((-1, 1)))
    return out


def hyperoctahedral_model(d: int, m: int, rng: random.Random) -> dict[Generator, np.ndarray]:
    """A random integer representation of H_d^+ on C^(d!) (x) C^m.

    Basis vectors are pairs (sigma, t), sigma in S_d.  P_ij projects onto
    sigma(j) = i, so the P_ij form a commuting magic unitary.  u_ij is a
    random symmetric signed involution supported on the range of P_ij, hence
    u_ij^2 = P_ij and entries sharing a row or column have orthogonal
    supports.  The involutions need not respect the sigma grading, which is
    what makes entries in disjoint positions fail to commute.
    """
    from itertools import permutations

    perms = list(permutations(range(d)))
    index = {(p, t): k for k, (p, t) in enumerate((p, t) for p in perms for t in range(m))}
    size = len(index)
    out = {}
    for i in range(d):
        for j in range(d):
            support = [index[(p, t)] for p in perms if p[j] == i for t in range(m)]
            inv = _random_signed_involution(support, rng)
            mat = np.zeros((size, size), dtype=int)
            for a, (b, s) in inv.items():
                mat[b, a] = s
            out[Generator(i + 1, j + 1)] = mat.astype(object)
    return out


def find_nonvanishing_model(
    polys: Iterable[FreePolynomial],
    relations: Iterable[FreePolynomial],
    d: int,
    attempts: int = 12,
    seed: int = 0,
    m: int = 2,
) -> dict | None:
    """Search random H_d^+ models for one where some polynomial is nonzero.

    Every model is re-checked against ``relations`` before it is trusted.
    Returns a description of the first hit (seed, size, offending polynomial)
    or None.
    """
    polys = list(polys)
    relations = list(relations)
    for a in range(attempts):
        rng = random.Random(seed * 1000 + a)
        model = hyperoctahedral_model(d, m, rng)
        values = evaluate_all(polys, model)
        if all(values):
            continue
        if not all(evaluate_all(relations, model)):
            raise AssertionError("random hyperoctahedral model violates a relation")
        bad = [str(p) for p, ok in zip(polys, values) if not ok]
        return {"model": "signed S_d action", "seed": seed * 1000 + a, "aux_dim": m, "size": model[Generator(1, 1)].shape[0], "nonzero": bad}
    return None


def evaluate_all(polys: Iterable[FreePolynomial], assignment: Mapping) -> list[bool]:
    """For each polynomial, whether it evaluates to the zero matrix."""
    return [is_zero_matrix(eval_matrix(p, assignment)) for p in polys]


__all__ = [
    "anticommuting_involutions",
    "find_nonvanishing_model",
    "hyperoctahedral_model",
    "evaluate_all",
    "eval_scalar",
    "householder_orthogonal",
    "random_signed_permutation",
    "scalar_assignment",
    "soundness_failures",
    "twisted_representation",
]
