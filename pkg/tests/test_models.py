import random

import numpy as np
import pytest

from qbernstein.freealg import FreePolynomial, Generator, eval_matrix, gen
from qbernstein.models import (
    anticommuting_involutions,
    evaluate_all,
    find_nonvanishing_model,
    householder_orthogonal,
    hyperoctahedral_model,
    random_signed_permutation,
    scalar_assignment,
    twisted_representation,
)
from qbernstein.presentations import hyperoctahedral_monomials, preset_presentation


@pytest.mark.parametrize("kind", ["O+", "H+", "O-1"])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_signed_permutations_model_every_preset(kind, d):
    rng = random.Random(d)
    rels = preset_presentation(kind, d).polynomials()
    for _ in range(5):
        assert all(evaluate_all(rels, scalar_assignment(random_signed_permutation(d, rng))))


def test_householder_is_orthogonal():
    for d in (3, 4, 5):
        a = np.array(householder_orthogonal(d), dtype=object)
        assert (a.dot(a.T) == np.eye(d, dtype=int)).all()
        assert all(x != 0 for x in a.flat)


def test_anticommuting_involutions():
    xs = anticommuting_involutions(4)
    size = xs[0].shape[0]
    eye = np.eye(size, dtype=int)
    for a, x in enumerate(xs):
        assert (x.dot(x) == eye).all() and (x == x.T).all()
        for y in xs[a + 1:]:
            assert not (x.dot(y) + y.dot(x)).any()


def test_twisted_representation():
    d = 3
    rep = twisted_representation(d)
    pres = preset_presentation("O-1", d)
    assert all(evaluate_all(pres.polynomials(), rep))
    # none of the hyperoctahedral monomials vanish
    for _, pair in hyperoctahedral_monomials(d):
        assert not evaluate_all([FreePolynomial.monomial(d, pair)], rep)[0]
    with pytest.raises(ValueError):
        twisted_representation(2)


@pytest.mark.parametrize("d", [2, 3])
def test_hyperoctahedral_models_satisfy_relations(d):
    rels = preset_presentation("H+", d).polynomials()
    for seed in range(4):
        assert all(evaluate_all(rels, hyperoctahedral_model(d, 2, random.Random(seed))))


def test_explicit_noncommuting_hplus_model():
    """u11 = E11 (x) X, u22 = E11 (x) Z, u12 = E22 (x) X, u21 = E22 (x) Z."""
    e11, e22 = np.diag([1, 0]), np.diag([0, 1])
    x, z = np.array([[0, 1], [1, 0]]), np.diag([1, -1])
    rep = {
        Generator(1, 1): np.kron(e11, x), Generator(2, 2): np.kron(e11, z),
        Generator(1, 2): np.kron(e22, x), Generator(2, 1): np.kron(e22, z),
    }
    assert all(evaluate_all(preset_presentation("H+", 2).polynomials(), rep))
    comm = gen(2, 1, 1) * gen(2, 2, 2) - gen(2, 2, 2) * gen(2, 1, 1)
    assert eval_matrix(comm, rep).any()


def test_find_nonvanishing_model():
    d = 2
    rels = preset_presentation("H+", d).polynomials()
    comm = gen(d, 1, 1) * gen(d, 2, 2) - gen(d, 2, 2) * gen(d, 1, 1)
    hit = find_nonvanishing_model([comm], rels, d)
    assert hit is not None and hit["nonzero"] == [str(comm)]
    assert find_nonvanishing_model([rels[0]], rels, d) is None


def test_eval_scalar_matches_matrix_evaluation():
    from fractions import Fraction

    from qbernstein.models import eval_scalar
    from qbernstein.scalar import Scalar

    rng = random.Random(11)
    d = 3
    p = Scalar.param("a", -1) * gen(d, 1, 1) * gen(d, 2, 2) ** 2 - 3 * gen(d, 3, 1) + Scalar.param("b", 2)
    for _ in range(10):
        m = random_signed_permutation(d, rng)
        entries = {Generator(i + 1, j + 1): m[i][j] for i in range(d) for j in range(d)}
        params = {"a": Fraction(rng.randint(1, 5)), "b": Fraction(rng.randint(-3, 3))}
        assert eval_scalar(p, entries, params) == eval_matrix(p, scalar_assignment(m), params)[0, 0]
