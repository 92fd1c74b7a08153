import random
from fractions import Fraction
from itertools import product

import pytest

from qbernstein.cumulants import DistributionSpec, FreeFamilySpec, cumulant_param, moments_from_cumulants
from qbernstein.errors import ArgumentError, TruncationError
from qbernstein.freealg import FreePolynomial, Generator, Rewriter, eval_matrix, gen, unit
from qbernstein.ncpart import SetPartition, enumerate_nc, mobius_to_top, one, zero
from qbernstein.opvalued import (
    OpWord,
    RotatedFamily,
    b_tuples,
    freeness_constraints,
    opval_cumulant_closed,
    opval_cumulant_mobius,
    opval_moment,
    opval_moment_nested,
)
from qbernstein.presentations import preset_presentation
from qbernstein.scalar import Scalar


def k(n, i):
    return Scalar.param(cumulant_param(n, i))


def fam_sym(d, order, identical=False):
    return RotatedFamily(FreeFamilySpec.symbolic(d, order, identical))


def random_family(d, order, rng):
    specs = [DistributionSpec([Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(order)]) for _ in range(d)]
    return RotatedFamily(FreeFamilySpec(d, tuple(specs)))


def test_first_moment():
    d = 2
    fam = fam_sym(d, 3)
    assert opval_moment(fam, OpWord.of(d, [1])) == sum((k(1, i) * gen(d, i, 1) for i in (1, 2)), FreePolynomial.zero(d))


def test_second_moment_killed_by_ortho():
    d = 3
    fam = RotatedFamily(FreeFamilySpec.iid(DistributionSpec([0, Scalar.param("s"), 0]), d), preset_presentation("O+", d))
    m = opval_moment(fam, OpWord.of(d, [1, 2]))
    ortho = sum((gen(d, i, 1) * gen(d, i, 2) for i in range(1, d + 1)), FreePolynomial.zero(d))
    assert m == Scalar.param("s") * ortho
    assert ortho in fam.presentation.polynomials()


def test_second_moment_with_b_by_hand():
    d = 2
    fam = fam_sym(d, 3)
    b = gen(d, 1, 2)
    got = opval_moment(fam, OpWord.of(d, [1, 2], [b, unit(d)]))
    want = FreePolynomial.zero(d)
    for i1, i2 in product((1, 2), repeat=2):
        c = (k(2, i1) + k(1, i1) * k(1, i1)) if i1 == i2 else k(1, i1) * k(1, i2)
        want = want + c * gen(d, i1, 1) * b * gen(d, i2, 2)
    assert got == want


def test_nested_extremes():
    d = 2
    fam = fam_sym(d, 4)
    bs = [gen(d, 2, 1), unit(d), gen(d, 1, 1)]
    w = OpWord.of(d, [1, 2, 2], bs)
    assert opval_moment_nested(fam, w, one(3)) == opval_moment(fam, w)
    prod = unit(d)
    for j, b in w.slots:
        prod = prod * opval_moment(fam, OpWord(((j, b),)))
    assert opval_moment_nested(fam, w, zero(3)) == prod


def test_nested_hand_example():
    d = 2
    fam = fam_sym(d, 4)
    b1, b2, b3 = gen(d, 1, 2), gen(d, 2, 2), gen(d, 2, 1)
    w = OpWord.of(d, [1, 2, 1], [b1, b2, b3])
    inner = opval_moment(fam, OpWord.of(d, [2], [b2]))
    want = opval_moment(fam, OpWord.of(d, [1, 1], [b1 * inner, b3]))
    assert opval_moment_nested(fam, w, SetPartition.of([[1, 3], [2]])) == want


def test_nested_errors():
    fam = fam_sym(2, 4)
    with pytest.raises(ArgumentError):
        opval_moment_nested(fam, OpWord.of(2, [1, 2]), one(3))
    with pytest.raises(ArgumentError):
        opval_moment_nested(fam, OpWord.of(2, [1, 2, 1, 2]), SetPartition.of([[1, 3], [2, 4]]))
    with pytest.raises(TruncationError):
        opval_moment(fam_sym(2, 2), OpWord.of(2, [1, 1, 1]))
    with pytest.raises(ArgumentError):
        opval_moment(fam, OpWord.of(2, [3]))


def test_small_cumulants():
    d = 2
    fam = fam_sym(d, 3)
    w1 = OpWord.of(d, [2], [gen(d, 1, 1)])
    assert opval_cumulant_mobius(fam, w1) == opval_moment(fam, w1)
    w2 = OpWord.of(d, [1, 2])
    e = lambda j: opval_moment(fam, OpWord.of(d, [j]))  # noqa: E731
    assert opval_cumulant_mobius(fam, w2) == opval_moment(fam, w2) - e(1) * e(2)


def test_closed_form_examples():
    d = 3
    fam = fam_sym(d, 4, identical=True)
    got = opval_cumulant_closed(fam, OpWord.of(d, [1, 2, 3]))
    want = k(3, 1) * sum((gen(d, i, 1) * gen(d, i, 2) * gen(d, i, 3) for i in range(1, d + 1)), FreePolynomial.zero(d))
    assert got == want
    zero3 = RotatedFamily(FreeFamilySpec.iid(DistributionSpec([0, 1, 0, 1]), d))
    assert opval_cumulant_closed(zero3, OpWord.of(d, [1, 2, 1])).is_zero()
    b = gen(d, 2, 3)
    two = opval_cumulant_closed(fam_sym(d, 3), OpWord.of(d, [1, 2], [b, unit(d)]))
    assert two == sum((k(2, i) * gen(d, i, 1) * b * gen(d, i, 2) for i in range(1, d + 1)), FreePolynomial.zero(d))
    assert two == opval_cumulant_mobius(fam_sym(d, 3), OpWord.of(d, [1, 2], [b, unit(d)]))


@pytest.mark.parametrize("d", [2, 3])
def test_closed_equals_mobius_symbolic(d):
    fam = fam_sym(d, 4)
    gens = [unit(d)] + [gen(d, i, j) for i in range(1, d + 1) for j in range(1, d + 1)]
    rng = random.Random(d)
    for n in range(1, 5):
        for jword in product(range(1, d + 1), repeat=n):
            bs = [rng.choice(gens) for _ in range(n)]
            w = OpWord.of(d, jword, bs)
            assert opval_cumulant_closed(fam, w) == opval_cumulant_mobius(fam, w)


def test_closed_equals_mobius_random_rational():
    rng = random.Random(3)
    for _ in range(4):
        d = rng.choice([2, 3])
        fam = random_family(d, 4, rng)
        gens = [unit(d)] + [gen(d, i, j) for i in range(1, d + 1) for j in range(1, d + 1)]
        for _ in range(15):
            n = rng.randint(1, 4)
            w = OpWord.of(d, [rng.randint(1, d) for _ in range(n)], [rng.choice(gens) for _ in range(n)])
            assert opval_cumulant_closed(fam, w) == opval_cumulant_mobius(fam, w)


def test_restriction_to_scalars():
    """d = 1 with u_11 -> 1: operator-valued cumulants collapse to scalar ones."""
    rng = random.Random(5)
    spec = DistributionSpec([Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(5)])
    fam = RotatedFamily(FreeFamilySpec(1, (spec,)))
    one_model = {Generator(1, 1): [[1]]}
    for n in range(1, 6):
        w = OpWord.of(1, [1] * n)
        kap = eval_matrix(opval_cumulant_mobius(fam, w), one_model)[0, 0]
        mom = eval_matrix(opval_moment(fam, w), one_model)[0, 0]
        assert kap == spec[n].as_fraction()
        assert mom == moments_from_cumulants(spec, n)[-1].as_fraction()


def test_module_property():
    d = 2
    fam = fam_sym(d, 4)
    b, c = gen(d, 1, 2), gen(d, 2, 1)
    # kappa(Y b, c Y') with b c placed between the two arguments either way
    left = OpWord.of(d, [1, 2, 1], [b * c, unit(d), unit(d)])
    for f in (opval_cumulant_closed, opval_cumulant_mobius):
        assert f(fam, left) == f(fam, OpWord(((1, b * c), (2, unit(d)), (1, unit(d)))))
    # a scalar b pulls out
    scaled = OpWord.of(d, [1, 2], [3 * unit(d), unit(d)])
    assert opval_cumulant_mobius(fam, scaled) == 3 * opval_cumulant_mobius(fam, OpWord.of(d, [1, 2]))


def test_freeness_constraints():
    d = 3
    fam_i = fam_sym(d, 4, identical=True)
    (p,) = freeness_constraints(fam_i, 4, (2, 2, 1, 1))
    assert p == sum((gen(d, i, 2) ** 2 * gen(d, i, 1) ** 2 for i in range(1, d + 1)), FreePolynomial.zero(d))
    (p,) = freeness_constraints(fam_i, 3, (1, 2, 2))
    assert p == sum((gen(d, i, 1) * gen(d, i, 2) ** 2 for i in range(1, d + 1)), FreePolynomial.zero(d))
    parts = freeness_constraints(fam_sym(2, 3), 3, (1, 2, 2))
    assert sorted(map(str, parts)) == sorted(str(gen(2, i, 1) * gen(2, i, 2) ** 2) for i in (1, 2))
    with pytest.raises(ArgumentError):
        freeness_constraints(fam_i, 3, (1, 1, 1))


def test_b_tuples():
    assert len(list(b_tuples(2, 3, 0))) == 1
    assert len(list(b_tuples(2, 2, 1))) == 1 + 2 * 4
    assert all(sum(b.degree() for b in t) <= 2 for t in b_tuples(2, 2, 2))


def test_h_plus_cumulant_with_b_reduces():
    d = 2
    pres = preset_presentation("H+", d)
    fam = RotatedFamily(FreeFamilySpec.symbolic(d, 3), pres)
    w = OpWord.of(d, [1, 1, 2], [unit(d), gen(d, 1, 1), unit(d)])
    closed = opval_cumulant_closed(fam, w)
    assert not closed.is_zero()
    assert Rewriter(pres.rules).reduce(closed).is_zero()
