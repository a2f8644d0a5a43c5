import random
from fractions import Fraction as F

import pytest

from cohft.frobenius import (
    FrobeniusAlgebra,
    InvalidAlgebra,
    NotInvertible,
    NotSplit,
    rational_roots,
    rational_sqrt,
)
from cohft.linalg import identity, mat_mul, mat_inv, mat_vec, transpose
from cohft.sampling import random_nilpotent_algebra, random_semisimple_algebra


def dual_numbers():
    # Q[x]/(x^2) with the antidiagonal pairing
    structure = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    return FrobeniusAlgebra(2, [[0, 1], [1, 0]], structure, [1, 0])


def split_pair():
    # Q x Q componentwise, diagonal pairing
    structure = [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]
    return FrobeniusAlgebra(2, [[1, 0], [0, 1]], structure, [1, 1])


def test_multiply_unit_law():
    a = dual_numbers()
    for v in ((F(1), F(0)), (F(0), F(1)), (F(2), F(-3))):
        assert a.multiply(a.unit, v) == v


def test_multiply_nilpotent():
    a = dual_numbers()
    assert a.multiply((0, 1), (0, 1)) == (0, 0)


def test_multiply_dimension_mismatch():
    a = dual_numbers()
    with pytest.raises(ValueError):
        a.multiply((1,), (1, 0))


def test_semisimple_basis_product_law():
    rng = random.Random(1)
    for _ in range(5):
        alg, _, _ = random_semisimple_algebra(rng, 3)
        ss = alg.semisimplify()
        for mu in range(3):
            e = ss.basis_change[mu]
            want = tuple(x / ss.weights[mu] for x in e)
            assert alg.multiply(e, e) == want
            assert alg.frobenius_trace(e) == ss.weights[mu]
            for nu in range(3):
                if nu != mu:
                    assert alg.multiply(e, ss.basis_change[nu]) == (F(0),) * 3


def test_trace_of_unit():
    a = split_pair()
    assert a.frobenius_trace(a.unit) == a.pair(a.unit, a.unit)


def test_euler_class_dual_numbers():
    a = dual_numbers()
    assert a.euler_class() == (0, 2)


def test_trace_euler_equals_dim():
    rng = random.Random(2)
    algebras = [dual_numbers(), split_pair(), random_nilpotent_algebra()]
    for dim in (1, 2, 3):
        for _ in range(4):
            algebras.append(random_semisimple_algebra(rng, dim)[0])
    for alg in algebras:
        assert alg.frobenius_trace(alg.euler_class()) == alg.dim


def test_euler_class_basis_invariance():
    rng = random.Random(3)
    alg, _, _ = random_semisimple_algebra(rng, 2)
    # change the ambient basis by a random invertible matrix p: b'_i = sum p[i][k] b_k
    p = ((F(1), F(2)), (F(1), F(1)))
    pinv = mat_inv(p)
    eta2 = mat_mul(p, mat_mul(alg.eta, transpose(p)))
    structure2 = [[None] * 2 for _ in range(2)]
    for i in range(2):
        for j in range(2):
            prod = alg.multiply(mat_vec(transpose(p), identity(2)[i]), mat_vec(transpose(p), identity(2)[j]))
            # wrong transform would break the unit law, caught at construction
            structure2[i][j] = mat_vec(transpose(pinv), prod)
    unit2 = mat_vec(transpose(pinv), alg.unit)
    alg2 = FrobeniusAlgebra(2, eta2, structure2, unit2)
    alpha2 = alg2.euler_class()
    # push the transformed euler class back to the original coordinates
    assert mat_vec(transpose(p), alpha2) == alg.euler_class()


def test_invert_unit_and_euler():
    a = split_pair()
    assert a.invert(a.unit) == a.unit
    sa = a.semisimplify()
    inv = a.invert(a.euler_class())
    want = tuple(
        sum(sa.weights[m] ** 3 * sa.basis_change[m][k] for m in range(2)) for k in range(2)
    )
    assert inv == want


def test_invert_nilpotent_fails():
    a = dual_numbers()
    with pytest.raises(NotInvertible):
        a.invert((0, 2))


def test_is_semisimple():
    assert not dual_numbers().is_semisimple()
    assert split_pair().is_semisimple()
    one = FrobeniusAlgebra(1, [[1]], [[[1]]], [1])
    assert one.is_semisimple()


def test_semisimplify_split_pair():
    ss = split_pair().semisimplify()
    assert ss.weights == (F(1), F(1))
    assert sorted(ss.basis_change) == [(F(0), F(1)), (F(1), F(0))]


def test_semisimplify_roundtrip():
    rng = random.Random(4)
    for dim in (1, 2, 3):
        for _ in range(4):
            alg, _, _ = random_semisimple_algebra(rng, dim)
            ss = alg.semisimplify()
            rebuilt = FrobeniusAlgebra.from_semisimple(ss.weights, ss.basis_change)
            assert rebuilt.eta == alg.eta
            assert rebuilt.structure == alg.structure
            assert rebuilt.unit == alg.unit


def test_semisimplify_deterministic():
    rng = random.Random(5)
    alg, _, _ = random_semisimple_algebra(rng, 3)
    a = alg.semisimplify()
    b = alg.semisimplify()
    assert a.weights == b.weights and a.basis_change == b.basis_change


def test_not_split_irrational():
    # Q[x]/(x^2 - 2): a field, hence semisimple, but not split over Q
    structure = [[[1, 0], [0, 1]], [[0, 1], [2, 0]]]
    alg = FrobeniusAlgebra(2, [[1, 0], [0, 2]], structure, [1, 0])
    assert alg.is_semisimple()
    with pytest.raises(NotSplit):
        alg.semisimplify()


def test_not_split_nonsquare_norm():
    # split over Q but the projector norms are not rational squares, so no
    # eta-orthonormal rational basis exists
    structure = [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]
    alg = FrobeniusAlgebra(2, [[2, 0], [0, 1]], structure, [1, 1])
    assert alg.is_semisimple()
    with pytest.raises(NotSplit):
        alg.semisimplify()


def test_semisimplify_requires_semisimple():
    with pytest.raises(NotInvertible):
        dual_numbers().semisimplify()


def test_euler_power():
    rng = random.Random(6)
    alg, _, _ = random_semisimple_algebra(rng, 2)
    assert alg.euler_power(0) == alg.unit
    for g in range(-4, 5):
        assert alg.multiply(alg.euler_power(g), alg.euler_power(-g)) == alg.unit
    ss = alg.semisimplify()
    for g in (-2, -1, 0, 1, 2, 3):
        want = tuple(
            sum(ss.weights[m] ** (1 - 2 * g) * ss.basis_change[m][k] for m in range(2))
            for k in range(2)
        )
        assert alg.euler_power(g) == want


def test_euler_power_negative_needs_semisimple():
    with pytest.raises(NotInvertible):
        dual_numbers().euler_power(-1)


def test_frobenius_symmetry_random():
    rng = random.Random(7)
    alg, _, _ = random_semisimple_algebra(rng, 3)
    basis = identity(3)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                lhs = alg.pair(alg.multiply(basis[i], basis[j]), basis[k])
                rhs = alg.pair(basis[i], alg.multiply(basis[j], basis[k]))
                assert lhs == rhs


def test_validation_reports():
    with pytest.raises(InvalidAlgebra) as exc:
        FrobeniusAlgebra(2, [[0, 1], [0, 0]], [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [1, 0])
    assert any("symmetric" in p for p in exc.value.problems)
    with pytest.raises(InvalidAlgebra) as exc:
        FrobeniusAlgebra(2, [[1, 0], [0, 0]], [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [1, 0])
    assert any("degenerate" in p for p in exc.value.problems)
    with pytest.raises(InvalidAlgebra) as exc:
        FrobeniusAlgebra(2, [[0, 1], [1, 0]], [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [0, 1])
    assert any("neutral" in p for p in exc.value.problems)


def test_semisimple_data_rejects_singular_basis():
    from cohft.frobenius import SemisimpleData

    with pytest.raises(InvalidAlgebra):
        SemisimpleData([F(1), F(1)], [[1, 0], [2, 0]])
    with pytest.raises(InvalidAlgebra):
        SemisimpleData([F(1), F(0)], [[1, 0], [0, 1]])


def test_rational_helpers():
    assert rational_sqrt(F(9, 4)) == F(3, 2)
    assert rational_sqrt(F(2)) is None
    assert rational_sqrt(F(-1)) is None
    assert rational_roots([F(-2), F(1)]) == [F(2)]
    assert rational_roots([F(-2), F(0), F(1)]) == []  # x^2 - 2
    assert rational_roots([F(0), F(-1, 2), F(1)]) == [F(0), F(1, 2)]
