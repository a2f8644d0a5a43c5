import random
from fractions import Fraction as F

import pytest

from cohft.kappa import (
    CovectorKappaPoly,
    KappaPoly,
    NonzeroConstantTerm,
    WrongConstantTerm,
    convolution,
    convolution_tensor,
    coproduct,
    exp_conv,
    exp_conv_series,
    is_grouplike,
    is_primitive,
    log_conv,
    tensor_truncate,
    theta_covector,
)
from cohft.sampling import random_semisimple_algebra


def random_primitive(rng, dim, cap, maxj=4):
    comps = []
    for _ in range(dim):
        terms = {(j,): F(rng.randrange(-3, 4)) for j in range(1, maxj + 1)}
        comps.append(KappaPoly(cap, terms))
    return CovectorKappaPoly(tuple(comps))


def tensor_mul(t1, t2, cap):
    out = {}
    for (a1, b1), c1 in t1.items():
        for (a2, b2), c2 in t2.items():
            key = (tuple(sorted(a1 + a2)), tuple(sorted(b1 + b2)))
            if sum(key[0]) + sum(key[1]) <= cap:
                out[key] = out.get(key, 0) + c1 * c2
    return {k: c for k, c in out.items() if c != 0}


def test_coproduct_examples():
    cap = 6
    one = KappaPoly.constant(cap, 1)
    assert coproduct(one) == {((), ()): 1}
    k2 = KappaPoly.generator(cap, 2)
    assert coproduct(k2) == {((2,), ()): 1, ((), (2,)): 1}
    k1sq = KappaPoly.generator(cap, 1) * KappaPoly.generator(cap, 1)
    assert coproduct(k1sq) == {((1, 1), ()): 1, ((1,), (1,)): 2, ((), (1, 1)): 1}


def test_coproduct_is_algebra_map():
    rng = random.Random(0)
    cap = 6
    for _ in range(10):
        p = KappaPoly(cap, {(rng.randrange(1, 4),): F(rng.randrange(-2, 3)), (): F(1)})
        q = KappaPoly(cap, {(rng.randrange(1, 4), rng.randrange(1, 3)): F(rng.randrange(-2, 3))})
        lhs = tensor_truncate(coproduct(p * q), cap)
        rhs = tensor_truncate(tensor_mul(coproduct(p), coproduct(q), cap), cap)
        assert lhs == rhs


def test_convolution_neutral_element():
    rng = random.Random(1)
    for dim in (1, 2, 3):
        alg, _, _ = random_semisimple_algebra(rng, dim)
        ss = alg.semisimplify()
        theta = theta_covector(alg, 5)
        x = random_primitive(rng, dim, 5)
        y = exp_conv(x, ss)
        assert convolution(theta, y, ss) == y
        assert convolution(y, theta, ss) == y


def test_convolution_scalar_case():
    # dim 1 with weight t: (X * Y)(e) = t^{-1} X(e) Y(e)
    from cohft.frobenius import FrobeniusAlgebra

    alg = FrobeniusAlgebra.from_semisimple([F(4)], [[F(1, 2)]])
    ss = alg.semisimplify()
    cap = 4
    x = CovectorKappaPoly((KappaPoly(cap, {(1,): F(3), (): F(1)}),))
    y = CovectorKappaPoly((KappaPoly(cap, {(2,): F(5), (): F(2)}),))
    conv = convolution(x, y, ss)
    t = ss.weights[0]
    e = ss.basis_change[0]
    want = (x.value(e) * y.value(e)).scale(1 / t)
    assert conv.value(e) == want


def test_exp_log_roundtrip():
    rng = random.Random(2)
    for dim in (1, 2, 3):
        alg, _, _ = random_semisimple_algebra(rng, dim)
        ss = alg.semisimplify()
        for _ in range(4):
            x = random_primitive(rng, dim, 6)
            big = exp_conv(x, ss)
            assert log_conv(big, ss) == x
            assert exp_conv_series(x, ss) == big


def test_exp_conv_zero_is_theta():
    rng = random.Random(3)
    alg, _, _ = random_semisimple_algebra(rng, 2)
    ss = alg.semisimplify()
    zero = CovectorKappaPoly.zero(2, 4)
    assert exp_conv(zero, ss) == theta_covector(alg, 4)


def test_exp_conv_rejects_constant_term():
    rng = random.Random(4)
    alg, _, _ = random_semisimple_algebra(rng, 2)
    ss = alg.semisimplify()
    bad = CovectorKappaPoly((KappaPoly.constant(4, 1), KappaPoly(4)))
    with pytest.raises(NonzeroConstantTerm):
        exp_conv(bad, ss)
    with pytest.raises(WrongConstantTerm):
        log_conv(bad, ss)


def test_scalar_log_series():
    from cohft.frobenius import FrobeniusAlgebra

    alg = FrobeniusAlgebra(1, [[1]], [[[1]]], [1])
    ss = alg.semisimplify()
    x = CovectorKappaPoly((KappaPoly.constant(4, 1) + KappaPoly.generator(4, 1),))
    out = log_conv(x, ss).components[0]
    want = KappaPoly(
        4, {(1,): F(1), (1, 1): F(-1, 2), (1, 1, 1): F(1, 3), (1, 1, 1, 1): F(-1, 4)}
    )
    assert out == want


def test_grouplike_primitive_both_directions():
    rng = random.Random(5)
    for dim in (1, 2, 3):
        alg, _, _ = random_semisimple_algebra(rng, dim)
        ss = alg.semisimplify()
        theta = theta_covector(alg, 6)
        assert is_grouplike(theta, ss)
        for _ in range(3):
            x = random_primitive(rng, dim, 6)
            assert is_primitive(x)
            big = exp_conv(x, ss)
            assert is_grouplike(big, ss)
            assert is_primitive(log_conv(big, ss))


def test_not_grouplike_when_not_primitive():
    rng = random.Random(6)
    alg, _, _ = random_semisimple_algebra(rng, 2)
    ss = alg.semisimplify()
    # kappa_1^2 is not primitive, so its exponential is not group-like
    x = CovectorKappaPoly((KappaPoly(6, {(1, 1): F(1)}), KappaPoly(6)))
    assert not is_primitive(x)
    assert not is_grouplike(exp_conv(x, ss), ss)


def test_grouplike_needs_theta_constant():
    rng = random.Random(7)
    alg, _, _ = random_semisimple_algebra(rng, 2)
    ss = alg.semisimplify()
    one = CovectorKappaPoly((KappaPoly.constant(4, 1), KappaPoly.constant(4, 1)))
    theta = theta_covector(alg, 4)
    if one != theta:
        assert not is_grouplike(one, ss)


def test_antipode_hopf_identity():
    # m (S (x) id) Delta = unit . counit, on generators and on a product
    cap = 6
    for p in (KappaPoly.generator(cap, 3), KappaPoly.generator(cap, 1) * KappaPoly.generator(cap, 2)):
        acc = KappaPoly(cap)
        for (k1, k2), c in coproduct(p).items():
            acc = acc + (KappaPoly(cap, {k1: 1}).antipode() * KappaPoly(cap, {k2: 1})).scale(c)
        assert acc.is_zero()  # counit kills positive degree


def test_convolution_tensor_matches_coproduct_for_grouplike():
    rng = random.Random(8)
    alg, _, _ = random_semisimple_algebra(rng, 2)
    ss = alg.semisimplify()
    x = random_primitive(rng, 2, 5)
    big = exp_conv(x, ss)
    tensors = convolution_tensor(big, big, ss)
    for comp, tensor in zip(big.components, tensors):
        assert tensor_truncate(coproduct(comp), 5) == tensor


def test_rendering_sorted():
    p = KappaPoly(6, {(2,): F(1), (1, 1): F(-1, 3), (): F(2)})
    assert p.render() == "2 - 1/3*k1^2 + k2"
