"""Seeded random generators for algebras, R-matrices and specifications.

Symplectic series are produced as exponentials: R = exp(B_1 z + B_2 z^2 + ..)
satisfies the symplectic condition iff eta B_j is symmetric for odd j and
antisymmetric for even j, and exponentials of truncations stay exactly
symplectic through the truncation order.  Coherent specifications take phi
from the compatibility relation; incoherent ones perturb phi_1.
"""

from fractions import Fraction

from .frobenius import FrobeniusAlgebra
from .givental import CohFTSpec, coherent_phi
from .linalg import Q0, det, identity, mat, mat_mul, mat_scale
from .series import EndSeries, check_symplectic


def _rand_frac(rng, num=4, den=3):
    return Fraction(rng.randrange(-num, num + 1), rng.randrange(1, den + 1))


def _rand_nonzero(rng, num=4):
    while True:
        x = Fraction(rng.randrange(-num, num + 1), rng.randrange(1, 3))
        if x != 0:
            return x


def random_semisimple_algebra(rng, dim):
    """Split semisimple algebra with a random integral basis change."""
    weights = [_rand_nonzero(rng) for _ in range(dim)]
    while True:
        rows = [[Fraction(rng.randrange(-3, 4)) for _ in range(dim)] for _ in range(dim)]
        if det(mat(rows)) != 0:
            break
    return FrobeniusAlgebra.from_semisimple(weights, rows), weights, rows


def random_nilpotent_algebra():
    """Q[x]/(x^2) with the antidiagonal pairing: valid but not semisimple."""
    structure = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    return FrobeniusAlgebra(2, [[0, 1], [1, 0]], structure, [1, 0])


def random_symplectic_r(rng, algebra, order, sparsity=2):
    """exp(B_1 z + ... + B_order z^order) with the right eta symmetries."""
    dim = algebra.dim
    eta_inv = algebra.eta_inv
    bs = []
    for j in range(1, order + 1):
        s = [[Q0] * dim for _ in range(dim)]
        for i in range(dim):
            for k in range(i, dim):
                if rng.randrange(sparsity) == 0:
                    val = _rand_frac(rng, 2, 2)
                else:
                    val = Q0
                if j % 2 == 1:
                    s[i][k] = val
                    s[k][i] = val
                else:
                    if i == k:
                        continue
                    s[i][k] = val
                    s[k][i] = -val
        bs.append(mat_mul(eta_inv, mat(s)))
    r = _matrix_exp_series(dim, order, bs)
    assert check_symplectic(r, algebra.eta)
    return r


def _matrix_exp_series(dim, order, higher):
    """exp of B(z) = sum higher[j-1] z^j, truncated at the given order."""
    def cauchy(a, b):
        out = []
        for k in range(order + 1):
            acc = [[Q0] * dim for _ in range(dim)]
            for i in range(k + 1):
                if i > len(a) - 1 or k - i > len(b) - 1:
                    continue
                term = mat_mul(a[i], b[k - i])
                for r in range(dim):
                    for c in range(dim):
                        acc[r][c] += term[r][c]
            out.append(mat(acc))
        return out

    zero = mat([[0] * dim for _ in range(dim)])
    bseries = [zero] + [mat(h) for h in higher]
    while len(bseries) < order + 1:
        bseries.append(zero)
    result = [identity(dim)] + [zero] * order
    term = [identity(dim)] + [zero] * order
    for n in range(1, order + 1):
        term = cauchy(term, bseries)
        term = [mat_scale(Fraction(1, n), m) for m in term]
        result = [
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(m1, m2))
            for m1, m2 in zip(result, term)
        ]
    return EndSeries(dim, order, result)


def random_r_series(rng, dim, order):
    """Unconstrained R with R_0 = Id; typically not symplectic."""
    higher = [
        [[_rand_frac(rng, 2, 2) for _ in range(dim)] for _ in range(dim)]
        for _ in range(order)
    ]
    return EndSeries.from_higher_coeffs(dim, order, higher)


def coherent_spec(rng, dim, degree):
    """Random coherent specification: phi is forced by R."""
    algebra, _, _ = random_semisimple_algebra(rng, dim)
    ss = algebra.semisimplify()
    r = random_symplectic_r(rng, algebra, degree)
    phi = coherent_phi(algebra, ss, r, degree)
    return CohFTSpec(algebra, ss, phi, r, degree, coherent=True)


def incoherent_spec(rng, dim, degree):
    """Same data with phi_1 perturbed; compatibility fails by construction."""
    algebra, _, _ = random_semisimple_algebra(rng, dim)
    ss = algebra.semisimplify()
    r = random_symplectic_r(rng, algebra, degree)
    phi = [list(p) for p in coherent_phi(algebra, ss, r, degree)]
    phi[0][0] += 1
    return CohFTSpec(algebra, ss, phi, r, degree, coherent=False)


def trivial_spec(degree=3):
    """dim 1, eta(1,1) = 1, R = Id, phi = 0: the Witten correlator theory."""
    algebra = FrobeniusAlgebra(1, [[1]], [[[1]]], [1])
    ss = algebra.semisimplify()
    r = EndSeries.identity(1, degree)
    return CohFTSpec(algebra, ss, [], r, degree, coherent=True)


def scalar_exp_spec(a, degree):
    """dim 1 with R = exp(a z) and the matching coherent phi."""
    algebra = FrobeniusAlgebra(1, [[1]], [[[1]]], [1])
    ss = algebra.semisimplify()
    r = _matrix_exp_series(1, degree, [[[Fraction(a)]]] + [[[Q0]]] * (degree - 1))
    phi = coherent_phi(algebra, ss, r, degree)
    return CohFTSpec(algebra, ss, phi, r, degree, coherent=True)


def random_vector(rng, dim, num=3):
    return tuple(Fraction(rng.randrange(-num, num + 1)) for _ in range(dim))
