"""Truncated power series with matrix and vector coefficients.

EndSeries models End(A)-valued series R(z) = R_0 + R_1 z + ... + R_D z^D;
all operations are exact through the truncation order and drop higher terms.
The two series-level facts the engine leans on are that inversion works
order by order whenever R_0 is invertible, and that the edge numerator
eta^{-1} - S(z) eta^{-1} S(w)^t is divisible by z + w exactly when S comes
from a series satisfying the symplectic condition.
"""

from .linalg import (
    Q1,
    identity,
    mat,
    mat_inv,
    mat_mul,
    mat_scale,
    mat_sub,
    mat_vec,
    transpose,
    vec,
    zero_mat,
    zero_vec,
)


class OrderMismatch(ValueError):
    pass


class ConstantTermSingular(ArithmeticError):
    pass


class NotDivisible(ArithmeticError):
    """Edge numerator has a nonzero remainder mod (z+w): R is not symplectic."""


class EndSeries:
    def __init__(self, dim, order, coeffs):
        self.dim = dim
        self.order = order
        coeffs = [mat(c) for c in coeffs]
        if len(coeffs) != order + 1:
            raise OrderMismatch("expected %d coefficients" % (order + 1))
        for c in coeffs:
            if len(c) != dim or any(len(row) != dim for row in c):
                raise ValueError("coefficient has wrong shape")
        self.coeffs = tuple(coeffs)

    @classmethod
    def identity(cls, dim, order):
        return cls(dim, order, [identity(dim)] + [zero_mat(dim) for _ in range(order)])

    @classmethod
    def from_higher_coeffs(cls, dim, order, higher):
        """R_0 = Id implied; higher = [R_1, R_2, ...], padded or cut to order."""
        coeffs = [identity(dim)]
        for k in range(order):
            coeffs.append(mat(higher[k]) if k < len(higher) else zero_mat(dim))
        return cls(dim, order, coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, EndSeries)
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(self.coeffs)

    def is_identity(self):
        return self == EndSeries.identity(self.dim, self.order)

    def negate_variable(self):
        """R(z) -> R(-z)."""
        return EndSeries(
            self.dim,
            self.order,
            [mat_scale(Q1 if k % 2 == 0 else -Q1, c) for k, c in enumerate(self.coeffs)],
        )

    def multiply(self, other):
        if self.order != other.order or self.dim != other.dim:
            raise OrderMismatch("series orders or dimensions differ")
        out = []
        for k in range(self.order + 1):
            acc = zero_mat(self.dim)
            for i in range(k + 1):
                term = mat_mul(self.coeffs[i], other.coeffs[k - i])
                acc = tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(acc, term))
            out.append(acc)
        return EndSeries(self.dim, self.order, out)

    def invert(self):
        try:
            c0 = mat_inv(self.coeffs[0])
        except ZeroDivisionError:
            raise ConstantTermSingular("constant term is singular") from None
        out = [c0]
        for k in range(1, self.order + 1):
            acc = zero_mat(self.dim)
            for i in range(1, k + 1):
                term = mat_mul(self.coeffs[i], out[k - i])
                acc = tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(acc, term))
            out.append(mat_scale(-1, mat_mul(c0, acc)))
        return EndSeries(self.dim, self.order, out)

    def adjoint(self, eta):
        """Coefficientwise eta-adjoint  M -> eta^{-1} M^t eta."""
        eta = mat(eta)
        eta_inv = mat_inv(eta)
        return EndSeries(
            self.dim,
            self.order,
            [mat_mul(eta_inv, mat_mul(transpose(c), eta)) for c in self.coeffs],
        )

    def apply(self, v):
        """R(z) v as a VecSeries."""
        return VecSeries(self.dim, self.order, [mat_vec(c, vec(v)) for c in self.coeffs])


class VecSeries:
    def __init__(self, dim, order, coeffs):
        self.dim = dim
        self.order = order
        coeffs = [vec(c) for c in coeffs]
        if len(coeffs) != order + 1:
            raise OrderMismatch("expected %d coefficients" % (order + 1))
        self.coeffs = tuple(coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, VecSeries)
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def valuation(self):
        for k, c in enumerate(self.coeffs):
            if any(x != 0 for x in c):
                return k
        return self.order + 1


class BivectorSeries:
    """Coefficients K[a][b] are dim x dim matrices of the z^a w^b terms.

    Only the triangle a + b <= order is stored; the matrix entry (i, j)
    multiplies b_i (x) b_j in the ambient basis.
    """

    def __init__(self, dim, order, table):
        self.dim = dim
        self.order = order
        self.table = {
            (a, b): mat(m) for (a, b), m in table.items() if a + b <= order
        }

    def coeff(self, a, b):
        return self.table.get((a, b), zero_mat(self.dim))

    def is_zero(self):
        return all(all(x == 0 for row in m for x in row) for m in self.table.values())


def check_symplectic(r, eta):
    """R(z) R(-z)^* == Id through the truncation order."""
    prod = r.multiply(r.negate_variable().adjoint(eta))
    return prod.is_identity()


def edge_kernel(r, eta):
    """(eta^{-1} - S(z) eta^{-1} S(w)^t) / (z + w)  for S = R^{-1}.

    Division runs column by column with an explicit remainder check: the
    remainder is the numerator evaluated at w = -z, which vanishes exactly
    when R is symplectic.  Raises NotDivisible otherwise.
    """
    dim, order = r.dim, r.order
    eta = mat(eta)
    eta_inv = mat_inv(eta)
    s = r.invert()
    # numerator N[a][b] for a+b <= order
    n_table = {}
    for a in range(order + 1):
        for b in range(order + 1 - a):
            term = mat_mul(s.coeffs[a], mat_mul(eta_inv, transpose(s.coeffs[b])))
            if a == 0 and b == 0:
                term = mat_sub(term, eta_inv)
            n_table[(a, b)] = mat_scale(-1, term)
    # K[a][b] with a+b <= order-1 from N[a][b+1] = K[a][b] + K[a-1][b+1]
    k_table = {}
    for a in range(order):
        for b in range(order - a):
            m = n_table[(a, b + 1)]
            if a > 0:
                m = mat_sub(m, k_table[(a - 1, b + 1)])
            k_table[(a, b)] = m
    # remainder: N[0][0] and N[a][0] - K[a-1][0] for a >= 1 must vanish
    def _is_zero(m):
        return all(x == 0 for row in m for x in row)

    if not _is_zero(n_table[(0, 0)]):
        raise NotDivisible("numerator has constant term")
    for a in range(1, order + 1):
        m = n_table[(a, 0)]
        if a - 1 <= order - 1 and (a - 1, 0) in k_table:
            m = mat_sub(m, k_table[(a - 1, 0)])
        if not _is_zero(m):
            raise NotDivisible("numerator is not divisible by z + w")
    return BivectorSeries(dim, order - 1 if order > 0 else 0, k_table)


def translation_vector(r, unit):
    """T(z) = z (unit - R(z)^{-1} unit); always has valuation >= 2."""
    s = r.invert().apply(unit)
    coeffs = [zero_vec(r.dim), tuple(u - x for u, x in zip(vec(unit), s.coeffs[0]))]
    for k in range(1, r.order):
        coeffs.append(tuple(-x for x in s.coeffs[k]))
    return VecSeries(r.dim, r.order, coeffs[: r.order + 1])
