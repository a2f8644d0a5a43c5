"""Commutative Frobenius algebras over the rationals.

An algebra is given by a metric eta, structure constants for the product in
an ambient basis, and the coordinates of the unit.  The engine only ever
works over exact rationals: an algebra is "split semisimple" when it admits
an eta-orthonormal basis of rescaled projectors with rational coordinates,
and semisimplify() finds that basis or reports NotSplit.
"""

import math
import random
from fractions import Fraction

from .linalg import (
    Q0,
    Q1,
    bilinear,
    det,
    dot,
    frac_str,
    identity,
    linear_dependence,
    mat,
    mat_inv,
    mat_vec,
    rank,
    solve,
    transpose,
    vec,
    zero_vec,
)


class InvalidAlgebra(ValueError):
    """Raised at construction; .problems lists every violated invariant."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class NotInvertible(ArithmeticError):
    pass


class NotSplit(ArithmeticError):
    """The algebra has no rational eta-orthonormal projector basis."""


def rational_sqrt(x):
    """Exact square root of a nonnegative rational, or None."""
    x = Fraction(x)
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def _divisors(n):
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def rational_roots(poly):
    """Distinct rational roots of a polynomial with Fraction coefficients.

    poly is a low-to-high coefficient list.  Roots come from the classical
    p/q criterion after clearing denominators; each candidate is verified by
    exact evaluation, so the list is complete and exact.
    """
    while poly and poly[-1] == 0:
        poly = poly[:-1]
    if len(poly) <= 1:
        return []
    lcm = 1
    for c in poly:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in poly]
    roots = []
    if ints[0] == 0:
        roots.append(Q0)
        while ints and ints[0] == 0:
            ints = ints[1:]
        if len(ints) <= 1:
            return roots
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand in roots:
                    continue
                val = Q0
                for c in reversed(ints):
                    val = val * cand + c
                if val == 0:
                    roots.append(cand)
    return sorted(roots)


def poly_eval_frac(poly, x):
    val = Q0
    for c in reversed(poly):
        val = val * x + c
    return val


class SemisimpleData:
    """eta-orthonormal projector basis: e_mu * e_nu = delta * theta_mu^{-1} e_mu.

    weights[mu] is theta_mu = eta(e_mu, unit); basis_change rows are the
    coordinates of the e_mu in the ambient basis.
    """

    def __init__(self, weights, basis_change):
        self.weights = vec(weights)
        self.basis_change = mat(basis_change)
        self.dim = len(self.weights)
        if any(w == 0 for w in self.weights):
            raise InvalidAlgebra(["semisimple weight is zero"])
        if det(self.basis_change) == 0:
            raise InvalidAlgebra(["semisimple basis change is singular"])
        # coordinates: ambient vector x ->  (B^t)^{-1} x  gives x in the e_mu basis
        self._to_ss = mat_inv(transpose(self.basis_change))

    def to_semisimple(self, v):
        return mat_vec(self._to_ss, v)

    def vector(self, mu):
        return self.basis_change[mu]

    def covector_values(self, phi):
        """phi given by ambient components; returns (phi(e_1), ..., phi(e_k))."""
        return tuple(dot(self.basis_change[mu], phi) for mu in range(self.dim))


class FrobeniusAlgebra:
    """dim, eta (metric), structure[i][j] = coordinates of b_i * b_j, unit."""

    def __init__(self, dim, eta, structure, unit):
        self.dim = int(dim)
        self.eta = mat(eta)
        self.structure = tuple(tuple(vec(structure[i][j]) for j in range(dim)) for i in range(dim))
        self.unit = vec(unit)
        problems = self._validate()
        if problems:
            raise InvalidAlgebra(problems)
        self.eta_inv = mat_inv(self.eta)

    def _validate(self):
        n = self.dim
        problems = []
        if len(self.eta) != n or any(len(r) != n for r in self.eta):
            return ["eta has wrong shape"]
        if len(self.unit) != n:
            return ["unit has wrong length"]
        if any(len(self.structure[i][j]) != n for i in range(n) for j in range(n)):
            return ["structure tensor has wrong shape"]
        if any(self.eta[i][j] != self.eta[j][i] for i in range(n) for j in range(n)):
            problems.append("eta is not symmetric")
        if det(self.eta) == 0:
            problems.append("eta is degenerate")
        basis = identity(n)
        for i in range(n):
            for j in range(i, n):
                if self.structure[i][j] != self.structure[j][i]:
                    problems.append("product not commutative at (%d,%d)" % (i, j))
        for i in range(n):
            got = self._raw_multiply(self.unit, basis[i])
            if got != basis[i]:
                problems.append("unit is not neutral on basis vector %d" % i)
        if problems:
            return problems
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    ab_c = self._raw_multiply(self.structure[i][j], basis[k])
                    a_bc = self._raw_multiply(basis[i], self.structure[j][k])
                    if ab_c != a_bc:
                        problems.append("product not associative at (%d,%d,%d)" % (i, j, k))
                        return problems
                    lhs = bilinear(self.eta, self.structure[i][j], basis[k])
                    rhs = bilinear(self.eta, basis[i], self.structure[j][k])
                    if lhs != rhs:
                        problems.append("eta is not invariant at (%d,%d,%d)" % (i, j, k))
                        return problems
        return problems

    @classmethod
    def from_semisimple(cls, weights, basis_change):
        """Build the algebra whose semisimple basis has the given weights.

        basis_change rows express the semisimple vectors e_mu in the ambient
        basis; they must be linearly independent.  eta, the structure tensor
        and the unit are all determined: eta(e_mu, e_nu) = delta,
        e_mu e_nu = delta theta^{-1} e_mu, unit = sum theta_mu e_mu.
        """
        weights = vec(weights)
        b = mat(basis_change)
        n = len(weights)
        # ambient b_i has e-coordinates c[i][mu] with b_i = sum_mu c[i][mu] e_mu,
        # i.e. c B = Id row-wise, so c is the inverse of the basis change
        c = mat_inv(b)
        eta = tuple(
            tuple(sum(c[i][m] * c[j][m] for m in range(n)) for j in range(n)) for i in range(n)
        )
        structure = []
        for i in range(n):
            row = []
            for j in range(n):
                ss = tuple(c[i][m] * c[j][m] / weights[m] for m in range(n))
                row.append(tuple(dot(ss, tuple(b[m][k] for m in range(n))) for k in range(n)))
            structure.append(tuple(row))
        unit_ss = weights
        unit = tuple(dot(unit_ss, tuple(b[m][k] for m in range(n))) for k in range(n))
        return cls(n, eta, structure, unit)

    def _raw_multiply(self, a, b):
        out = list(zero_vec(self.dim))
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj == 0:
                    continue
                coeff = ai * bj
                for k, ck in enumerate(self.structure[i][j]):
                    if ck != 0:
                        out[k] += coeff * ck
        return tuple(out)

    def multiply(self, a, b):
        if len(a) != self.dim or len(b) != self.dim:
            raise ValueError("dimension mismatch")
        return self._raw_multiply(a, b)

    def power(self, a, k):
        out = self.unit
        for _ in range(k):
            out = self._raw_multiply(out, a)
        return out

    def pair(self, a, b):
        return bilinear(self.eta, a, b)

    def frobenius_trace(self, a):
        if len(a) != self.dim:
            raise ValueError("dimension mismatch")
        return bilinear(self.eta, a, self.unit)

    def euler_class(self):
        out = list(zero_vec(self.dim))
        basis = identity(self.dim)
        for i in range(self.dim):
            for j in range(self.dim):
                if self.eta_inv[i][j] == 0:
                    continue
                prod = self.structure[i][j]
                for k in range(self.dim):
                    out[k] += self.eta_inv[i][j] * prod[k]
        return tuple(out)

    def multiplication_matrix(self, a):
        """Matrix of v -> a*v acting on ambient coordinates (columns = images)."""
        basis = identity(self.dim)
        cols = [self._raw_multiply(a, basis[j]) for j in range(self.dim)]
        return tuple(tuple(cols[j][i] for j in range(self.dim)) for i in range(self.dim))

    def invert(self, a):
        m = self.multiplication_matrix(a)
        x = solve(m, self.unit)
        if x is None:
            raise NotInvertible("element has no inverse")
        return x

    def is_semisimple(self):
        try:
            self.invert(self.euler_class())
        except NotInvertible:
            return False
        return True

    def euler_power(self, g):
        alpha = self.euler_class()
        if g >= 0:
            return self.power(alpha, g)
        inv = self.invert(alpha)
        return self.power(inv, -g)

    # -- semisimple decomposition -------------------------------------------

    def _minimal_poly(self, y, unit):
        """Monic minimal polynomial of y in the unital subalgebra with unit."""
        powers = [unit]
        while True:
            powers.append(self._raw_multiply(powers[-1], y))
            dep = linear_dependence(powers)
            if dep is not None:
                return [c for c in dep]

    def _split_block(self, u, sep):
        """Split idempotent u along the rational eigenvalues of sep * u.

        Returns a list of orthogonal idempotents refining u (possibly [u]).
        The minimal polynomial m of y = sep*u over uA is squarefree on a
        semisimple block; for each rational root s the element
        f(y)/f(s) with f = m/(t-s) is the projector onto the s-eigenspace.
        """
        y = self._raw_multiply(sep, u)
        m = self._minimal_poly(y, u)
        if len(m) <= 2:
            return [u]
        roots = rational_roots(m)
        if not roots:
            return [u]
        parts = []
        rest = u
        for s in roots:
            f = self._poly_deflate(m, s)
            fs = poly_eval_frac(f, s)
            if fs == 0:
                # repeated root: the block is not semisimple
                raise NotSplit("element acts non-semisimply on a block")
            e = self._poly_apply(f, y, u)
            e = tuple(x / fs for x in e)
            parts.append(e)
            rest = tuple(a - b for a, b in zip(rest, e))
        if any(x != 0 for x in rest):
            parts.append(rest)
        return parts

    @staticmethod
    def _poly_deflate(poly, root):
        """poly / (t - root) by synthetic division (exact root assumed)."""
        n = len(poly) - 1
        out = [Q0] * n
        acc = poly[n]
        for i in range(n - 1, -1, -1):
            out[i] = acc
            acc = poly[i] + acc * root
        return out

    def _poly_apply(self, poly, y, unit):
        out = zero_vec(self.dim)
        for c in reversed(poly):
            out = self._raw_multiply(out, y)
            if c != 0:
                out = tuple(a + c * b for a, b in zip(out, unit))
        return out

    def _block_dim(self, u):
        cols = [self._raw_multiply(u, row) for row in identity(self.dim)]
        return rank(cols)

    def semisimplify(self):
        """eta-orthonormal projector basis, or NotSplit.

        A random element separates the projectors with overwhelming
        probability; after 8 failures we refine block by block with the
        ambient basis vectors, which succeeds exactly when the algebra splits
        over the rationals.
        """
        if not self.is_semisimple():
            raise NotInvertible("euler class is not invertible: algebra is not semisimple")
        rng = random.Random(0x5EED5)
        blocks = [self.unit]
        for _ in range(8):
            sep = vec(rng.randrange(-9, 10) for _ in range(self.dim))
            try:
                parts = self._split_block(self.unit, sep)
            except NotSplit:
                parts = None
            if parts is not None and len(parts) == self.dim:
                blocks = parts
                break
        else:
            # per-basis-vector refinement
            blocks = [self.unit]
            basis = identity(self.dim)
            changed = True
            while changed:
                changed = False
                out = []
                for u in blocks:
                    if self._block_dim(u) == 1:
                        out.append(u)
                        continue
                    refined = [u]
                    for b in basis:
                        step = []
                        for w in refined:
                            step.extend(self._split_block(w, b) if self._block_dim(w) > 1 else [w])
                        refined = step
                    if len(refined) > 1:
                        changed = True
                    out.extend(refined)
                blocks = out
            if any(self._block_dim(u) > 1 for u in blocks):
                raise NotSplit("no rational splitting: irrational eigenvalues")
        if len(blocks) != self.dim:
            raise NotSplit("projector count %d does not match dimension" % len(blocks))
        # orthonormalize: eta(pi, pi) must be a square of a rational
        raw = []
        for u in blocks:
            t = bilinear(self.eta, u, u)
            s = rational_sqrt(t)
            if s is None or s == 0:
                raise NotSplit("projector norm %s is not a rational square" % frac_str(t))
            e = tuple(x / s for x in u)
            first = next((x for x in e if x != 0), Q1)
            if first < 0:
                e = tuple(-x for x in e)
            raw.append(e)
        raw.sort()
        weights = tuple(bilinear(self.eta, e, self.unit) for e in raw)
        ss = SemisimpleData(weights, raw)
        self.check_semisimple_data(ss)
        return ss

    def check_semisimple_data(self, ss):
        """All SemisimpleData invariants against this algebra, exactly."""
        n = self.dim
        if ss.dim != n:
            raise InvalidAlgebra(["semisimple data has wrong dimension"])
        problems = []
        for i in range(n):
            for j in range(n):
                val = bilinear(self.eta, ss.basis_change[i], ss.basis_change[j])
                if val != (Q1 if i == j else Q0):
                    problems.append("semisimple basis not orthonormal at (%d,%d)" % (i, j))
                prod = self._raw_multiply(ss.basis_change[i], ss.basis_change[j])
                want = (
                    tuple(x / ss.weights[i] for x in ss.basis_change[i]) if i == j else zero_vec(n)
                )
                if prod != want:
                    problems.append("semisimple product law fails at (%d,%d)" % (i, j))
        recon = zero_vec(n)
        for mu in range(n):
            recon = tuple(a + ss.weights[mu] * b for a, b in zip(recon, ss.basis_change[mu]))
        if recon != self.unit:
            problems.append("unit is not sum of weighted projectors")
        if problems:
            raise InvalidAlgebra(problems)
