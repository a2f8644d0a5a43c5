"""Tautological expressions: the kappa-psi calculus and decorated graph sums.

Two layers of bookkeeping live here.  KPPoly is a polynomial in kappa
classes and the psi classes at n marked points, the form every smooth-model
class takes.  TautExpr is a rational combination of stable graphs carrying a
kappa monomial at each vertex and a psi power at each half edge, the form
classes on the compactified space take.

The kappa side is driven by one combinatorial identity: pushing forward a
product of psi powers at m forgotten points yields the multi-index class
kappa_{k_1..k_m} = sum over permutations, grouped by cycle type, of products
of ordinary kappa classes.  kappa_multi_index computes that sum over set
partitions (a block of size b accounts for the (b-1)! cycles on it).
"""

from fractions import Fraction
from math import factorial

from .kappa import KappaPoly, monomial_str
from .linalg import Q0, Q1, frac_str


class UnsupportedLowPower(ValueError):
    pass


class NodalTermPresent(ValueError):
    pass


class DistinctSupports(ValueError):
    pass


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def kappa_multi_index(ks, cap):
    """kappa_{k_1,...,k_m} as a polynomial in the kappa_j."""
    ks = list(ks)
    if any(k < 1 for k in ks):
        raise ValueError("multi-index entries must be >= 1")
    terms = {}
    for part in _set_partitions(ks):
        weight = 1
        key = []
        for block in part:
            weight *= factorial(len(block) - 1)
            key.append(sum(block))
        key = tuple(sorted(key))
        terms[key] = terms.get(key, Q0) + weight
    return KappaPoly(cap, terms)


def kappa_monomial_to_multi(key):
    """Write the kappa monomial with parts `key` in multi-index classes.

    Inverts the cycle-type expansion: returns a dict multi-index -> coeff
    such that the monomial equals sum coeff * kappa_{multi}.  Triangular, so
    plain recursion with memoization works.
    """
    return dict(_mono_to_multi(tuple(sorted(key))))


_MONO_CACHE = {}


def _mono_to_multi(key):
    if key in _MONO_CACHE:
        return _MONO_CACHE[key]
    out = {key: Q1}
    for part in _set_partitions(list(key)):
        if all(len(b) == 1 for b in part):
            continue  # that summand is the monomial itself
        weight = 1
        blocks = []
        for block in part:
            weight *= factorial(len(block) - 1)
            blocks.append(sum(block))
        inner = _mono_to_multi(tuple(sorted(blocks)))
        for k2, c2 in inner.items():
            out[k2] = out.get(k2, Q0) - weight * c2
    out = {k: c for k, c in out.items() if c != 0}
    _MONO_CACHE[key] = out
    return out


def forgetful_pushforward_monomial(exponents, cap):
    """(p_m)_* of psi^{a_1} ... psi^{a_m} at the forgotten points.

    Each forgotten point must carry psi to a power >= 2; the pushforward is
    then the multi-index class on shifted exponents.
    """
    exponents = list(exponents)
    if any(a < 2 for a in exponents):
        raise UnsupportedLowPower("pushforward needs every exponent >= 2")
    if not exponents:
        return KappaPoly.constant(cap, 1)
    return kappa_multi_index([a - 1 for a in exponents], cap)


class KPPoly:
    """Polynomial in kappa_j and psi_1..psi_n, truncated at total degree cap.

    Keys are (kappa_key, psi_exponents) with kappa_key a sorted tuple of
    generator indices and psi_exponents a length-n tuple.
    """

    __slots__ = ("n", "cap", "terms")

    def __init__(self, n, cap, terms=None):
        self.n = n
        self.cap = cap
        self.terms = {}
        if terms:
            for (kk, pp), c in terms.items():
                if c == 0:
                    continue
                if len(pp) != n:
                    raise ValueError("psi tuple has wrong length")
                if sum(kk) + sum(pp) <= cap:
                    key = (tuple(kk), tuple(pp))
                    self.terms[key] = self.terms.get(key, Q0) + Fraction(c)
        self.terms = {k: c for k, c in self.terms.items() if c != 0}

    @classmethod
    def constant(cls, n, cap, c):
        return cls(n, cap, {((), (0,) * n): Fraction(c)})

    @classmethod
    def from_kappa(cls, n, poly):
        return cls(n, poly.cap, {(k, (0,) * n): c for k, c in poly.terms.items()})

    @classmethod
    def psi(cls, n, cap, i, exponent=1):
        pp = [0] * n
        pp[i - 1] = exponent
        return cls(n, cap, {((), tuple(pp)): Q1})

    def kappa_part(self):
        """Drop every term with psi dependence; the result is a KappaPoly."""
        return KappaPoly(
            self.cap, {kk: c for (kk, pp), c in self.terms.items() if not any(pp)}
        )

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, KPPoly) and self.n == other.n and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Q0) + c
        return KPPoly(self.n, self.cap, out)

    def __sub__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Q0) - c
        return KPPoly(self.n, self.cap, out)

    def scale(self, c):
        c = Fraction(c)
        return KPPoly(self.n, self.cap, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, KPPoly):
            return self.scale(other)
        out = {}
        for (k1, p1), c1 in self.terms.items():
            d1 = sum(k1) + sum(p1)
            for (k2, p2), c2 in other.terms.items():
                if d1 + sum(k2) + sum(p2) > self.cap:
                    continue
                key = (tuple(sorted(k1 + k2)), tuple(a + b for a, b in zip(p1, p2)))
                out[key] = out.get(key, Q0) + c1 * c2
        return KPPoly(self.n, self.cap, out)

    __rmul__ = __mul__

    def truncate(self, cap):
        return KPPoly(self.n, cap, self.terms)

    def permute_slots(self, perm):
        """perm maps slot i (0-based) to slot perm[i]; psi labels follow."""
        out = {}
        for (kk, pp), c in self.terms.items():
            q = [0] * self.n
            for i, e in enumerate(pp):
                q[perm[i]] = e
            out[(kk, tuple(q))] = c
        return KPPoly(self.n, self.cap, out)

    def forgetful_pullback(self):
        """Pullback along the map forgetting a new last point.

        kappa_j becomes kappa_j - psi_{n+1}^j, old psi classes are kept: this
        is the smooth-model rule (the correction divisors restrict to zero).
        """
        n1 = self.n + 1
        out = KPPoly(n1, self.cap)
        for (kk, pp), c in self.terms.items():
            term = KPPoly(n1, self.cap, {((), tuple(pp) + (0,)): c})
            for j in kk:
                factor = KPPoly(n1, self.cap, {((j,), (0,) * n1): Q1}) - KPPoly.psi(
                    n1, self.cap, n1, j
                )
                term = term * factor
            out = out + term
        return out

    def render(self):
        if not self.terms:
            return "0"
        bits = []
        for kk, pp in sorted(self.terms, key=lambda k: (sum(k[0]) + sum(k[1]), k)):
            c = self.terms[(kk, pp)]
            parts = []
            km = monomial_str(kk)
            if km != "1":
                parts.append(km)
            for i, e in enumerate(pp, start=1):
                if e == 1:
                    parts.append("p%d" % i)
                elif e > 1:
                    parts.append("p%d^%d" % (i, e))
            mono = "*".join(parts) if parts else "1"
            if mono == "1":
                bits.append(frac_str(c))
            elif c == 1:
                bits.append(mono)
            elif c == -1:
                bits.append("-" + mono)
            else:
                bits.append(frac_str(c) + "*" + mono)
        out = bits[0]
        for b in bits[1:]:
            out += " - " + b[1:] if b.startswith("-") else " + " + b
        return out

    def __repr__(self):
        return "KPPoly(%s)" % self.render()


def exp_pushforward_diff(coeffs, cap):
    """Difference of the two sides of the exponential pushforward identity.

    Left side: exp(a_1 kappa_1 + a_2 kappa_2 + ...).  Right side: the sum
    over m of (1/m!) times the pushforward of products of copies of
    M(psi) = psi (1 - exp(-a_1 psi - a_2 psi^2 - ...)) at forgotten points,
    evaluated termwise through forgetful_pushforward_monomial.
    """
    coeffs = [Fraction(c) for c in coeffs]
    lin = KappaPoly(cap, {(j,): c for j, c in enumerate(coeffs, start=1)})
    left = lin.exp()

    # scalar coefficients of M(z) through z^{cap+1}: degree of kappa_{a-1} is a-1
    zcap = cap + 1
    expo = [Q0] * (zcap + 1)  # -a_1 z - a_2 z^2 - ...
    for j, c in enumerate(coeffs, start=1):
        if j <= zcap:
            expo[j] = -c
    body = [Q0] * (zcap + 1)
    body[0] = Q1
    term = [Q0] * (zcap + 1)
    term[0] = Q1
    for n in range(1, zcap + 1):
        nxt = [Q0] * (zcap + 1)
        for i, a in enumerate(term):
            if a == 0:
                continue
            for j, b in enumerate(expo):
                if b == 0 or i + j > zcap:
                    continue
                nxt[i + j] += a * b
        term = nxt
        for i, a in enumerate(term):
            body[i] += a / factorial(n)
    m_coeff = [Q0] * (zcap + 2)
    for i in range(zcap + 1):
        val = -body[i] if i > 0 else Q1 - body[0]
        if i + 1 <= zcap + 1:
            m_coeff[i + 1] = val
    # m_coeff[k] is the z^k coefficient of M(z); valuation 2

    right = KappaPoly.constant(cap, 1)
    tuples = []
    # multisets of exponents >= 2 with total pushforward degree <= cap
    def extend(prefix, start, deg):
        if prefix:
            tuples.append(list(prefix))
        for a in range(start, cap + 2):
            if deg + (a - 1) > cap:
                break
            prefix.append(a)
            extend(prefix, a, deg + a - 1)
            prefix.pop()

    extend([], 2, 0)
    for tup in tuples:
        m = len(tup)
        coeff = Fraction(1, factorial(m))
        # number of ordered arrangements of the multiset
        arrangements = factorial(m)
        for a in set(tup):
            arrangements //= factorial(tup.count(a))
        weight = coeff * arrangements
        for a in tup:
            weight *= m_coeff[a]
        if weight == 0:
            continue
        right = right + forgetful_pushforward_monomial(tup, cap).scale(weight)
    return left - right


def exp_pushforward_check(coeffs, cap):
    return exp_pushforward_diff(coeffs, cap).is_zero()


class DecoratedGraph:
    """A stable graph with a kappa monomial per vertex and psi powers per
    half edge, canonicalized under the graph's automorphisms."""

    __slots__ = ("graph", "vertex_kappa", "leg_psi", "edge_psi", "_hash")

    def __init__(self, graph, vertex_kappa, leg_psi, edge_psi, _canonical=False):
        vertex_kappa = tuple(tuple(sorted(k)) for k in vertex_kappa)
        leg_psi = tuple(int(x) for x in leg_psi)
        edge_psi = tuple((int(a), int(b)) for a, b in edge_psi)
        if (
            len(vertex_kappa) != graph.num_vertices
            or len(leg_psi) != graph.num_legs
            or len(edge_psi) != len(graph.edges)
        ):
            raise ValueError("decoration does not fit the graph")
        if not _canonical:
            vertex_kappa, leg_psi, edge_psi = self._canonicalize(
                graph, vertex_kappa, leg_psi, edge_psi
            )
        self.graph = graph
        self.vertex_kappa = vertex_kappa
        self.leg_psi = leg_psi
        self.edge_psi = edge_psi
        self._hash = hash((graph, vertex_kappa, leg_psi, edge_psi))

    @staticmethod
    def _canonicalize(graph, vertex_kappa, leg_psi, edge_psi):
        best = None
        for perm, edge_perm, flips in graph.edge_automorphism_images():
            vk = [None] * len(vertex_kappa)
            for v, k in enumerate(vertex_kappa):
                vk[perm[v]] = k
            ep = [None] * len(edge_psi)
            for i, (a, b) in enumerate(edge_psi):
                ep[edge_perm[i]] = (b, a) if flips[i] else (a, b)
            cand = (tuple(vk), tuple(leg_psi), tuple(ep))
            if best is None or cand < best:
                best = cand
        return best

    def __eq__(self, other):
        return (
            isinstance(other, DecoratedGraph)
            and self.graph == other.graph
            and self.vertex_kappa == other.vertex_kappa
            and self.leg_psi == other.leg_psi
            and self.edge_psi == other.edge_psi
        )

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (self.graph.sort_key(), self.vertex_kappa, self.leg_psi, self.edge_psi)

    def degree(self):
        return (
            len(self.graph.edges)
            + sum(sum(k) for k in self.vertex_kappa)
            + sum(self.leg_psi)
            + sum(a + b for a, b in self.edge_psi)
        )

    def encode(self):
        kk = ";".join(monomial_str(k) for k in self.vertex_kappa)
        pl = ",".join(str(x) for x in self.leg_psi)
        pe = ",".join("(%d,%d)" % e for e in self.edge_psi)
        return "%s kappa:[%s] psiL:[%s] psiE:[%s]" % (self.graph.encode(), kk, pl, pe)

    def __repr__(self):
        return "DecoratedGraph(%s)" % self.encode()


class TautExpr:
    """Rational combination of decorated graphs on a fixed (g, n)."""

    __slots__ = ("g", "n", "cap", "terms")

    def __init__(self, g, n, cap, terms=None):
        self.g = g
        self.n = n
        self.cap = cap
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if c == 0 or key.degree() > cap:
                    continue
                self.terms[key] = self.terms.get(key, Q0) + Fraction(c)
        self.terms = {k: c for k, c in self.terms.items() if c != 0}

    def __eq__(self, other):
        return (
            isinstance(other, TautExpr)
            and (self.g, self.n) == (other.g, other.n)
            and self.terms == other.terms
        )

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Q0) + c
        return TautExpr(self.g, self.n, self.cap, out)

    def __sub__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Q0) - c
        return TautExpr(self.g, self.n, self.cap, out)

    def scale(self, c):
        c = Fraction(c)
        return TautExpr(self.g, self.n, self.cap, {k: v * c for k, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def single_graph(self):
        graphs = {key.graph for key in self.terms}
        if len(graphs) > 1:
            raise DistinctSupports("expression lives on several graphs")
        return graphs.pop() if graphs else None

    def multiply(self, other):
        """Decoration product of two expressions on one common graph."""
        ga, gb = self.single_graph(), other.single_graph()
        if ga is None or gb is None:
            return TautExpr(self.g, self.n, self.cap)
        if ga != gb:
            raise DistinctSupports("expressions live on different graphs")
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = DecoratedGraph(
                    ga,
                    tuple(a + b for a, b in zip(k1.vertex_kappa, k2.vertex_kappa)),
                    tuple(a + b for a, b in zip(k1.leg_psi, k2.leg_psi)),
                    tuple(
                        (a1 + a2, b1 + b2)
                        for (a1, b1), (a2, b2) in zip(k1.edge_psi, k2.edge_psi)
                    ),
                )
                if key.degree() <= self.cap:
                    out[key] = out.get(key, Q0) + c1 * c2
        return TautExpr(self.g, self.n, self.cap, out)

    def restrict_to_smooth(self):
        """Keep the edgeless term only, as a smooth-model polynomial."""
        out = {}
        for key, c in self.terms.items():
            if key.graph.edges:
                continue
            out[(key.vertex_kappa[0], key.leg_psi)] = c
        return KPPoly(self.n, self.cap, out)

    @classmethod
    def from_kp(cls, g, n, poly):
        from .graphs import smooth_graph

        graph = smooth_graph(g, n)
        terms = {}
        for (kk, pp), c in poly.terms.items():
            terms[DecoratedGraph(graph, (kk,), pp, ())] = c
        return cls(g, n, poly.cap, terms)

    def forgetful_pullback(self):
        for key in self.terms:
            if key.graph.edges:
                raise NodalTermPresent("pullback of nodal terms is out of scope")
        return self.restrict_to_smooth().forgetful_pullback()

    def render_lines(self):
        lines = []
        for key in sorted(self.terms, key=lambda k: k.sort_key()):
            lines.append("%s * %s" % (key.encode(), frac_str(self.terms[key])))
        return lines

    def __repr__(self):
        return "TautExpr(\n  %s\n)" % "\n  ".join(self.render_lines() or ["0"])
