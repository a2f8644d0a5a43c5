"""TQFT values, the R-matrix graph action, and the two reconstructions.

A theory is specified by a split semisimple Frobenius algebra, covectors
phi_j defining the stable-range homomorphism exp(sum phi_j kappa_j), and a
symplectic R-matrix.  The degree-zero part of everything is the TQFT
omega_{g,n}(v_1...v_n) = theta(alpha^g v_1 ... v_n).

The graph action is evaluated per projector.  At a vertex of genus h and
valence k, the insertion sum over forgotten points collapses in closed
form: writing R^{-1}(z) 1 = sum_mu s_mu(z) e_mu and
u_mu = s_mu / theta_mu, the vertex contributes
theta_mu^{2-2h-k} exp(sum_j a_j^mu kappa_j) with the a_j^mu read off from
-log u_mu.  Legs carry R^{-1}(psi), edges carry the symplectic kernel with
one projector index at each end; eta is the identity in the semisimple
basis, so no extra metric bookkeeping appears at the edges.
"""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import product as iproduct

from .frobenius import NotInvertible
from .kappa import CovectorKappaPoly, KappaPoly, exp_conv, is_grouplike, log_conv
from .linalg import Q0, Q1, identity, mat_inv, mat_mul, transpose, vec
from .series import EndSeries, check_symplectic, edge_kernel, translation_vector
from .taut import DecoratedGraph, KPPoly, TautExpr
from .graphs import enumerate_stable_graphs


class UnstablePair(ValueError):
    pass


class IncoherentSpec(ValueError):
    pass


class CohFTSpec:
    """Classification data: algebra, semisimple basis, phi covectors, R."""

    def __init__(self, algebra, ss, phi, r, degree, coherent=False):
        self.algebra = algebra
        self.ss = ss
        self.degree = int(degree)
        if self.degree < 1:
            raise ValueError("truncation degree must be >= 1")
        phi = [vec(p) for p in phi]
        while len(phi) < self.degree:
            phi.append(vec([0] * algebra.dim))
        self.phi = tuple(phi[: self.degree])
        if isinstance(r, EndSeries):
            if r.order != self.degree:
                r = EndSeries.from_higher_coeffs(algebra.dim, self.degree, r.coeffs[1:])
            if r.coeffs[0] != identity(algebra.dim):
                raise ValueError("R must have constant term Id")
        else:
            r = EndSeries.from_higher_coeffs(algebra.dim, self.degree, r)
        self.r = r
        if not check_symplectic(self.r, algebra.eta):
            raise ValueError("R does not satisfy the symplectic condition")
        algebra.check_semisimple_data(ss)
        self._cache = {}
        self.coherent = bool(coherent)
        if self.coherent and not compatibility_check(self):
            raise IncoherentSpec("phi does not match log(R^{-1} unit)")

    # -- cached derived data --------------------------------------------------

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def r_inverse(self):
        return self._get("rinv", self.r.invert)

    def kernel_ss(self):
        """Edge kernel coefficients in semisimple coordinates."""

        def build():
            kernel = edge_kernel(self.r, self.algebra.eta)
            b = self.ss.basis_change
            binv = mat_inv(b)
            binv_t = transpose(binv)
            out = {}
            for (a, bb), m in kernel.table.items():
                conv = mat_mul(binv_t, mat_mul(m, binv))
                if any(x != 0 for row in conv for x in row):
                    out[(a, bb)] = conv
            return out

        return self._get("kernel_ss", build)

    def vertex_log_coeffs(self):
        """a_j^mu from -log(s_mu(z)/theta_mu), for j = 1..degree."""

        def build():
            s = self.r_inverse().apply(self.algebra.unit)
            coords = [self.ss.to_semisimple(c) for c in s.coeffs]
            out = []
            for mu in range(self.ss.dim):
                u = [coords[k][mu] / self.ss.weights[mu] for k in range(self.degree + 1)]
                out.append(_scalar_log_negated(u, self.degree))
            return tuple(out)

        return self._get("vertex_log", build)

    def vertex_exp(self, mu, cap):
        """exp(sum_j a_j^mu kappa_j) through degree cap."""
        key = ("vexp", mu, cap)

        def build():
            coeffs = self.vertex_log_coeffs()[mu]
            lin = KappaPoly(cap, {(j,): c for j, c in enumerate(coeffs, start=1) if j <= cap})
            return lin.exp()

        return self._get(key, build)

    def translation(self):
        return self._get("T", lambda: translation_vector(self.r, self.algebra.unit))


def _scalar_log_negated(u, cap):
    """Coefficients a_1..a_cap with log(u) = -sum a_j z^j, u[0] = 1."""
    diff = [Q0] + [u[k] for k in range(1, cap + 1)]
    log = [Q0] * (cap + 1)
    term = [Q0] * (cap + 1)
    term[0] = Q1
    for n in range(1, cap + 1):
        nxt = [Q0] * (cap + 1)
        for i, a in enumerate(term):
            if a == 0:
                continue
            for j in range(1, cap + 1 - i):
                if diff[j] != 0:
                    nxt[i + j] += a * diff[j]
        term = nxt
        sign = Fraction((-1) ** (n - 1), n)
        for i in range(cap + 1):
            log[i] += sign * term[i]
    return tuple(-log[j] for j in range(1, cap + 1))


def tqft_value(spec, g, n, vectors):
    """theta(alpha^g v_1 ... v_n): the degree-zero field theory."""
    if 2 * g - 2 + n <= 0:
        raise UnstablePair("unstable pair (%d,%d)" % (g, n))
    if len(vectors) != n:
        raise ValueError("need %d vectors" % n)
    alg = spec.algebra
    acc = alg.euler_power(g)
    for v in vectors:
        acc = alg.multiply(acc, vec(v))
    return alg.frobenius_trace(acc)


def phi_primitive(spec, cap=None):
    """x = sum_j phi_j kappa_j as a covector polynomial."""
    cap = spec.degree if cap is None else cap
    comps = []
    for i in range(spec.algebra.dim):
        terms = {}
        for j, p in enumerate(spec.phi, start=1):
            if j <= cap and p[i] != 0:
                terms[(j,)] = p[i]
        comps.append(KappaPoly(cap, terms))
    return CovectorKappaPoly(tuple(comps))


def omega_plus(spec, cap=None):
    """exp of the phi primitive for the convolution product; group-like."""
    return exp_conv(phi_primitive(spec, cap), spec.ss)


def compatibility_check(spec):
    """log of the classification homomorphism against -eta(beta log R^{-1}1, .)."""
    lhs = log_conv(omega_plus(spec), spec.ss)
    rhs = _phi_from_r(spec.algebra, spec.ss, spec.r, spec.degree)
    rhs_cov = CovectorKappaPoly(
        tuple(
            KappaPoly(
                spec.degree,
                {(j,): rhs[j - 1][i] for j in range(1, spec.degree + 1) if rhs[j - 1][i] != 0},
            )
            for i in range(spec.algebra.dim)
        )
    )
    return lhs == rhs_cov


def _phi_from_r(algebra, ss, r, cap):
    """Covectors phi_j = -eta(log(R^{-1}(psi) unit)_j, .), the coherent choice."""
    s = r.invert().apply(algebra.unit)
    # logarithm in the algebra, coefficientwise on the psi powers
    delta = [list(s.coeffs[k]) for k in range(cap + 1)]
    delta[0] = [a - b for a, b in zip(delta[0], algebra.unit)]
    log = [list(t) for t in [(Q0,) * algebra.dim] * (cap + 1)]
    term = [(Q0,) * algebra.dim for _ in range(cap + 1)]
    term[0] = algebra.unit
    for n in range(1, cap + 1):
        nxt = [(Q0,) * algebra.dim for _ in range(cap + 1)]
        for i in range(cap + 1):
            if all(x == 0 for x in term[i]):
                continue
            for j in range(cap + 1 - i):
                if all(x == 0 for x in delta[j]):
                    continue
                prod = algebra.multiply(term[i], tuple(delta[j]))
                nxt[i + j] = tuple(a + b for a, b in zip(nxt[i + j], prod))
        term = nxt
        sign = Fraction((-1) ** (n - 1), n)
        for i in range(cap + 1):
            log[i] = [a + sign * b for a, b in zip(log[i], term[i])]
    phi = []
    from .linalg import mat_vec

    for j in range(1, cap + 1):
        lj = tuple(log[j])
        phi.append(tuple(-x for x in mat_vec(algebra.eta, lj)))
    return phi


def coherent_phi(algebra, ss, r, cap):
    """The unique covectors making (phi, R) a coherent specification."""
    return _phi_from_r(algebra, ss, r, cap)


def reconstruct_fixed(spec, g, n, vectors):
    """Kappa-polynomial valued form: the classification formula for framed
    points; genus zero goes through the euler-class shift."""
    if 2 * g - 2 + n <= 0:
        raise UnstablePair("unstable pair (%d,%d)" % (g, n))
    alg = spec.algebra
    cap = min(spec.degree, 3 * g - 3 + n)
    cap = max(cap, 0)
    vectors = [vec(v) for v in vectors]
    if g == 0:
        try:
            alpha_inv = alg.invert(alg.euler_class())
        except NotInvertible:
            raise NotInvertible("genus-zero reconstruction needs an invertible euler class")
        vectors = vectors[:-1] + [alg.multiply(alpha_inv, vectors[-1])]
        acc = alg.euler_power(1)
    else:
        acc = alg.euler_power(g)
    for v in vectors:
        acc = alg.multiply(acc, v)
    value = omega_plus(spec).value(acc)
    return KPPoly.from_kappa(n, value).truncate(cap)


def reconstruct_free(spec, g, n, vectors):
    """Free-point form: R^{-1}(psi_i) in every slot, then the fixed formula."""
    if 2 * g - 2 + n <= 0:
        raise UnstablePair("unstable pair (%d,%d)" % (g, n))
    alg = spec.algebra
    cap = max(min(spec.degree, 3 * g - 3 + n), 0)
    rinv = spec.r_inverse()
    slot_series = [rinv.apply(vec(v)).coeffs for v in vectors]
    if g == 0:
        alpha_g = alg.euler_power(1)
        alpha_shift = alg.invert(alg.euler_class())
    else:
        alpha_g = alg.euler_power(g)
        alpha_shift = None
    op = omega_plus(spec)
    out = KPPoly(n, cap)
    for exps in _bounded_tuples(n, cap):
        acc = alpha_g
        for i, e in enumerate(exps):
            if e > spec.degree:
                acc = None
                break
            acc = alg.multiply(acc, slot_series[i][e])
        if acc is None:
            continue
        if alpha_shift is not None:
            acc = alg.multiply(acc, alpha_shift)
        value = op.value(acc)
        if value.is_zero():
            continue
        psi_part = KPPoly(n, cap, {((), tuple(exps)): Q1})
        out = out + psi_part * KPPoly.from_kappa(n, value)
    return out


def _bounded_tuples(n, cap):
    if n == 0:
        yield ()
        return
    for head in range(cap + 1):
        for tail in _bounded_tuples(n - 1, cap - head):
            yield (head,) + tail


def graph_contribution(spec, graph, vectors):
    """The decorated-graph class attached to one boundary stratum.

    No automorphism weight here; r_action divides by |Aut|.  Decorations are
    truncated at each vertex's dimension (classes above it vanish) and at
    the global cap.
    """
    g = graph.total_genus()
    n = graph.num_legs
    if len(vectors) != n:
        raise ValueError("need %d vectors" % n)
    alg = spec.algebra
    ss = spec.ss
    dim = alg.dim
    cap = max(min(spec.degree, 3 * g - 3 + n), 0)
    rinv = spec.r_inverse()
    kernel = spec.kernel_ss()
    nv = graph.num_vertices
    ne = len(graph.edges)
    if ne > cap:
        return TautExpr(g, n, cap)
    budget = cap - ne  # decoration degree available globally
    # per-leg semisimple coordinate series
    leg_series = {}
    for label, v in enumerate(graph.legs, start=1):
        coords = [ss.to_semisimple(c) for c in rinv.apply(vec(vectors[label - 1])).coeffs]
        leg_series[label] = coords
    vertex_dims = [graph.vertex_dim(v) for v in range(nv)]
    out = {}
    for assignment in iproduct(range(dim), repeat=nv):
        pref = Q1
        for v in range(nv):
            expo = 2 - 2 * graph.genera[v] - graph.valence(v)
            pref *= ss.weights[assignment[v]] ** expo
        # edge decorations: list per edge of ((a,b), matrix coefficient)
        edge_opts = []
        feasible = True
        for i, (u, w) in enumerate(graph.edges):
            opts = []
            mu, nu = assignment[u], assignment[w]
            for (a, b), m in kernel.items():
                if a + b > budget:
                    continue
                c = m[mu][nu]
                if c != 0:
                    opts.append(((a, b), c))
            if not opts:
                feasible = False
                break
            edge_opts.append(opts)
        if not feasible:
            continue
        for edge_choice in iproduct(*edge_opts):
            edge_psi = tuple(ab for ab, _ in edge_choice)
            used = sum(a + b for a, b in edge_psi)
            if used > budget:
                continue
            coeff = pref
            for _, c in edge_choice:
                coeff *= c
            # psi load per vertex from the chosen edge decorations
            load = [0] * nv
            ok = True
            for i, (u, w) in enumerate(graph.edges):
                a, b = edge_psi[i]
                load[u] += a
                load[w] += b
                if load[u] > vertex_dims[u] or load[w] > vertex_dims[w]:
                    ok = False
                    break
            if not ok:
                continue
            # per-vertex combinations of leg psi powers and a kappa monomial
            per_vertex = []
            for v in range(nv):
                room = min(vertex_dims[v] - load[v], budget - used)
                labels = graph.legs_at(v)
                combos = []
                for kk, kc in spec.vertex_exp(assignment[v], min(room, cap)).terms.items():
                    kdeg = sum(kk)
                    for leg_exps in _bounded_tuples(len(labels), room - kdeg):
                        c = kc
                        for label, e in zip(labels, leg_exps):
                            c *= leg_series[label][e][assignment[v]]
                            if c == 0:
                                break
                        if c != 0:
                            combos.append((kk, dict(zip(labels, leg_exps)), kdeg + sum(leg_exps), c))
                if not combos:
                    break
                per_vertex.append(combos)
            if len(per_vertex) < nv:
                continue
            for pick in iproduct(*per_vertex):
                total = used + sum(p[2] for p in pick)
                if total > budget:
                    continue
                c = coeff
                for p in pick:
                    c *= p[3]
                leg_psi = [0] * n
                for p in pick:
                    for label, e in p[1].items():
                        leg_psi[label - 1] = e
                key = DecoratedGraph(
                    graph, tuple(p[0] for p in pick), tuple(leg_psi), edge_psi
                )
                out[key] = out.get(key, Q0) + c
    return TautExpr(g, n, cap, out)


def r_action(spec, g, n, vectors, threads=1):
    """Sum of contributions over all boundary strata, weighted by 1/|Aut|."""
    if 2 * g - 2 + n <= 0:
        raise UnstablePair("unstable pair (%d,%d)" % (g, n))
    graphs = enumerate_stable_graphs(g, n)

    def one(graph):
        return graph_contribution(spec, graph, vectors).scale(
            Fraction(1, graph.automorphism_order())
        )

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, graphs))
    else:
        parts = [one(graph) for graph in graphs]
    cap = max(min(spec.degree, 3 * g - 3 + n), 0)
    total = TautExpr(g, n, cap)
    for part in parts:
        total = total + part
    return total


def restrict_to_smooth(expr):
    return expr.restrict_to_smooth()


def two_point(spec, v, w):
    """Omega^+(v (x) w) as a polynomial in kappa and one psi variable."""
    alg = spec.algebra
    cap = spec.degree
    series = spec.r_inverse().apply(vec(v)).coeffs
    op = omega_plus(spec)
    out = KPPoly(1, cap)
    for k in range(cap + 1):
        prod = alg.multiply(series[k], vec(w))
        value = op.value(prod)
        if value.is_zero():
            continue
        out = out + KPPoly(1, cap, {((), (k,)): Q1}) * KPPoly.from_kappa(1, value)
    return out


def z_matrix(spec):
    """Z(kappa, psi) with eta(Z v, w) = Omega^+(v (x) w), entrywise KPPoly."""
    alg = spec.algebra
    basis = identity(alg.dim)
    omega = [[two_point(spec, basis[j], basis[i]) for j in range(alg.dim)] for i in range(alg.dim)]
    out = []
    for k in range(alg.dim):
        row = []
        for j in range(alg.dim):
            acc = KPPoly(1, spec.degree)
            for i in range(alg.dim):
                if alg.eta_inv[k][i] != 0:
                    acc = acc + omega[i][j].scale(alg.eta_inv[k][i])
            row.append(acc)
        out.append(row)
    return out


def verify_axioms(spec, mode="free", max_dim=2, max_perm_n=4):
    """Check the field-theory axioms as exact polynomial identities.

    mode is "fixed" or "free".  Returns a list of failure records, each a
    dict with the axiom name, the place it failed, and the first differing
    monomial; an empty list means every identity holds through the
    truncation degree.
    """
    if mode not in ("fixed", "free"):
        raise ValueError("mode must be fixed or free")
    recon = reconstruct_fixed if mode == "fixed" else reconstruct_free
    alg = spec.algebra
    ss = spec.ss
    basis = identity(alg.dim)
    failures = []

    def first_diff(a, b):
        diff = a - b
        if diff.is_zero():
            return None
        key = sorted(diff.terms, key=lambda k: (sum(k[0]) + sum(k[1]), k))[0]
        return "%s (coefficient %s)" % (str(key), diff.terms[key])

    # 1. unit axiom on (0, 3)
    for i in range(alg.dim):
        for j in range(alg.dim):
            got = recon(spec, 0, 3, [alg.unit, basis[i], basis[j]])
            want = KPPoly.constant(3, got.cap, alg.pair(basis[i], basis[j]))
            d = first_diff(got, want)
            if d:
                failures.append({"axiom": "unit", "at": (i, j), "diff": d})

    # 2. symmetry under slot permutation with simultaneous psi relabeling
    pairs = [(g, n) for g in range(0, 3) for n in range(2, max_perm_n + 1)
             if 2 * g - 2 + n > 0 and 0 < 3 * g - 3 + n <= max_dim]
    from itertools import permutations as _perms

    for g, n in pairs:
        tuples = list(iproduct(range(alg.dim), repeat=n))[: alg.dim ** min(n, 2)]
        for idx in tuples:
            vs = [basis[i] for i in idx]
            base = recon(spec, g, n, vs)
            for perm in list(_perms(range(n)))[1:]:
                permuted = recon(spec, g, n, [vs[perm[i]] for i in range(n)])
                # relabel psi slots: slot i of the permuted input is slot perm[i]
                d = first_diff(permuted.permute_slots(perm), base)
                if d:
                    failures.append({"axiom": "symmetry", "at": (g, n, idx, perm), "diff": d})
                    break

    # 3. non-separating sewing, reduced form
    op = omega_plus(spec)
    for g in (1, 2):
        for i in range(alg.dim):
            x = basis[i]
            lhs = op.value(alg.multiply(alg.euler_power(g), x))
            rhs = KappaPoly(spec.degree)
            for mu in range(alg.dim):
                e = ss.basis_change[mu]
                term = alg.multiply(alg.multiply(alg.euler_power(g - 1), x), alg.multiply(e, e))
                rhs = rhs + op.value(term)
            if lhs != rhs:
                failures.append({"axiom": "sewing-nonseparating", "at": (g, i), "diff": (lhs - rhs).render()})

    # 4. separating sewing through the group-like property
    if not is_grouplike(op, ss):
        failures.append({"axiom": "sewing-separating", "at": "omega_plus", "diff": "not group-like"})

    # 5. forgetful axiom
    pairs = [(g, n) for g in range(0, 3) for n in range(1, 4)
             if 2 * g - 2 + n > 0 and 3 * g - 3 + n <= max_dim and 3 * g - 3 + n >= 1]
    for g, n in pairs:
        for idx in iproduct(range(alg.dim), repeat=min(n, 2)):
            vs = [basis[i] for i in idx] + [alg.unit] * (n - len(idx))
            cap = min(spec.degree, 3 * g - 3 + n)
            lhs = recon(spec, g, n, vs)
            if mode == "fixed":
                # framed points carry no psi classes: pullback keeps kappas
                rhs = recon(spec, g, n + 1, vs + [alg.unit])
                lhs_cmp = KPPoly(n + 1, cap, {(kk, pp + (0,)): c for (kk, pp), c in lhs.terms.items()})
                rhs_cmp = rhs.truncate(cap)
            else:
                lhs_cmp = lhs.forgetful_pullback().truncate(cap)
                rhs_cmp = recon(spec, g, n + 1, vs + [alg.unit]).truncate(cap)
            d = first_diff(lhs_cmp, rhs_cmp)
            if d:
                failures.append({"axiom": "forgetful", "at": (g, n, idx), "diff": d})
                break
    return failures
