"""Independent brute-force implementations used to cross-check the engine.

These deliberately avoid the main code paths: graphs are generated by
unrestricted search with isomorphism rejection instead of degeneration
walks, multi-index kappa classes by summing over all permutations instead
of set partitions, and vertex insertion sums by the raw m-sum instead of
the closed-form exponential.
"""

from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from math import factorial

from .graphs import StableGraph
from .kappa import KappaPoly
from .linalg import Q0
from .taut import forgetful_pushforward_monomial


def _connected(nv, edges):
    if nv == 0:
        return False
    adj = [[] for _ in range(nv)]
    for u, w in edges:
        adj[u].append(w)
        adj[w].append(u)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == nv


def brute_force_stable_graphs(g, n):
    """All stable graphs for (g, n) by exhaustive generation.

    Loops over vertex counts, genus assignments, edge multisets and leg
    placements, with stability used only as a pruning bound on the leg
    distribution; duplicates are removed through the canonical form.
    """
    if 2 * g - 2 + n <= 0:
        raise ValueError("unstable pair")
    out = set()
    max_v = 2 * g - 2 + n
    dim = 3 * g - 3 + n
    for nv in range(1, max_v + 1):
        slots = [(i, j) for i in range(nv) for j in range(i, nv)]
        for genera in product(range(g + 1), repeat=nv):
            total = sum(genera)
            if total > g:
                continue
            h1 = g - total
            ne = h1 + nv - 1
            if ne < 0 or ne > dim:
                continue
            for chosen in combinations_with_replacement(range(len(slots)), ne):
                edges = [slots[i] for i in chosen]
                if not _connected(nv, edges):
                    continue
                deg = [0] * nv
                for u, w in edges:
                    deg[u] += 1
                    deg[w] += 1
                need = [max(0, 3 - 2 * genera[v] - deg[v]) for v in range(nv)]
                if sum(need) > n:
                    continue
                for legs in _leg_assignments(n, nv, need):
                    out.add(StableGraph(genera, legs, edges))
    return sorted(out)


def _leg_assignments(n, nv, need):
    """Assignments of n labeled legs meeting per-vertex minima, with pruning."""
    total_need = sum(need)

    def rec(i, counts, remaining_need):
        if n - i < remaining_need:
            return
        if i == n:
            yield ()
            return
        for v in range(nv):
            new_need = remaining_need - (1 if counts[v] < need[v] else 0)
            counts[v] += 1
            for rest in rec(i + 1, counts, new_need):
                yield (v,) + rest
            counts[v] -= 1

    yield from rec(0, [0] * nv, total_need)


def multikappa_by_permutations(ks, cap):
    """kappa multi-index class by summing cycle products over all of S_m."""
    ks = list(ks)
    m = len(ks)
    terms = {}
    for perm in permutations(range(m)):
        seen = [False] * m
        key = []
        for start in range(m):
            if seen[start]:
                continue
            cyc_sum = 0
            v = start
            while not seen[v]:
                seen[v] = True
                cyc_sum += ks[v]
                v = perm[v]
            key.append(cyc_sum)
        key = tuple(sorted(key))
        terms[key] = terms.get(key, Q0) + 1
    return KappaPoly(cap, terms)


def vertex_msum_kappa(t_hat, cap):
    """Vertex insertion sum from the raw m-sum.

    t_hat[k] is the z^k coefficient of the rescaled translation series at
    one projector (valuation >= 2).  Returns
    sum_m (1/m!) (p_m)_* (that(psi) ... that(psi)) through degree cap.
    """
    total = KappaPoly.constant(cap, 1)
    tuples = []

    def extend(prefix, start, deg):
        if prefix:
            tuples.append(list(prefix))
        for a in range(start, len(t_hat)):
            if deg + (a - 1) > cap:
                break
            prefix.append(a)
            extend(prefix, a, deg + a - 1)
            prefix.pop()

    extend([], 2, 0)
    for tup in tuples:
        m = len(tup)
        weight = Fraction(1, factorial(m))
        arrangements = factorial(m)
        for a in set(tup):
            arrangements //= factorial(tup.count(a))
        weight *= arrangements
        for a in tup:
            weight *= t_hat[a]
        if weight == 0:
            continue
        total = total + forgetful_pushforward_monomial(tup, cap).scale(weight)
    return total


def vertex_factor_diff(spec, mu, cap):
    """Closed-form vertex exponential minus the m-sum, at one projector.

    The m-sum needs the translation series through z^{cap+1} (an exponent-a
    factor contributes kappa degree a-1), one order beyond the stored
    truncation, so the rescaled series is rebuilt from R^{-1} unit directly:
    that[k] = -u[k-1] for k >= 2 with u = s_mu / theta_mu.
    """
    s = spec.r_inverse().apply(spec.algebra.unit)
    coords = [spec.ss.to_semisimple(c) for c in s.coeffs]
    u = [coords[k][mu] / spec.ss.weights[mu] for k in range(len(s.coeffs))]
    t_hat = [Q0, Q0] + [-u[k - 1] for k in range(2, min(cap + 1, len(u)) + 1)]
    msum = vertex_msum_kappa(t_hat, cap)
    return spec.vertex_exp(mu, cap) - msum
