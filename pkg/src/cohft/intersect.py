"""Exact psi-kappa intersection numbers and correlators of reconstructed
theories.

psi_correlator implements the Virasoro/KdV recursion with the two standard
seeds <tau_0^3>_0 = 1 and <tau_1>_1 = 1/24: the string equation removes a
tau_0, the dilaton equation removes a tau_1, and the main recursion applies
to an index >= 2.  kappa classes are eliminated one at a time through the
pushforward definition kappa_b = p_*(psi^{b+1}): on the space with one more
point the remaining kappas pick up the correction kappa_s - psi_new^s,
while the old psi classes need no correction because every term carries a
positive power of the new psi class, which kills the correction divisors.
"""

import os
import threading
from fractions import Fraction
from itertools import combinations

from .linalg import Q0, Q1, frac_str


class UnstablePair(ValueError):
    pass


def double_factorial_odd(k):
    """(2k+1)!! for k >= 0."""
    out = 1
    for i in range(3, 2 * k + 2, 2):
        out *= i
    return out


class Correlators:
    """Memoized intersection-number backend; safe for concurrent use."""

    def __init__(self):
        self._psi = {}
        self._kp = {}
        self._lock = threading.Lock()

    # -- pure psi numbers ----------------------------------------------------

    def psi_correlator(self, g, exps):
        exps = tuple(sorted(exps, reverse=True))
        n = len(exps)
        if 2 * g - 2 + n <= 0:
            raise UnstablePair("no moduli space for (%d,%d)" % (g, n))
        if any(a < 0 for a in exps):
            raise ValueError("negative psi exponent")
        if sum(exps) != 3 * g - 3 + n:
            return Q0
        key = (g, exps)
        with self._lock:
            if key in self._psi:
                return self._psi[key]
        val = self._psi_recurse(g, exps)
        with self._lock:
            self._psi[key] = val
        return val

    def _psi_recurse(self, g, exps):
        n = len(exps)
        if (g, n) == (0, 3):
            return Q1
        if (g, n) == (1, 1):
            return Fraction(1, 24)
        if exps[-1] == 0:
            # string equation
            rest = exps[:-1]
            total = Q0
            for j, a in enumerate(rest):
                if a >= 1:
                    reduced = rest[:j] + (a - 1,) + rest[j + 1 :]
                    total += self.psi_correlator(g, reduced)
            return total
        if exps[-1] == 1:
            # dilaton equation
            rest = exps[:-1]
            return (2 * g - 2 + (n - 1)) * self.psi_correlator(g, rest)
        # main recursion on the largest index, all entries >= 2 here
        a1, rest = exps[0], exps[1:]
        total = Q0
        for j, aj in enumerate(rest):
            others = rest[:j] + rest[j + 1 :]
            coeff = Fraction(
                double_factorial_odd(a1 + aj - 1), double_factorial_odd(aj - 1)
            )
            total += coeff * self.psi_correlator(g, others + (a1 + aj - 1,))
        for b in range(a1 - 1):
            c = a1 - 2 - b
            w = Fraction(double_factorial_odd(b) * double_factorial_odd(c), 2)
            if g >= 1:
                total += w * self.psi_correlator(g - 1, rest + (b, c))
            for g1 in range(g + 1):
                g2 = g - g1
                for size in range(len(rest) + 1):
                    for picked in combinations(range(len(rest)), size):
                        left = tuple(rest[i] for i in picked) + (b,)
                        right = tuple(
                            rest[i] for i in range(len(rest)) if i not in picked
                        ) + (c,)
                        if 2 * g1 - 2 + len(left) <= 0 or 2 * g2 - 2 + len(right) <= 0:
                            continue
                        if sum(left) != 3 * g1 - 3 + len(left):
                            continue
                        total += (
                            w
                            * self.psi_correlator(g1, left)
                            * self.psi_correlator(g2, right)
                        )
        return total / double_factorial_odd(a1)

    # -- kappa reduction -------------------------------------------------------

    def kappa_psi_correlator(self, g, psi_exps, kappa_key=()):
        psi_exps = tuple(sorted(psi_exps, reverse=True))
        kappa_key = tuple(sorted(kappa_key))
        n = len(psi_exps)
        if 2 * g - 2 + n <= 0:
            raise UnstablePair("no moduli space for (%d,%d)" % (g, n))
        if sum(psi_exps) + sum(kappa_key) != 3 * g - 3 + n:
            return Q0
        if not kappa_key:
            return self.psi_correlator(g, psi_exps)
        key = (g, psi_exps, kappa_key)
        with self._lock:
            if key in self._kp:
                return self._kp[key]
        b, rest = kappa_key[-1], kappa_key[:-1]
        total = Q0
        for size in range(len(rest) + 1):
            for picked in combinations(range(len(rest)), size):
                extra = sum(rest[i] for i in picked)
                left = tuple(rest[i] for i in range(len(rest)) if i not in picked)
                total += (-1) ** size * self.kappa_psi_correlator(
                    g, psi_exps + (b + 1 + extra,), left
                )
        with self._lock:
            self._kp[key] = total
        return total

    # -- consistency and persistence ------------------------------------------

    def check_string_dilaton(self):
        """String and dilaton equations on every memoized pure-psi key."""
        failures = []
        for g, exps in sorted(self._psi):
            n = len(exps)
            val = self._psi[(g, exps)]
            if 2 * g - 2 + (n + 1) > 0:
                string = sum(
                    (
                        self.psi_correlator(g, exps[:j] + (a - 1,) + exps[j + 1 :])
                        for j, a in enumerate(exps)
                        if a >= 1
                    ),
                    Q0,
                )
                if self.psi_correlator(g, exps + (0,)) != string:
                    failures.append(("string", g, exps))
                dilaton = (2 * g - 2 + n) * val
                if self.psi_correlator(g, exps + (1,)) != dilaton:
                    failures.append(("dilaton", g, exps))
        return failures

    def dump(self):
        lines = []
        for (g, exps), val in sorted(self._psi.items()):
            lines.append("psi %d %s = %s" % (g, ",".join(map(str, exps)), frac_str(val)))
        for (g, pp, kk), val in sorted(self._kp.items()):
            lines.append(
                "kp %d %s %s = %s"
                % (g, ",".join(map(str, pp)), ",".join(map(str, kk)), frac_str(val))
            )
        return "\n".join(lines) + ("\n" if lines else "")

    def load(self, text):
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            head, _, val = line.partition(" = ")
            parts = head.split()
            if parts[0] == "psi":
                g = int(parts[1])
                exps = tuple(int(x) for x in parts[2].split(",") if x != "")
                self._psi[(g, exps)] = Fraction(val)
            elif parts[0] == "kp":
                g = int(parts[1])
                pp = tuple(int(x) for x in parts[2].split(",") if x != "")
                kk = tuple(int(x) for x in parts[3].split(",") if x != "")
                self._kp[(g, pp, kk)] = Fraction(val)

    def save_to(self, directory):
        path = os.path.join(directory, "correlators.txt")
        with open(path, "w") as fh:
            fh.write(self.dump())
        return path

    def load_from(self, directory):
        path = os.path.join(directory, "correlators.txt")
        if os.path.exists(path):
            with open(path) as fh:
                self.load(fh.read())


_DEFAULT = Correlators()


def psi_correlator(g, *exps):
    return _DEFAULT.psi_correlator(g, exps)


def kappa_psi_correlator(g, psi_exps, kappa_key=()):
    return _DEFAULT.kappa_psi_correlator(g, psi_exps, kappa_key)


def default_backend():
    return _DEFAULT


def integrate_taut(expr, backend=None):
    """Integrate a decorated graph sum over its moduli space.

    Each decorated graph integrates to the product over vertices of the
    kappa-psi correlator of the local decoration; the pushforward along the
    gluing map preserves integrals and the automorphism weights are already
    in the coefficients.
    """
    backend = backend or _DEFAULT
    total = Q0
    for key, coeff in expr.terms.items():
        graph = key.graph
        value = coeff
        for v in range(graph.num_vertices):
            exps = []
            for kind in graph.half_edges(v):
                if kind[0] == "leg":
                    exps.append(key.leg_psi[kind[1] - 1])
                else:
                    _, i, end = kind
                    exps.append(key.edge_psi[i][end])
            value *= backend.kappa_psi_correlator(
                graph.genera[v], tuple(exps), key.vertex_kappa[v]
            )
            if value == 0:
                break
        total += value
    return total


def correlator_of_theory(spec, g, n, vectors, psi_exps, backend=None):
    """Exact integral of the reconstructed class times psi powers."""
    from .givental import r_action
    from .taut import DecoratedGraph, TautExpr

    if len(psi_exps) != n:
        raise ValueError("need one psi exponent per marked point")
    if spec.degree < 3 * g - 3 + n:
        # an integral of a class truncated below the space dimension would
        # silently miss terms; graded comparisons may truncate, numbers not
        raise ValueError(
            "truncation degree %d is below the dimension %d of the target space"
            % (spec.degree, 3 * g - 3 + n)
        )
    expr = r_action(spec, g, n, vectors)
    if any(psi_exps):
        shifted = {}
        for key, c in expr.terms.items():
            new_key = DecoratedGraph(
                key.graph,
                key.vertex_kappa,
                tuple(a + b for a, b in zip(key.leg_psi, psi_exps)),
                key.edge_psi,
            )
            if new_key.degree() <= 3 * g - 3 + n:
                shifted[new_key] = shifted.get(new_key, Q0) + c
        expr = TautExpr(g, n, 3 * g - 3 + n, shifted)
    return integrate_taut(expr, backend)
