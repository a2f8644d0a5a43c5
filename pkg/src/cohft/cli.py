"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 identity-check failure,
3 internal error.  All output is deterministic: results are assembled in
canonical order whatever the thread count, and --json switches to a
machine-readable mirror of the same data.

The COHFT_CACHE_DIR environment variable, when set, persists the
correlator memo table between runs as sorted key-value text.
"""

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from .config import ConfigError, parse_config, serialize_config
from .frobenius import InvalidAlgebra, NotInvertible, NotSplit
from .givental import (
    r_action,
    reconstruct_fixed,
    reconstruct_free,
    verify_axioms,
)
from .graphs import enumerate_stable_graphs, special_order
from .intersect import correlator_of_theory, default_backend
from .linalg import frac_str
from .oracles import brute_force_stable_graphs, vertex_factor_diff
from .taut import exp_pushforward_check


def _build_parser():
    parser = argparse.ArgumentParser(prog="cohft", description=__doc__)
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--threads", type=int, default=1, help="worker threads")
    parser.add_argument("--config", help="path to a spec config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra", help="algebra utilities")
    p.add_argument("action", choices=["check"])

    p = sub.add_parser("graphs", help="stable graph utilities")
    p.add_argument("action", choices=["enumerate"])
    p.add_argument("g", type=int)
    p.add_argument("n", type=int)

    p = sub.add_parser("strata", help="special-type stratification")
    p.add_argument("action", choices=["special"])
    p.add_argument("g", type=int)
    p.add_argument("n", type=int)

    sub.add_parser("classify", help="emit the classification data")

    p = sub.add_parser("reconstruct", help="evaluate a reconstructed class")
    p.add_argument("kind", choices=["fixed", "free", "nodal"])
    p.add_argument("g", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--vectors", help="semicolon-separated coordinate lists")

    p = sub.add_parser("verify", help="check the field-theory axioms")
    p.add_argument("kind", choices=["fixed", "free"])
    p.add_argument("--max-dim", type=int, default=2)

    p = sub.add_parser("correlator", help="exact correlator of the theory")
    p.add_argument("g", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--psi", help="comma-separated psi exponents")
    p.add_argument("--vectors", help="semicolon-separated coordinate lists")
    p.add_argument("--dump-table", action="store_true", help="also print every memoized number")

    p = sub.add_parser("oracle", help="diff independent brute-force paths")
    p.add_argument("kind", choices=["graphs", "dvv", "vertex-sum"])
    p.add_argument("--max-dim", type=int, default=3)
    return parser


def _load_spec(args):
    if not args.config:
        raise ConfigError([(None, "this command needs --config")])
    with open(args.config) as fh:
        return parse_config(fh.read())


def _parse_vectors(text, dim, n, unit):
    if not text:
        return [unit] * n
    chunks = [c for c in text.split(";") if c.strip()]
    if len(chunks) != n:
        raise ConfigError([(None, "expected %d vectors, got %d" % (n, len(chunks)))])
    out = []
    for chunk in chunks:
        coords = [Fraction(tok) for tok in chunk.replace(",", " ").split()]
        if len(coords) != dim:
            raise ConfigError([(None, "vector %r must have %d coordinates" % (chunk, dim))])
        out.append(tuple(coords))
    return out


def _emit(args, text_lines, payload):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _cmd_algebra(args):
    spec = _load_spec(args)
    lines = [
        "algebra ok: dim %d" % spec.algebra.dim,
        "semisimple: yes",
        "weights: " + " ".join(frac_str(w) for w in spec.ss.weights),
    ]
    payload = {
        "dim": spec.algebra.dim,
        "semisimple": True,
        "weights": [frac_str(w) for w in spec.ss.weights],
    }
    _emit(args, lines, payload)
    return 0


def _cmd_graphs(args):
    graphs = enumerate_stable_graphs(args.g, args.n)
    lines = [g.encode() for g in graphs]
    lines.append("total: %d" % len(graphs))
    payload = {"graphs": [g.encode() for g in graphs], "count": len(graphs)}
    _emit(args, lines, payload)
    return 0


def _cmd_strata(args):
    types, greater, hasse = special_order(args.g, args.n)
    lines = []
    for t in types:
        lines.append("type gamma'=%d nu'=%d k=%d mu=%d codim=%d" % (t + (t.codimension,)))
    for a, b in sorted(hasse):
        lines.append("hasse: %s > %s" % (tuple(a), tuple(b)))
    lines.append("total: %d" % len(types))
    payload = {
        "types": [list(t) for t in types],
        "codimensions": [t.codimension for t in types],
        "hasse": [[list(a), list(b)] for a, b in sorted(hasse)],
        "count": len(types),
    }
    _emit(args, lines, payload)
    return 0


def _cmd_classify(args):
    spec = _load_spec(args)
    if not spec.coherent:
        raise ConfigError([(None, "classify needs a coherent spec (set 'coherent: yes')")])
    lines = []
    for j, p in enumerate(spec.phi, start=1):
        lines.append("phi %d: %s" % (j, " ".join(frac_str(x) for x in p)))
    for k in range(1, spec.degree + 1):
        m = spec.r.coeffs[k]
        lines.append("R %d: %s" % (k, " | ".join(" ".join(frac_str(x) for x in row) for row in m)))
    payload = {
        "phi": [[frac_str(x) for x in p] for p in spec.phi],
        "R": [
            [[frac_str(x) for x in row] for row in spec.r.coeffs[k]]
            for k in range(1, spec.degree + 1)
        ],
        "config": serialize_config(spec),
    }
    _emit(args, lines, payload)
    return 0


def _cmd_reconstruct(args):
    spec = _load_spec(args)
    if args.kind in ("free", "nodal") and not spec.coherent:
        raise ConfigError([(None, "%s reconstruction needs a coherent spec" % args.kind)])
    vectors = _parse_vectors(args.vectors, spec.algebra.dim, args.n, spec.algebra.unit)
    if args.kind == "fixed":
        poly = reconstruct_fixed(spec, args.g, args.n, vectors)
        lines = [poly.render()]
        payload = {"class": poly.render()}
    elif args.kind == "free":
        poly = reconstruct_free(spec, args.g, args.n, vectors)
        lines = [poly.render()]
        payload = {"class": poly.render()}
    else:
        expr = r_action(spec, args.g, args.n, vectors, threads=args.threads)
        lines = expr.render_lines() or ["0"]
        payload = {"terms": expr.render_lines()}
    _emit(args, lines, payload)
    return 0


def _cmd_verify(args):
    spec = _load_spec(args)
    failures = verify_axioms(spec, args.kind, max_dim=args.max_dim)
    axioms = ["unit", "symmetry", "sewing-nonseparating", "sewing-separating", "forgetful"]
    failed = {f["axiom"] for f in failures}
    lines = ["%s: %s" % (a, "fail" if a in failed else "pass") for a in axioms]
    for f in failures:
        lines.append("  %s at %s: %s" % (f["axiom"], f["at"], f["diff"]))
    payload = {
        "passed": not failures,
        "axioms": {a: a not in failed for a in axioms},
        "failures": [
            {"axiom": f["axiom"], "at": str(f["at"]), "diff": str(f["diff"])} for f in failures
        ],
    }
    _emit(args, lines, payload)
    return 0 if not failures else 2


def _cmd_correlator(args):
    spec = _load_spec(args)
    if not spec.coherent:
        raise ConfigError([(None, "correlators need a coherent spec")])
    cache_dir = os.environ.get("COHFT_CACHE_DIR")
    backend = default_backend()
    if cache_dir:
        backend.load_from(cache_dir)
    psi = tuple(int(x) for x in args.psi.split(",")) if args.psi else (0,) * args.n
    if len(psi) != args.n:
        raise ConfigError([(None, "--psi needs %d entries" % args.n)])
    vectors = _parse_vectors(args.vectors, spec.algebra.dim, args.n, spec.algebra.unit)
    value = correlator_of_theory(spec, args.g, args.n, vectors, psi, backend)
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        backend.save_to(cache_dir)
    lines = [frac_str(value)]
    payload = {"value": frac_str(value)}
    if args.dump_table:
        table = backend.dump().rstrip("\n")
        if table:
            lines.extend(table.split("\n"))
        payload["table"] = table.split("\n") if table else []
    _emit(args, lines, payload)
    return 0


def _cmd_oracle(args):
    lines = []
    mismatches = 0
    if args.kind == "graphs":
        pairs = []
        g = 0
        while 3 * g - 3 <= args.max_dim:
            for n in range(0, args.max_dim + 4):
                if 2 * g - 2 + n > 0 and 0 <= 3 * g - 3 + n <= args.max_dim:
                    pairs.append((g, n))
            g += 1
        for g, n in sorted(pairs):
            main = enumerate_stable_graphs(g, n)
            oracle = brute_force_stable_graphs(g, n)
            ok = main == oracle
            mismatches += 0 if ok else 1
            lines.append("(%d,%d): main %d oracle %d %s" % (g, n, len(main), len(oracle), "ok" if ok else "MISMATCH"))
    elif args.kind == "dvv":
        backend = default_backend()
        keys = []
        for g in range(0, 3):
            for n in range(1, 6):
                if 2 * g - 2 + n <= 0:
                    continue
                d = 3 * g - 3 + n
                if d < 0 or d > args.max_dim + 2:
                    continue
                keys.append((g, (d,) + (0,) * (n - 1)))
        for g, exps in keys:
            backend.psi_correlator(g, exps)
        failures = backend.check_string_dilaton()
        mismatches += len(failures)
        lines.append("string/dilaton checks on %d keys: %s" % (len(backend._psi), "ok" if not failures else "FAIL"))
        from .taut import kappa_multi_index

        for g in range(0, 2):
            for n in range(1, 4):
                if 2 * g - 2 + n <= 0:
                    continue
                for m in range(1, 3):
                    d = 3 * g - 3 + n + m
                    if d > 5 or d < m:
                        continue
                    parts = [1] * (m - 1) + [d - 3 * g + 3 - n - (m - 1)]
                    if parts[-1] < 1:
                        continue
                    multi = kappa_multi_index(parts, d)
                    via_kappa = sum(
                        (backend.kappa_psi_correlator(g, (0,) * n, key) * c for key, c in multi.terms.items()),
                        Fraction(0),
                    )
                    direct = backend.psi_correlator(g, (0,) * n + tuple(p + 1 for p in parts))
                    ok = via_kappa == direct
                    mismatches += 0 if ok else 1
                    lines.append(
                        "kappa multi-index (%d,%d) parts %s: %s vs %s %s"
                        % (g, n, parts, frac_str(via_kappa), frac_str(direct), "ok" if ok else "MISMATCH")
                    )
    else:  # vertex-sum
        spec = _load_spec(args)
        for mu in range(spec.algebra.dim):
            diff = vertex_factor_diff(spec, mu, spec.degree)
            ok = diff.is_zero()
            mismatches += 0 if ok else 1
            lines.append("projector %d vertex sum: %s" % (mu, "ok" if ok else "MISMATCH " + diff.render()))
        rng = random.Random(20150417)
        for trial in range(5):
            coeffs = [Fraction(rng.randrange(-3, 4), rng.randrange(1, 3)) for _ in range(4)]
            ok = exp_pushforward_check(coeffs, 6)
            mismatches += 0 if ok else 1
            lines.append(
                "exponential pushforward %s: %s"
                % (" ".join(frac_str(c) for c in coeffs), "ok" if ok else "MISMATCH")
            )
        from .oracles import multikappa_by_permutations
        from .taut import kappa_multi_index

        for parts in [[1, 1], [2, 1], [1, 2, 3], [2, 2, 1], [1, 1, 1, 1], [1, 1, 1, 2, 2]]:
            ok = kappa_multi_index(parts, 12) == multikappa_by_permutations(parts, 12)
            mismatches += 0 if ok else 1
            lines.append(
                "multi-index kappa %s vs permutation sum: %s"
                % (",".join(map(str, parts)), "ok" if ok else "MISMATCH")
            )
    lines.append("mismatches: %d" % mismatches)
    _emit(args, lines, {"report": lines, "mismatches": mismatches})
    return 0 if mismatches == 0 else 2


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "algebra": _cmd_algebra,
        "graphs": _cmd_graphs,
        "strata": _cmd_strata,
        "classify": _cmd_classify,
        "reconstruct": _cmd_reconstruct,
        "verify": _cmd_verify,
        "correlator": _cmd_correlator,
        "oracle": _cmd_oracle,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(exc.render(), file=sys.stderr)
        return 1
    except (InvalidAlgebra, NotSplit, NotInvertible, ValueError) as exc:
        print("validation failure: %s" % exc, file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover
        print("internal error: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
