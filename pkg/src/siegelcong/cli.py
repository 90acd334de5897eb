"""Command-line front end.

Subcommands: gens, check, scan, table, sieve, heat-cycle, search.  Exit
codes: 0 command completed (individual verdicts may be "fails"), 1 usage or
parse error, 2 insufficient precision, 3 cache I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from importlib import resources

from . import expr as exprmod
from .cache import DiskCache, default_cache_dir
from .errors import (CacheIOError, InvalidArgumentError, PrecisionError,
                     SiegelCongError)
from .jacobi import (JacobiFormSeries, heat_cycle, heat_cycle_required_prec,
                     jacobi_cusp, jacobi_eisenstein, jac_mul,
                     qseries_times_jacobi)
from .qexp import delta_q, eisenstein_q
from .ring import FpRing, ring_from_tag
from .siegel import (GeneratorContext, congruence_required_prec,
                     congruence_scan, search_congruences, siegel_congruence,
                     sieve as siegel_sieve, enumerate_reduced)

TABLE_ROWS = [
    ("chi12", [5, 11]),
    ("E4*chi12", [5]),
    ("E4*chi12 - E6*chi10", [7]),
    ("E6*chi12", [5]),
    ("E4^2*chi10 + 7*E6*chi12", [17]),
    ("E4^2*chi12", [5]),
    ("chi10^2 + 2*E4^2*chi12 - 2*E4*E6*chi10", [19]),
]


class UsageError(InvalidArgumentError):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    top = _ArgumentParser(prog="siegelcong",
                          description="Ramanujan-type congruences for degree-2 "
                                      "Siegel modular forms and Jacobi forms")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, ring=True):
        if ring:
            p.add_argument("--ring", default=None,
                           help="coefficient ring: int, rat, or fp:<p>")
        p.add_argument("--prec", type=int, default=None,
                       help="override the auto-derived precision")
        p.add_argument("--out", choices=("json", "csv"), default="json")
        p.add_argument("--cache-dir", default=None,
                       help=f"cache directory (default: $CONGRUENCE_CACHE_DIR or .cache)")
        p.add_argument("--no-cache", action="store_true")

    p = sub.add_parser("gens", help="build (and cache) the generator expansions")
    common(p)
    p.set_defaults(func=cmd_gens)

    p = sub.add_parser("check", help="decide one congruence and emit a certificate")
    p.add_argument("expr")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("scan", help="certificates for every residue b mod p")
    p.add_argument("expr")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--skip-zero", action="store_true",
                   help="skip b = 0 (its Sturm bound is the largest)")
    common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("table", help="regenerate the standard table and diff "
                                     "against the shipped expected values")
    p.add_argument("--max-prime", type=int, default=None,
                   help="only run rows with p up to this bound")
    common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sieve", help="project onto one Legendre class of det")
    p.add_argument("expr")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--s", required=True, choices=("0", "+1", "-1"))
    p.add_argument("--verify-against", default=None, metavar="EXPR2",
                   help="check the sieve equals EXPR2 mod p on the Sturm bound")
    common(p)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("heat-cycle", help="filtration walk of a Jacobi form's heat cycle")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--form", required=True,
                   help="'*'-separated product of E4_1, E6_1, phi10_1, phi12_1, "
                        "E4, E6, Delta, each with an optional ^<exp>")
    common(p, ring=False)
    p.set_defaults(func=cmd_heat_cycle)

    p = sub.add_parser("search", help="search all cusp forms for congruences")
    p.add_argument("--max-weight", type=int, default=20)
    p.add_argument("--max-prime", type=int, default=43)
    p.add_argument("--quiet", action="store_true")
    common(p)
    p.set_defaults(func=cmd_search)
    return top


def _context(args, prec, ring=None):
    ring = ring if ring is not None else ring_from_tag(args.ring or "int")
    if args.prec is not None:
        prec = args.prec
    cache = None
    if not getattr(args, "no_cache", False):
        cache = DiskCache(args.cache_dir if args.cache_dir else default_cache_dir())
    return GeneratorContext(ring, prec, cache)


def _eval_mod_p(args, text, p, b=0):
    """Evaluate an expression over fp:p (or reduce an exact evaluation).

    b picks the certificate whose Sturm bound the default box must cover;
    b = 0 gives the largest one.
    """
    node = exprmod.parse(text)
    k = exprmod.weight(node)
    ring = ring_from_tag(args.ring) if args.ring else ring_from_tag(f"fp:{p}")
    prec = args.prec if args.prec is not None else congruence_required_prec(k, p, b)
    ctx = _context(args, prec, ring=ring)
    form = exprmod.evaluate(node, ctx)
    if not isinstance(ring, FpRing):
        form = form.reduce_mod(p)
        form.weight = k
    return node, k, form, ctx


def _emit(args, doc, csv_rows=None, csv_header=None):
    if args.out == "csv" and csv_rows is not None:
        buf = io.StringIO()
        w = csv.writer(buf)
        if csv_header:
            w.writerow(csv_header)
        w.writerows(csv_rows)
        sys.stdout.write(buf.getvalue())
    else:
        json.dump(doc, sys.stdout, indent=2, sort_keys=False)
        sys.stdout.write("\n")


def cmd_gens(args):
    ring = ring_from_tag(args.ring or "int")
    prec = args.prec if args.prec is not None else 4
    ctx = _context(args, prec, ring=ring)
    doc = {}
    for name in ("E4", "E6", "chi10", "chi12"):
        form = ctx.generator(name)
        dump = form.to_json()
        doc[name] = {"weight": form.weight, "prec": form.prec,
                     "nonzero": len(dump["coeffs"]), "ring": form.ring.tag}
    _emit(args, doc)
    return 0


def cmd_check(args):
    p = args.p
    _check_prime(p)
    node, k, form, _ = _eval_mod_p(args, args.expr, p, b=args.b)
    cert = siegel_congruence(form, p, args.b, label=exprmod.to_text(node))
    _emit(args, cert.to_json())
    return 0


def cmd_scan(args):
    p = args.p
    _check_prime(p)
    node, k, form, _ = _eval_mod_p(args, args.expr, p,
                                   b=1 if args.skip_zero else 0)
    certs = congruence_scan(form, p, label=exprmod.to_text(node),
                            include_zero=not args.skip_zero)
    doc = {str(b): c.to_json() for b, c in sorted(certs.items())}
    rows = [(b, c.verdict, "" if not c.witness else " ".join(map(str, c.witness)))
            for b, c in sorted(certs.items())]
    _emit(args, doc, csv_rows=rows, csv_header=("b", "verdict", "witness"))
    return 0


def _expected_table():
    with resources.files("siegelcong.data").joinpath("table_expected.json").open() as fh:
        return json.load(fh)


def cmd_table(args):
    expected = {(row["form"], c["p"]): c["holds"]
                for row in _expected_table()["rows"] for c in row["congruences"]}
    report = []
    ok = True
    for text, primes in TABLE_ROWS:
        for p in primes:
            if args.max_prime is not None and p > args.max_prime:
                continue
            node, k, form, _ = _eval_mod_p(args, text, p, b=1)
            certs = congruence_scan(form, p, label=text, include_zero=False)
            holds = sorted(b for b, c in certs.items() if c.holds)
            want = expected[(text, p)]
            status = "MATCH" if holds == want else "MISMATCH"
            ok = ok and status == "MATCH"
            report.append({"form": text, "p": p, "holds": holds,
                           "expected": want, "status": status})
            print(f"{status}: {text}  (p = {p})  holds at {holds}", file=sys.stderr)
    _emit(args, {"rows": report, "all_match": ok})
    return 0


def cmd_sieve(args):
    p = args.p
    _check_prime(p)
    s = {"0": 0, "+1": 1, "-1": -1}[args.s]
    node = exprmod.parse(args.expr)
    k = exprmod.weight(node)
    k_after = k + p * p - 1
    ring = ring_from_tag(args.ring) if args.ring else ring_from_tag(f"fp:{p}")
    prec = args.prec if args.prec is not None else (k_after // 3) // 2
    ctx = _context(args, prec, ring=ring)
    form = exprmod.evaluate(node, ctx)
    part = siegel_sieve(form, p, s)
    if args.verify_against:
        node2 = exprmod.parse(args.verify_against)
        k2 = exprmod.weight(node2)
        if k2 != k_after:
            raise InvalidArgumentError(
                f"verification target has weight {k2}, the sieve lives in weight {k_after}")
        other = exprmod.evaluate(node2, ctx)
        if not isinstance(ring, FpRing):
            part = part.reduce_mod(p)
            other = other.reduce_mod(p)
        bound = k_after // 3
        agree = all((part.a_T(t) - other.a_T(t)) % p == 0
                    for t in enumerate_reduced(min(bound, 2 * prec)))
        _emit(args, {"form": exprmod.to_text(node), "p": p, "s": s,
                     "verify_against": exprmod.to_text(node2),
                     "weight": k_after, "bound": bound, "match": agree})
        return 0
    _emit(args, dict(part.to_json(), sieve_class=s, base_form=exprmod.to_text(node)))
    return 0


_JACOBI_ATOMS = {"E4_1": ("jac", 4), "E6_1": ("jac", 6),
                 "phi10_1": ("jac", 10), "phi12_1": ("jac", 12),
                 "E4": ("ell", 4), "E6": ("ell", 6), "Delta": ("ell", 12)}


def build_named_jacobi(name, prec, ring):
    """Build the Jacobi form named by a '*'-separated product expression."""
    factors = []
    for part in name.split("*"):
        part = part.strip()
        if "^" in part:
            base, _, e = part.partition("^")
            try:
                exp = int(e)
            except ValueError:
                raise InvalidArgumentError(f"bad exponent in {part!r}") from None
        else:
            base, exp = part, 1
        if base not in _JACOBI_ATOMS or exp < 0:
            raise InvalidArgumentError(
                f"unknown Jacobi factor {part!r} (atoms: {', '.join(_JACOBI_ATOMS)})")
        factors.extend([base] * exp)
    if not factors:
        raise InvalidArgumentError("empty form name")
    jac = None
    ell = None
    for base in factors:
        kind, k = _JACOBI_ATOMS[base]
        if kind == "jac":
            built = (jacobi_eisenstein if k in (4, 6) else jacobi_cusp)(k, prec, ring)
            jac = built if jac is None else jac_mul(jac, built)
        else:
            built = delta_q(prec, ring) if k == 12 else eisenstein_q(k, prec, ring)
            ell = built if ell is None else ell * built
    if jac is None:
        raise InvalidArgumentError("form must contain at least one index-1 factor")
    if ell is not None:
        jac = qseries_times_jacobi(ell, jac)
    return jac


def cmd_heat_cycle(args):
    p = args.p
    _check_prime(p)
    ring = ring_from_tag(f"fp:{p}")
    prec = args.prec if args.prec is not None else heat_cycle_required_prec(
        args.weight, args.index, p)
    form = build_named_jacobi(args.form, prec, ring)
    if form.weight != args.weight or form.index != args.index:
        raise InvalidArgumentError(
            f"form {args.form!r} has weight {form.weight}, index {form.index}; "
            f"flags said {args.weight}, {args.index}")
    rep = heat_cycle(form)
    _emit(args, dict(rep.to_json(), form=args.form))
    return 0


def cmd_search(args):
    cache = None
    if not args.no_cache:
        cache = DiskCache(args.cache_dir if args.cache_dir else default_cache_dir())
    progress = None if args.quiet else (lambda msg: print(msg, file=sys.stderr))
    found = search_congruences(args.max_weight, args.max_prime, cache=cache,
                               progress=progress)
    hits = [c for c in found if c.get("status") == "congruence"]
    doc = {"max_weight": args.max_weight, "max_prime": args.max_prime,
           "congruences": hits, "cells": found}
    rows = [(c["weight"], c["p"], c["legendre_class"], ";".join(c["forms"]))
            for c in hits]
    _emit(args, doc, csv_rows=rows, csv_header=("weight", "p", "class", "forms"))
    return 0


def _check_prime(p):
    from .ring import is_prime
    if p < 5 or not is_prime(p):
        raise InvalidArgumentError(f"p must be a prime >= 5, got {p}")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except PrecisionError as exc:
        print(f"insufficient precision: {exc}", file=sys.stderr)
        return 2
    except CacheIOError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return 3
    except SiegelCongError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
