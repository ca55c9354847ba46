"""Command line: coeff, verify, scan, fermat, hecke.

Exit status: 0 success (verify: holds_to_bound), 2 refuted, 3 not
applicable, 1 scan finished with FLAG records, 64 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from . import cm_arith, congruence
from .arith import isprime, primes_between
from .cache import CoefficientCache, default_cache_dir
from .etaforms import ADMISSIBLE_PAIRS, FAMILY_R, EtaPowerSpec, InadmissibleSpec, decompose_t
from .hecke import annihilated_mod, serre_case
from .qseries import PrecisionError
from .records import ReportRecord, serialize, stamp, to_csv

EXIT_OK = 0
EXIT_FLAGS = 1
EXIT_REFUTED = 2
EXIT_NOT_APPLICABLE = 3
EXIT_USAGE = 64

log = logging.getLogger("etacong")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2, which is reserved here for "refuted"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    """``"4,8,14"`` or ``"4-14"`` or a mix; empty string gives an empty list."""
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--cache-dir", default=None,
                        help="coefficient cache (default: $ETACONG_CACHE_DIR or ~/.cache/etacong)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--no-timestamps", action="store_true",
                        help="omit wall-clock and elapsed fields for byte-identical output")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="etacong", description="Eta powers, CM coefficients and t-color congruences")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("coeff", parents=[common], help="coefficient table of eta(delta z)^r")
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--delta", type=int, default=None)
    c.add_argument("--limit", type=int, default=40, help="print 0 <= n <= limit")
    c.add_argument("--modulus", type=int, default=None)
    c.add_argument("--product", action="store_true",
                   help="coefficients of prod (1-q^n)^r instead (any integer r)")

    v = sub.add_parser("verify", parents=[common], help="check p_{-t}(ell n + a) = 0 mod ell")
    v.add_argument("--t", type=int, required=True)
    v.add_argument("--ell", type=int, required=True)
    v.add_argument("--limit", type=int, default=200)
    v.add_argument("--backend", choices=(congruence.BACKEND_MOD, congruence.BACKEND_EXACT),
                   default=congruence.BACKEND_MOD)

    s = sub.add_parser("scan", parents=[common], help="sweep claims, write JSON lines")
    s.add_argument("--r", dest="r_range", default=",".join(map(str, FAMILY_R)))
    s.add_argument("--ell-max", type=int, default=50)
    s.add_argument("--s-max", type=int, default=3)
    s.add_argument("--limit", type=int, default=100)
    s.add_argument("--out", default="-")

    f = sub.add_parser("fermat", parents=[common], help="Fermat representations and A_r(p)")
    f.add_argument("--p", type=int, required=True)

    h = sub.add_parser("hecke", parents=[common], help="T_ell annihilation mod ell")
    h.add_argument("--r", type=int, required=True)
    h.add_argument("--delta", type=int, default=None)
    h.add_argument("--ell", type=int, default=None)
    h.add_argument("--ell-max", type=int, default=50)
    h.add_argument("--precision-factor", type=int, default=50,
                   help="check coefficients below factor * ell")
    return p


def _spec(r, delta):
    if delta is None:
        if r not in ADMISSIBLE_PAIRS:
            raise UsageError(f"r={r} has no admissible delta")
        delta = ADMISSIBLE_PAIRS[r]
    try:
        return EtaPowerSpec(r, delta)
    except InadmissibleSpec as exc:
        raise UsageError(str(exc)) from None


def _emit(records, args, out=None):
    out = out or sys.stdout
    if args.format == "csv":
        out.write(to_csv(records))
    else:
        for rec in records:
            out.write(serialize(rec) + "\n")
    out.flush()


def cmd_coeff(args, cache):
    start = time.perf_counter()
    if args.limit < 0:
        raise UsageError("--limit must be >= 0")
    if args.modulus is not None and args.modulus < 2:
        raise UsageError("--modulus must be >= 2")
    precision = args.limit + 1
    if args.product:
        series = cache.euler_power(args.r, precision, args.modulus)
        delta = 1
    else:
        spec = _spec(args.r, args.delta)
        series = cache.eta_power(spec, precision, args.modulus)
        delta = spec.delta
    ts = stamp(time.perf_counter() - start, not args.no_timestamps)
    recs = [ReportRecord("coeff", {"r": args.r, "delta": delta, "modulus": args.modulus,
                                   "n": n, "value": str(int(series[n]))}, ts)
            for n in range(precision)]
    _emit(recs, args)
    return EXIT_OK


def _verify_payload(report):
    d = report.as_dict()
    d.pop("elapsed")
    return d


def cmd_verify(args, cache):
    if args.t < 1:
        raise UsageError("--t must be >= 1")
    if args.ell < 5 or not isprime(args.ell):
        raise UsageError("--ell must be a prime >= 5")
    start = time.perf_counter()
    routes = decompose_t(args.t, args.ell)
    routes = [c for c in routes if c.ell * c.s - c.r >= 1]
    payload = {"t": args.t, "ell": args.ell, "bound": args.limit,
               "decompositions": [{"s": c.s, "r": c.r,
                                   "classification": congruence.classify(c.r, args.ell).value}
                                  for c in routes]}
    if not routes:
        payload.update(verdict=congruence.Verdict.NOT_APPLICABLE.value,
                       note="t has no decomposition ell*s - r with r in the family")
        code = EXIT_NOT_APPLICABLE
    else:
        # every decomposition yields the same progression, so one run covers all
        claim = congruence.CongruenceClaim(routes[0].r, args.ell, routes[0].s)
        report = congruence.verify_claim(claim, args.limit, args.backend, provider=cache.pcolor_mod)
        payload.update(_verify_payload(report))
        if congruence.is_special_prime(args.ell, args.t):
            special = congruence.special_prime_check(args.ell, args.t, args.limit,
                                                     provider=cache.pcolor_mod)
            payload["special_prime"] = _verify_payload(special)
        code = EXIT_OK if report.verdict is congruence.Verdict.HOLDS_TO_BOUND else EXIT_REFUTED
    rec = ReportRecord("verify", payload, stamp(time.perf_counter() - start, not args.no_timestamps))
    _emit([rec], args)
    if code == EXIT_REFUTED:
        n, res = payload["witnesses"][0]
        a = payload["claim"]["a"]
        print(f"refuted: p_-{args.t}({args.ell * n + a}) = {res} mod {args.ell} (n={n})",
              file=sys.stderr)
    return code


def _scan_record(item, ts_on):
    if isinstance(item, congruence.Flag):
        return ReportRecord("flag", item.as_dict(), stamp(enabled=ts_on))
    return ReportRecord("verify", _verify_payload(item), stamp(item.elapsed, ts_on))


def cmd_scan(args, cache):
    if args.format != "json":
        raise UsageError("scan writes JSON lines only")
    r_values = _int_list(args.r_range)
    bad = [r for r in r_values if r not in FAMILY_R]
    if bad:
        raise UsageError(f"r values {bad} carry no congruence family")
    ells = primes_between(5, args.ell_max) if args.ell_max >= 5 else []
    s_values = list(range(0, args.s_max + 1))
    ts_on = not args.no_timestamps
    params = {"r": r_values, "ell": ells, "s": s_values, "bound": args.limit}
    out = sys.stdout if args.out == "-" else open(args.out, "w")
    counts = {"records": 0, "flags": 0}
    complete = False
    try:
        out.write(serialize(ReportRecord("scan", {"section": "header", **params},
                                         stamp(enabled=ts_on))) + "\n")
        for item in congruence.sweep(r_values, ells, s_values, args.limit,
                                     threads=args.threads, provider=cache.pcolor_mod):
            out.write(serialize(_scan_record(item, ts_on)) + "\n")
            counts["records"] += 1
            counts["flags"] += isinstance(item, congruence.Flag)
        complete = True
    finally:
        out.write(serialize(ReportRecord("scan", {"section": "sentinel", "complete": complete,
                                                  **counts}, stamp(enabled=ts_on))) + "\n")
        out.flush()
        if out is not sys.stdout:
            out.close()
    return EXIT_FLAGS if counts["flags"] else EXIT_OK


def cmd_fermat(args, cache):
    p = args.p
    if p < 2 or not isprime(p):
        raise UsageError("--p must be prime")
    payload = {"p": p}
    for name, fn, fields in (("two_squares", cm_arith.rep_two_squares, ("a", "b")),
                             ("eisenstein", cm_arith.rep_eisenstein, ("x", "y"))):
        try:
            rep = fn(p)[0]
            payload[name] = dict(zip(fields, rep.pair))
        except cm_arith.InertPrime:
            payload[name] = "no representation"
    coeffs = {}
    if p > 3:
        for r in FAMILY_R:
            if not cm_arith.is_split(r, p):
                coeffs[str(r)] = {"status": "inert"}
                continue
            resolved = cm_arith.resolve_formula(r)
            coeffs[str(r)] = {
                "status": "split",
                "value": str(cm_arith.cm_prime_coeff(r, p)),
                "residue": cm_arith.cm_residue(r, p),
                "normalized": resolved.normalized(p),
                "rule": resolved.describe(),
            }
    payload["coefficients"] = coeffs
    _emit([ReportRecord("fermat", payload, stamp(enabled=not args.no_timestamps))], args)
    return EXIT_OK


def cmd_hecke(args, cache):
    spec = _spec(args.r, args.delta)
    if args.ell is not None:
        if args.ell < 5 or not isprime(args.ell):
            raise UsageError("--ell must be a prime >= 5")
        ells = [args.ell]
    else:
        ells = primes_between(5, args.ell_max)
    recs = []
    for ell in ells:
        start = time.perf_counter()
        precision = args.precision_factor * ell + 1
        f = cache.eta_power(spec, precision, ell)
        an = annihilated_mod(f, ell, spec.weight)
        recs.append(ReportRecord("hecke", {
            "r": spec.r, "delta": spec.delta, "ell": ell, "precision": precision,
            "annihilated": an.annihilated, "witness": an.witness, "checked": an.checked,
            "predicted": serre_case(spec.r, ell).value,
        }, stamp(time.perf_counter() - start, not args.no_timestamps)))
    _emit(recs, args)
    return EXIT_OK


COMMANDS = {"coeff": cmd_coeff, "verify": cmd_verify, "scan": cmd_scan,
            "fermat": cmd_fermat, "hecke": cmd_hecke}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        print("etacong: error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    cache = CoefficientCache(None if args.no_cache else (args.cache_dir or default_cache_dir()))
    try:
        return COMMANDS[args.command](args, cache)
    except UsageError as exc:
        print(f"etacong {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionError as exc:
        print(f"etacong {args.command}: precision error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
