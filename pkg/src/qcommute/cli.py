"""Command line: ``qcommute {count,poly,series,verify}``.

Exit codes: 0 success, 1 verification failure or inconsistent pipelines,
2 usage error, 3 enumeration budget refused.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from fractions import Fraction

from . import counting, ff, oracle, qfunc, verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
MAX_SERIES_N = 40


class UsageError(Exception):
    pass


class Emitter:
    """Writes records as JSON lines or CSV to a stream."""

    def __init__(self, fmt: str, stream=None, fields: list[str] | None = None):
        self.fmt = fmt
        self.stream = stream or sys.stdout
        self.fields = fields
        self._csv = None

    def __call__(self, record: dict) -> None:
        if self.fmt == "csv":
            if self._csv is None:
                self._csv = csv.DictWriter(self.stream, fieldnames=self.fields or list(record), extrasaction="ignore")
                self._csv.writeheader()
            self._csv.writerow(record)
        else:
            self.stream.write(json.dumps(record) + "\n")
        self.stream.flush()


def _field(args) -> ff.FieldSpec | None:
    try:
        if args.q is not None:
            if args.p is not None:
                raise UsageError("give either --q or --p/--k, not both")
            return ff.field_for_q(args.q)
        if args.p is not None:
            return ff.field_make(args.p, args.k or 1)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return None


def _zeta_and_m(args, F: ff.FieldSpec | None) -> tuple[ff.FieldElement | None, int]:
    if args.zeta is not None:
        if F is None:
            raise UsageError("--zeta needs a field (--q or --p/--k)")
        try:
            z = F.parse(args.zeta)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if z.is_zero():
            raise UsageError("zeta must be nonzero")
        m = ff.mult_order(z)
        if args.m is not None and args.m != m:
            raise UsageError(f"--m {args.m} disagrees with ord({args.zeta}) = {m}")
        return z, m
    if args.m is None:
        if args.set in ("N",):
            return None, 1
        raise UsageError("give --m or --zeta")
    if args.m < 1:
        raise UsageError("--m must be positive")
    if F is not None and (F.q - 1) % args.m:
        raise UsageError(f"no element of order {args.m} in GF({F.q}): {args.m} does not divide {F.q - 1}")
    return None, args.m


COUNT_FIELDS = ["set", "n", "q", "m", "zeta", "method", "value", "consistent", "wall_time"]
SERIES_FIELDS = ["set", "m", "degree", "coefficient", "q", "value"]
VERIFY_FIELDS = ["check", "passed", "checked", "failures", "wall_time"]


def cmd_count(args, emit) -> int:
    emit.fields = COUNT_FIELDS
    F = _field(args)
    if F is None:
        raise UsageError("count needs a concrete field (--q or --p/--k)")
    z, m = _zeta_and_m(args, F)
    if z is None and args.method in ("oracle", "all"):
        roots = ff.roots_of_order(F, m)
        z = roots[0]
    methods = ["closed", "series", "oracle"] if args.method == "all" else [args.method]
    base = {"set": args.set, "n": args.n, "q": F.q, "m": m, "zeta": str(z) if z is not None else None}
    values = []
    for method in methods:
        t0 = time.perf_counter()
        if method == "closed":
            value = counting.count(args.set, args.n, m, F.q)
        elif method == "series":
            if args.set == "S":
                value = int(qfunc.series_for("U", m, max(args.n, qfunc.DEFAULT_ORDER))[args.n].num(F.q))
            else:
                value = qfunc.count_eval(args.set, m, args.n, F.q)
        else:
            if args.set == "S":
                value = len(oracle.invariant_factor_chains(F, args.n, m))
            else:
                job = oracle.OracleJob(F, args.n, z, args.set, workers=args.threads)
                value = oracle.oracle_count(job)
        values.append(value)
        rec = dict(base, method=method, value=value)
        if args.timings:
            rec["wall_time"] = round(time.perf_counter() - t0, 6)
        emit(rec)
    if args.method == "all":
        consistent = len(set(values)) == 1
        emit(dict(base, method="all", value=values[0], consistent=consistent))
        return EXIT_OK if consistent else EXIT_FAIL
    return EXIT_OK


def cmd_poly(args, emit) -> int:
    z, m = _zeta_and_m(args, None)
    p = qfunc.count_poly(args.set, m, args.n)
    if args.format == "text":
        print(p)
        print(qfunc.VALIDITY_NOTE)
        return EXIT_OK
    emit({"set": args.set, "n": args.n, "m": m, "method": "series", "poly": str(p), "note": qfunc.VALIDITY_NOTE})
    return EXIT_OK


def _fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cmd_series(args, emit) -> int:
    if args.max_n < 0 or args.max_n > MAX_SERIES_N:
        raise UsageError(f"--max-n must be in [0, {MAX_SERIES_N}]")
    emit.fields = SERIES_FIELDS
    z, m = _zeta_and_m(args, None)
    S = qfunc.series_for(args.set, m, args.max_n)
    for d in range(args.max_n + 1):
        rec = {"set": args.set, "m": m, "degree": d, "coefficient": str(S[d])}
        if args.eval_q is not None:
            rec["q"] = args.eval_q
            rec["value"] = _fraction_str(S[d](args.eval_q))
        emit(rec)
    return EXIT_OK


def cmd_verify(args, emit) -> int:
    emit.fields = VERIFY_FIELDS
    results = verify.run(args.level, seed=args.seed, threads=args.threads)
    for r in results:
        emit(r.record(timings=args.timings))
    ok = all(r.passed for r in results)
    emit({"check": "summary", "passed": ok, "checked": sum(r.checked for r in results), "failures": []})
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcommute", description="Count pairs (A, B) with AB = zeta*BA over F_q.")
    parser.add_argument("--format", choices=("jsonl", "csv", "text"), default="jsonl")
    parser.add_argument("--timings", action="store_true", help="include wall times in records")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def zeta_opts(p, need_set=True, sets=("K", "U", "N")):
        if need_set:
            p.add_argument("--set", choices=sets, required=True)
        p.add_argument("--m", type=int, help="multiplicative order of zeta")
        p.add_argument("--zeta", help='field element literal such as "2" or "1+t"')

    c = sub.add_parser("count", help="count pairs at a concrete q")
    zeta_opts(c, sets=("K", "U", "N", "S"))
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--q", type=int)
    c.add_argument("--p", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--method", choices=("closed", "series", "oracle", "all"), default="closed")
    c.add_argument("--threads", type=int, default=1)
    c.set_defaults(func=cmd_count)

    p = sub.add_parser("poly", help="count as a polynomial in q")
    zeta_opts(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_poly, q=None, p=None, k=None)

    s = sub.add_parser("series", help="coefficients of the generating series")
    zeta_opts(s)
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--eval-q", type=int)
    s.set_defaults(func=cmd_series, q=None, p=None, k=None)

    v = sub.add_parser("verify", help="run the cross-check suite")
    v.add_argument("--level", choices=("fast", "full"), default="fast")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--threads", type=int, default=1)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    if getattr(args, "n", 0) is not None and getattr(args, "n", 0) < 0:
        print("error: --n must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    emit = Emitter("csv" if args.format == "csv" else "jsonl")
    try:
        return args.func(args, emit)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except oracle.BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
