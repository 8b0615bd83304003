"""qmock command line: ``verify``, ``eval`` and ``list-identities``.

Exit codes: 0 success, 1 an Established identity failed (or ``eval`` hit a
singular point), 2 configuration or usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys

from .errors import NonConvergence, PreconditionError, QMockError, SingularError, UsageError
from .harness import build_config, read_config_file, run_suite
from .mocktheta import Family, FunctionId, ParameterPoint, Psi3Denominator, Variant, evaluate
from .qcore import TruncationPolicy, format_hp, precision
from .records import catalog_lines

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def _policy_flags(p: argparse.ArgumentParser):
    p.add_argument("--precision", type=int, help="working precision in decimal digits (default 50)")
    p.add_argument("--max-terms", type=int, help="term cap for every sum and product (default 500)")
    p.add_argument("--tail-tol", type=float, help="relative tail tolerance (default 1e-40)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check identities at sampled or listed points")
    v.add_argument("--config", help="flat key = value configuration file")
    v.add_argument("--identity", action="append", help="identity id to check (repeatable; default all)")
    _policy_flags(v)
    v.add_argument("--consecutive-small", type=int, help="small terms required before stopping (default 2)")
    v.add_argument("--assert-tol", type=float, help="relative residual bound for Established identities")
    v.add_argument("--seed", type=int, help="sampler seed")
    v.add_argument("--count", type=int, help="number of random points (default 20)")
    v.add_argument("--grid", type=int, help="use an N x N (q, z) grid instead of random points")
    v.add_argument("--alpha", action="append", help="alpha value for sampling (repeatable)")
    v.add_argument("--points", help="point file, one 'q=.. z=.. ...' line per point")
    v.add_argument("--out", help="write the JSON-lines report here instead of standard output")
    v.add_argument("--jobs", type=int, help="worker processes (default 1)")

    e = sub.add_parser("eval", help="evaluate one mock theta function")
    e.add_argument("--function", required=True, help="psi0, psi1, psi2, psi3, phi0 or phi1")
    e.add_argument("--variant", default="classical", help="classical, generalized or complete")
    for name in ("q", "z", "t", "alpha"):
        e.add_argument(f"--{name}")
    e.add_argument("--psi3-denominator", default="printed", choices=[d.value for d in Psi3Denominator])
    _policy_flags(e)

    sub.add_parser("list-identities", help="print the identity catalog")
    return parser


_VERIFY_KEYS = {"precision": "precision", "max_terms": "max_terms", "tail_tol": "tail_tol",
                "consecutive_small": "consecutive_small", "assert_tol": "assert_tol", "seed": "seed",
                "count": "count", "grid": "grid", "points": "points", "out": "out", "jobs": "jobs"}


def _verify(args) -> int:
    values = read_config_file(args.config) if args.config else {}
    for attr, key in _VERIFY_KEYS.items():
        val = getattr(args, attr)
        if val is not None:
            values[key] = val
    if args.identity:
        values.pop("identity", None)
        values["identities"] = list(args.identity)
    if args.alpha:
        values.pop("alphas", None)
        values["alpha"] = list(args.alpha)
    config = build_config(values)
    report = run_suite(config)
    if config.output_path:
        report.write(config.output_path)
        s = report.summary
        print(f"records={s['records']} rejections={s['rejections']} "
              f"established_failures={s['established_failures']} report={config.output_path}")
    else:
        sys.stdout.write("\n".join(report.to_lines()) + "\n")
    return EXIT_FAIL if report.exit_code else EXIT_OK


def _eval(args) -> int:
    if args.q is None:
        raise UsageError("eval needs --q")
    fid = FunctionId(Family.parse(args.function), Variant.parse(args.variant))
    policy = TruncationPolicy(max_terms=args.max_terms or 500, tail_tol=args.tail_tol or 1e-40)
    with precision(args.precision or 50):
        kv = {k: getattr(args, k) for k in ("q", "z", "t", "alpha") if getattr(args, k) is not None}
        try:
            point = ParameterPoint(**kv)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        try:
            res = evaluate(fid, point, policy, Psi3Denominator(args.psi3_denominator))
        except (ZeroDivisionError, SingularError, NonConvergence) as exc:
            print(f"function={fid.family.value} variant={fid.variant.value} status=Singular reason={exc}")
            return EXIT_FAIL
        print(f"function={fid.family.value} variant={fid.variant.value} value={format_hp(res.value)} "
              f"terms_used={res.terms_used} tail_estimate={format_hp(res.tail_estimate, 5)} "
              f"status={res.status.value}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "list-identities":
            print("\n".join(catalog_lines()))
            return EXIT_OK
        if args.command == "verify":
            return _verify(args)
        return _eval(args)
    except (UsageError, PreconditionError) as exc:
        print(f"qmock: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qmock: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except QMockError as exc:
        print(f"qmock: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
