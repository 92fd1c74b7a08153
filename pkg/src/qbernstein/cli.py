"""Command-line entry point: ``qbernstein <command> ...``.

Exit codes: 0 all verified, 2 something refuted, 3 something inconclusive,
1 usage or runtime error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .cumulants import DistributionSpec, cumulants_from_moments, is_semicircular, moments_from_cumulants
from .errors import QBernsteinError
from .ncpart import enumerate_nc, mobius_to_top, zero
from .scenarios import (
    clt_demo,
    scenario_d2_remark,
    scenario_even,
    scenario_hplus_preservation,
    scenario_o_minus_one,
    scenario_odd,
    scenario_relation_equivalence,
    scenario_semicircle_conclusion,
)


def _fractions(text: str) -> list[Fraction]:
    try:
        return [Fraction(x) for x in text.replace(",", " ").split()]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational list {text!r}: {exc}")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--d", type=int, default=2, help="matrix size (default 2)")
    p.add_argument("--n", type=int, help="cumulant order")
    p.add_argument("--n-max", type=int, default=6, help="largest order (default 6)")
    p.add_argument("--b-degree", type=int, default=2, help="total degree of interleaved b's (default 2)")
    p.add_argument("--degree-bound", type=int, default=4, help="membership search bound D (default 4)")
    p.add_argument("--out", help="append the JSON report to this file")
    p.add_argument("--transcript-dir", help="store session transcripts here, by hash")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quiet", action="store_true", help="do not print the report")
    p.add_argument("--non-identical", action="store_true", help="drop identical distribution (even/odd)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbernstein", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    nc = sub.add_parser("nc", help="noncrossing partitions")
    nc.add_argument("action", choices=("enumerate", "mobius"))
    nc.add_argument("--n", type=int, required=True)
    nc.add_argument("--limit", type=int, default=50, help="partitions to list (enumerate)")

    cu = sub.add_parser("cumulants", help="moment/cumulant conversion")
    cu.add_argument("action", choices=("convert", "check-semicircle"))
    src = cu.add_mutually_exclusive_group(required=True)
    src.add_argument("--moments", type=_fractions, help="m_1 .. m_N, comma or space separated")
    src.add_argument("--cumulants", type=_fractions, help="kappa_1 .. kappa_N")

    ver = sub.add_parser("verify", help="run a verification scenario")
    ver.add_argument("scenario", choices=("even", "odd", "d2", "hplus", "ominus", "equiv", "semicircle"))
    _common(ver)

    clt = sub.add_parser("clt", help="central limit demo")
    clt.add_argument("--order", type=int, default=6)
    clt.add_argument("--counts", type=int, nargs="+", default=[4, 100, 10_000])
    clt.add_argument("--cumulants", type=_fractions, help="centered input spec (default 0,1,1,...)")
    clt.add_argument("--out")
    clt.add_argument("--quiet", action="store_true")
    return parser


def _need_n(args):
    if args.n is None:
        raise QBernsteinError(f"verify {args.scenario} needs --n")
    return args.n


def run_scenario(args):
    name = args.scenario
    if args.non_identical and name in ("even", "odd"):
        if args.d == 2:
            raise QBernsteinError("for d = 2 without identical distribution use: verify d2 --n N")
        raise QBernsteinError("non-identically distributed families with d >= 3 are not supported")
    if name == "even":
        return scenario_even(args.d, _need_n(args))
    if name == "odd":
        return scenario_odd(args.d, _need_n(args))
    if name == "d2":
        return scenario_d2_remark(_need_n(args))
    if name == "hplus":
        return scenario_hplus_preservation(args.d, args.n_max, args.b_degree, threads=args.threads)
    if name == "ominus":
        return scenario_o_minus_one(args.d, args.degree_bound)
    if name == "equiv":
        return scenario_relation_equivalence(args.d)
    return scenario_semicircle_conclusion(args.d, args.n_max)


def _emit(report, args) -> int:
    report.write(getattr(args, "out", None), getattr(args, "transcript_dir", None))
    if not args.quiet:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True, default=str))
    return report.exit_code()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "nc":
            parts = enumerate_nc(args.n)
            if args.action == "enumerate":
                print(f"|NC({args.n})| = {len(parts)}")
                for p in parts[: args.limit]:
                    print(p)
            else:
                counts: dict[int, int] = {}
                for p in parts:
                    mu = mobius_to_top(p)
                    counts[mu] = counts.get(mu, 0) + 1
                out = {"n": args.n, "mobius(0_n, 1_n)": mobius_to_top(zero(args.n)), "value_counts": {str(k): v for k, v in sorted(counts.items())}}
                print(json.dumps(out))
            return 0
        if args.command == "cumulants":
            if args.moments is not None:
                spec = cumulants_from_moments(args.moments)
                moments = tuple(args.moments)
            else:
                spec = DistributionSpec(args.cumulants)
                moments = moments_from_cumulants(spec, spec.order)
            if args.action == "convert":
                print(json.dumps({"moments": [str(m) for m in moments], "cumulants": [str(k) for k in spec.kappa]}))
                return 0
            semi, (mean, var) = is_semicircular(spec)
            print(json.dumps({"semicircular": semi, "mean": str(mean), "variance": str(var)}))
            return 0 if semi else 2
        if args.command == "clt":
            spec = DistributionSpec(args.cumulants) if args.cumulants else None
            return _emit(clt_demo(args.order, args.counts, spec), args)
        return _emit(run_scenario(args), args)
    except QBernsteinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
