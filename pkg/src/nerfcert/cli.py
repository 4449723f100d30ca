"""Command-line front end.

Subcommands: gen-frame, build-net, estimate, oracle, report.  Exit codes:
0 success, 2 usage or I/O failure, 3 infeasible budget, 4 internal
invariant violation.  Progress goes to stderr only; piped CSV stays
clean.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .bounds import (
    certify,
    condition_number_bound,
    min_spanning_K,
    read_bounds_csv,
    resolve_threads,
    sweep_all_K,
    write_bounds_csv,
)
from .epsnet import (
    NetConfig,
    pruned_cardinality,
    volumetric_bound_log,
)
from .errors import NerfCertError, OracleInfeasibleError
from .frames import (
    GeneratorSpec,
    orbit_signed_permutations,
    read_frame,
    verify_untf,
    write_frame,
)
from .oracle import DEFAULT_BUDGET, exact_bounds_all_K, write_oracle_csv

EXIT_OK = 0
EXIT_USAGE_IO = 2
EXIT_INFEASIBLE = 3
EXIT_INVARIANT = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nerf-cert",
        description="Certify erasure-robustness bounds of signed-permutation "
        "orbit frames.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-frame", help="generate an orbit frame file")
    p.add_argument("-M", type=int, required=True, help="ambient dimension")
    p.add_argument("-k", type=int, required=True, help="generator support size")
    p.add_argument("-o", "--output", required=True, help="frame file path")

    p = sub.add_parser("build-net", help="net summary report (JSON)")
    p.add_argument("-M", type=int, required=True)
    p.add_argument("--eps-sq", type=float, required=True)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("-o", "--output", required=True, help="JSON report path")

    p = sub.add_parser("estimate", help="net sweep + certified bounds CSV")
    p.add_argument("-f", "--frame", help="frame file path")
    p.add_argument("-M", type=int, help="dimension (with -k, instead of -f)")
    p.add_argument("-k", type=int, help="generator support size")
    p.add_argument("--eps-sq", type=float, required=True)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument(
        "--cap-mode",
        choices=("combined", "untf", "general"),
        default="combined",
        help="upper-bound cap used in certification",
    )
    p.add_argument("--threads", type=int, default=0, help="0 = auto")
    p.add_argument("--seed", type=int, default=0, help="echoed into reports")
    p.add_argument("-o", "--output", required=True, help="bounds CSV path")
    p.add_argument("--report", help="JSON run report path")

    p = sub.add_parser("oracle", help="exhaustive exact bounds CSV")
    p.add_argument("-f", "--frame", required=True)
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--check", help="estimate CSV to verify the sandwich against")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("report", help="merge estimate/oracle CSVs per K")
    p.add_argument("--estimate", required=True, help="bounds CSV")
    p.add_argument("--oracle", help="oracle CSV (optional)")
    p.add_argument("-o", "--output", help="merged CSV (default stdout)")
    return parser


def _load_frame(args):
    if args.frame:
        return read_frame(args.frame)
    if args.M is None or args.k is None:
        raise NerfCertError("give either -f or both -M and -k")
    return orbit_signed_permutations(GeneratorSpec(args.M, args.k))


def _cmd_gen_frame(args) -> int:
    frame = orbit_signed_permutations(GeneratorSpec(args.M, args.k))
    write_frame(frame, args.output)
    report = verify_untf(frame)
    print(f"N={frame.N} tightness_defect={report.frobenius_defect:.3e}")
    return EXIT_OK


def _cmd_build_net(args) -> int:
    config = NetConfig.create(args.M, args.eps_sq, pruned=not args.no_prune)
    payload = {
        "M": config.M,
        "epsilon_sq": config.epsilon_sq,
        "L": config.L,
        "delta": f"{config.delta:.17g}",
        "cardinality_full": str(config.cardinality),
        "cardinality_pruned": None
        if args.no_prune
        else pruned_cardinality(config),
        "volumetric_bound_log10": volumetric_bound_log(
            config.M, config.epsilon
        )
        / math.log(10.0),
    }
    with open(args.output, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(f"L={config.L} full={config.cardinality} "
          f"pruned={payload['cardinality_pruned']}")
    return EXIT_OK


def _cmd_estimate(args) -> int:
    t0 = time.perf_counter()
    frame = _load_frame(args)
    config = NetConfig.create(frame.M, args.eps_sq, pruned=not args.no_prune)
    t1 = time.perf_counter()
    table = sweep_all_K(
        frame, config, threads=args.threads, progress=True
    )
    t2 = time.perf_counter()
    certify(table, cap_mode=args.cap_mode)
    t3 = time.perf_counter()
    write_bounds_csv(table, args.output)
    k_span = min_spanning_K(table)
    cond = condition_number_bound(table, k_span) if k_span else None
    print(f"min_spanning_K={k_span}")
    if cond is not None:
        print(f"condition_number_bound[{k_span}]={cond:.4f}")
    if args.report:
        payload = {
            "tool_version": __version__,
            "status": "ok",
            "config": {
                "M": frame.M,
                "N": frame.N,
                "epsilon_sq": args.eps_sq,
                "L": config.L,
                "delta": f"{config.delta:.17g}",
                "pruned": not args.no_prune,
                "cap_mode": args.cap_mode,
                "threads": resolve_threads(args.threads),
                "rng_seed": args.seed,
                "frame_file": args.frame,
            },
            "counts": {
                "net_cardinality_full": str(config.cardinality),
                "net_points_used": table.net_points_used,
                "points_skipped": None
                if args.no_prune
                else config.cardinality - table.net_points_used,
            },
            "timings_s": {
                "setup": t1 - t0,
                "sweep": t2 - t1,
                "certify": t3 - t2,
            },
            "results": {
                "min_spanning_K": k_span,
                "condition_number_bound_at_min_spanning_K": cond,
                "alpha_eps_at_N": table.alpha_eps[-1],
                "beta_eps_at_N": table.beta_eps[-1],
            },
        }
        with open(args.report, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    frame = read_frame(args.frame)
    results = exact_bounds_all_K(
        frame, k_min=args.k_min, k_max=args.k_max, budget=args.budget
    )
    write_oracle_csv(results, args.output)
    if args.check:
        table = read_bounds_csv(args.check)
        if not table.certified:
            print("estimate CSV carries no certified bounds", file=sys.stderr)
            return EXIT_USAGE_IO
        tol = 1e-9
        for res in results:
            i = res.K - 1
            ok = (
                table.alpha_lower[i] <= res.alpha + tol
                and res.alpha <= table.alpha_eps[i] + tol
                and table.beta_eps[i] <= res.beta + tol
                and res.beta <= table.beta_upper[i] + tol
            )
            if not ok:
                print(
                    f"sandwich violated at K={res.K}: "
                    f"alpha in [{table.alpha_lower[i]}, {table.alpha_eps[i]}] "
                    f"vs {res.alpha}; beta in [{table.beta_eps[i]}, "
                    f"{table.beta_upper[i]}] vs {res.beta}",
                    file=sys.stderr,
                )
                return EXIT_INVARIANT
        print("sandwich verified")
    return EXIT_OK


def _cmd_report(args) -> int:
    est = read_bounds_csv(args.estimate)
    oracle_rows = {}
    if args.oracle:
        with open(args.oracle) as fh:
            fh.readline()
            for line in fh:
                parts = line.split(",")
                if len(parts) >= 3:
                    oracle_rows[int(parts[0])] = (
                        float(parts[1]),
                        float(parts[2]),
                    )
    lines = [
        "K,alpha_lower,alpha_eps,alpha_exact,beta_exact,beta_eps,beta_upper"
    ]
    for i in range(est.N):
        k = i + 1
        exact = oracle_rows.get(k, (math.nan, math.nan))
        alo = est.alpha_lower[i] if est.certified else math.nan
        bup = est.beta_upper[i] if est.certified else math.nan
        lines.append(
            f"{k},{alo:.17g},{est.alpha_eps[i]:.17g},"
            f"{exact[0]:.17g},{exact[1]:.17g},"
            f"{est.beta_eps[i]:.17g},{bup:.17g}"
        )
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


_COMMANDS = {
    "gen-frame": _cmd_gen_frame,
    "build-net": _cmd_build_net,
    "estimate": _cmd_estimate,
    "oracle": _cmd_oracle,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except OracleInfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (NerfCertError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE_IO


if __name__ == "__main__":
    sys.exit(main())
