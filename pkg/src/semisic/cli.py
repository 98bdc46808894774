"""Command-line interface.

Subcommands: construct, verify, dual, region, bloch, search, spectrum.
Exit codes: 0 success, 1 semantic negative (failed verification, inconsistent
probabilities, unmet search goal under --require-solution), 2 usage, parse,
or out-of-range errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

import numpy as np

from . import documents, dual, model, qubit, search
from .bloch import bloch_to_probs, probs_to_bloch
from .errors import (
    BOutOfFamilyRange,
    BOutOfRange,
    DimensionTooSmall,
    DocumentError,
    InconsistentProbabilities,
    InvalidConfig,
    KOutOfRange,
    MalformedPovm,
    NotQubitSemiSic,
    NotSemiSic,
    OutsideBlochBall,
)

_FRACTION = re.compile(r"^-?\d+/\d+$")


def parse_number(text: str) -> float:
    """Accept plain floats and exact fractions like 2/25."""
    text = text.strip()
    if _FRACTION.match(text):
        return float(Fraction(text))
    try:
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number or fraction: {text!r}") from exc


def _report_dict(report: model.VerificationReport) -> dict:
    return {
        "classification": report.classification,
        "fitted_b": report.fitted_b,
        "k": report.k,
        "max_violation": report.max_violation,
        "is_ic": report.is_ic,
        "all_rank_one": report.all_rank_one,
        "equiangular": report.equiangular,
        "trace_classes": [[t, c] for t, c in report.trace_classes],
    }


def _print_report(report: model.VerificationReport, as_json: bool) -> None:
    if as_json:
        print(json.dumps(_report_dict(report), indent=2))
        return
    print(f"classification: {report.classification}")
    print(f"fitted_b: {report.fitted_b:.12g}")
    print(f"k: {report.k}")
    print(f"max_violation: {report.max_violation:.6g}")
    print(f"is_ic: {'yes' if report.is_ic else 'no'}")
    print(f"all_rank_one: {'yes' if report.all_rank_one else 'no'}")
    print(f"equiangular: {'yes' if report.equiangular else 'no'}")
    classes = ", ".join(f"{t:.12g} x{c}" for t, c in report.trace_classes)
    print(f"trace_classes: {classes}")


def cmd_construct(args) -> int:
    point = qubit.family_point(args.b)
    povm = qubit.construct(args.b)
    meta = {"source": "construct", "r": point.r, "theta": point.theta}
    if args.out:
        documents.save_povm(args.out, povm, b=point.b, k=point.params.k, metadata=meta)
    else:
        documents.save_povm(sys.stdout, povm, b=point.b, k=point.params.k, metadata=meta)
    return 0


def cmd_verify(args) -> int:
    doc = documents.load_povm(args.infile)
    report = model.verify(doc.povm)
    _print_report(report, args.json)
    return 0 if report.classification != model.NOT_SEMI_SIC else 1


def cmd_dual(args) -> int:
    doc = documents.load_povm(args.infile)
    report = model.verify(doc.povm)
    if report.classification == model.NOT_SEMI_SIC:
        print(f"input is not a semi-SIC (max violation {report.max_violation:.3e})",
              file=sys.stderr)
        return 1
    params = model.SemiSicParams.from_b(doc.povm.dim, report.fitted_b, report.k)
    frame = dual.dual_basis(doc.povm, params)
    meta = {"fitted_b": report.fitted_b}
    if args.out:
        documents.save_dual_frame(args.out, frame, metadata=meta)
    else:
        documents.save_dual_frame(sys.stdout, frame, metadata=meta)
    return 0


def cmd_region(args) -> int:
    doc = documents.load_povm(args.infile)
    report = model.verify(doc.povm)
    if report.classification == model.NOT_SEMI_SIC:
        print(f"input is not a semi-SIC (max violation {report.max_violation:.3e})",
              file=sys.stderr)
        return 1
    params = model.SemiSicParams.from_b(doc.povm.dim, report.fitted_b, report.k)
    frame = dual.dual_basis(doc.povm, params)
    samples = dual.region_grid(frame, args.resolution)
    if args.out:
        dual.write_region_csv(samples, args.out)
    else:
        dual.write_region_csv(samples, sys.stdout)
    feasible = sum(1 for s in samples if s.feasible)
    print(f"{feasible} of {len(samples)} grid points feasible", file=sys.stderr)
    return 0


def cmd_bloch(args) -> int:
    point = qubit.family_point(args.b)
    if args.to_probs is not None:
        values = bloch_to_probs(np.array(args.to_probs), point)
    else:
        values = probs_to_bloch(np.array(args.to_bloch), point)
    print(" ".join(f"{v:.12g}" for v in values))
    return 0


def cmd_search(args) -> int:
    config = search.SearchConfig(
        d=args.d,
        k=args.k,
        b=args.b,
        restarts=args.restarts,
        max_iterations=args.max_iterations,
        seed=args.seed,
        initial_step=args.initial_step,
        step_policy=args.step_policy,
        penalty_weight=args.penalty_weight,
        residual_goal=args.residual_goal,
    )
    report = search.run_search(config)
    if args.out:
        report.save(args.out)
    print(f"best residual: {report.best_residual:.6e} "
          f"({report.restarts_run} restarts, gradient check {report.gradient_check:.2e})")
    if report.best_povm is not None:
        print(f"solution found: classification {report.classification}, "
              f"k = {report.observed_k}")
    else:
        print("no candidate reached the residual goal")
        if args.require_solution:
            return 1
    return 0


def cmd_spectrum(args) -> int:
    ks = model.admissible_k(args.d)
    print(f"{'k':>4}  {'b':>12}  {'a-':>10}  {'a+':>10}  "
          f"{'b (float)':>22}  {'a- (float)':>22}  {'a+ (float)':>22}")
    for k in ks:
        b = model.b_from_k_exact(args.d, k)
        lo, hi = model.trace_values_exact(args.d, k)
        print(f"{k:>4}  {str(b):>12}  {str(lo):>10}  {str(hi):>10}  "
              f"{float(b):>22.17g}  {float(lo):>22.17g}  {float(hi):>22.17g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semisic",
        description="Equiangular rank-one POVMs: construction, verification, "
                    "dual frames, feasibility regions, and numerical search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build the qubit family member with overlap b")
    p.add_argument("--b", type=parse_number, required=True,
                   help="pairwise overlap, in (1/16, 1/12]; fractions like 2/25 accepted")
    p.add_argument("--out", help="output POVM JSON path (default: stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="classify a POVM document")
    p.add_argument("--in", dest="infile", required=True, help="POVM JSON path")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dual", help="compute the dual frame of a POVM document")
    p.add_argument("--in", dest="infile", required=True, help="POVM JSON path")
    p.add_argument("--out", help="output dual-frame JSON path (default: stdout)")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("region", help="scan the qubit feasibility region to CSV")
    p.add_argument("--in", dest="infile", required=True, help="POVM JSON path")
    p.add_argument("--resolution", type=int, required=True, help="simplex grid resolution")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("bloch", help="map between Bloch vectors and outcome probabilities")
    p.add_argument("--b", type=parse_number, required=True, help="family overlap")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--to-probs", nargs=3, type=float, metavar=("RX", "RY", "RZ"),
                       help="Bloch vector to probabilities")
    group.add_argument("--to-bloch", nargs=4, type=float, metavar=("Q1", "Q2", "Q3", "Q4"),
                       help="probabilities to Bloch vector")
    p.set_defaults(func=cmd_bloch)

    p = sub.add_parser("search", help="multi-start numerical search")
    p.add_argument("--d", type=int, required=True, help="Hilbert space dimension")
    p.add_argument("--k", type=int, required=True, help="small-trace element count")
    p.add_argument("--b", type=parse_number, default=None,
                   help="target overlap (required for d=2 unless k=4)")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--max-iterations", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--initial-step", type=float, default=1e-2)
    p.add_argument("--step-policy", choices=list(search.STEP_POLICIES), default="exact")
    p.add_argument("--penalty-weight", type=float, default=10.0)
    p.add_argument("--residual-goal", type=float, default=1e-12)
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--require-solution", action="store_true",
                   help="exit 1 unless the residual goal is met")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("spectrum", help="admissible (k, b, a-, a+) table for a dimension")
    p.add_argument("--d", type=int, required=True, help="Hilbert space dimension (>= 3)")
    p.set_defaults(func=cmd_spectrum)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    # semantic negatives first: several of these subclass ValueError
    except (NotSemiSic, NotQubitSemiSic, InconsistentProbabilities) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DocumentError, MalformedPovm, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BOutOfFamilyRange, BOutOfRange, KOutOfRange, DimensionTooSmall,
            InvalidConfig, OutsideBlochBall, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
