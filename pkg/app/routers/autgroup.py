import argparse
import logging

from app.core.errors import HypothesesNotVerified, PropertyViolation
from app.routers.common import add_algebra_option, add_output_options, add_worker_options, outcome, report_doc
from app.schemas.report import CommandOutcome
from app.services.autgroup import (
    AutomorphismSet,
    brute_force_automorphisms,
    enumerate_automorphisms,
    expected_set,
    match_expected,
    sample_automorphisms,
    u_preserving_automorphisms,
)
from app.services.pipeline import Check, ConstructionReport
from app.services.storage import read_algebra

logger = logging.getLogger(__name__)

METHODS = ("constrained", "brute", "sampled")


def register(subparsers) -> None:
    p = subparsers.add_parser("autgroup", help="enumerate the automorphism group and match the prediction")
    add_algebra_option(p)
    p.add_argument("--method", choices=METHODS, default="constrained")
    p.add_argument("--expect", choices=("auto", "none"), default="auto",
                   help="match against the predicted set of a known construction")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")
    p.add_argument("--rounds", type=int, default=None, help="sampling rounds")
    p.add_argument("--list", action="store_true", help="include every automorphism matrix in the report")
    add_worker_options(p)
    add_output_options(p)
    p.set_defaults(handler=handle)


def _find(a, args: argparse.Namespace, report: ConstructionReport, data: dict) -> AutomorphismSet:
    if args.method == "brute":
        return brute_force_automorphisms(a, args.workers, args.budget)
    if args.method == "sampled":
        return sample_automorphisms(a, args.rounds, args.seed)
    if a.construction == "B":
        scan = u_preserving_automorphisms(a, args.workers)
        data["rejected"] = len(scan.rejected)
        data["violating_pairs"] = sorted({f"({a.basis_names[pair[0]]}, {a.basis_names[pair[1]]})"
                                          for _, pair in scan.rejected if pair is not None})
        data["scope"] = "U-preserving"
        return scan.accepted
    try:
        return enumerate_automorphisms(a, budget=args.budget, workers=args.workers, force=args.force)
    except HypothesesNotVerified as exc:
        logger.warning("Block hypotheses fail, falling back to sampling: %s", exc.message)
        report.checks.append(Check("block_hypotheses", "inconclusive", exc.envelope()))
        return sample_automorphisms(a, args.rounds, args.seed)


def handle(args: argparse.Namespace) -> CommandOutcome:
    a, _ = read_algebra(args.algebra)
    report = ConstructionReport(a)
    data: dict = {"method": args.method}
    auts = _find(a, args, report, data)
    report.automorphisms = auts
    details = {"order": auts.order, "candidates": auts.candidates, "complete": auts.complete}
    if not auts.complete:
        report.checks.append(Check("automorphisms", "inconclusive", None, details))
    else:
        expectation = expected_set(a) if args.expect == "auto" and a.construction != "B" else None
        if expectation is None:
            report.checks.append(Check("automorphisms", "pass", None, details))
        else:
            try:
                match = match_expected(auts, expectation.elements, expectation.compose, expectation.form)
            except PropertyViolation as exc:
                report.checks.append(Check("automorphisms", "fail", exc.envelope(), details))
            else:
                report.matched_form = match.form
                report.checks.append(Check("automorphisms", "pass", None, {**details, "matched_form": match.form}))
    if args.list:
        data["elements"] = [g.to_text() for g in auts.elements]
    return outcome(report_doc("autgroup", report, data))
