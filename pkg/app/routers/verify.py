import argparse

from app.routers.common import add_algebra_option, add_output_options, add_worker_options, outcome, report_doc
from app.schemas.report import CommandOutcome
from app.services.pipeline import replay_claims
from app.services.storage import read_algebra


def register(subparsers) -> None:
    p = subparsers.add_parser("verify", help="re-run every check recorded in an algebra's metadata")
    add_algebra_option(p)
    add_worker_options(p)
    add_output_options(p)
    p.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> CommandOutcome:
    a, claims = read_algebra(args.algebra)
    report = replay_claims(a, claims, workers=args.workers, budget=args.budget, force=args.force)
    return outcome(report_doc("verify", report, {"claims": sorted(claims)}))
