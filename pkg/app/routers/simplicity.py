import argparse

from app.routers.common import add_algebra_option, add_output_options, field_arg, outcome, report_doc
from app.schemas.report import CommandOutcome
from app.services.algebra_ops import extend_scalars
from app.services.pipeline import ConstructionReport, check_simplicity
from app.services.simplicity import MODES
from app.services.storage import read_algebra


def register(subparsers) -> None:
    p = subparsers.add_parser("simplicity", help="test whether an algebra is simple")
    add_algebra_option(p)
    p.add_argument("--mode", choices=MODES, default="norton")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int, default=None)
    p.add_argument("--extend", type=field_arg, default=None,
                   help="test over an extension of the algebra's prime field instead")
    add_output_options(p)
    p.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> CommandOutcome:
    a, _ = read_algebra(args.algebra)
    if args.extend is not None:
        a = extend_scalars(a, args.extend)
    report = ConstructionReport(a)
    check_simplicity(report, args.mode, args.seed, args.rounds)
    return outcome(report_doc("simplicity", report, {"mode": args.mode}))
