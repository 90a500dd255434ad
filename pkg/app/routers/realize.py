import argparse
import logging

from app.routers.common import (
    add_output_options,
    add_worker_options,
    construction_params,
    field_arg,
    load_params,
    outcome,
    report_doc,
    scalar_list,
)
from app.schemas.report import CommandOutcome
from app.services.permgroups import parse_group
from app.services.pipeline import claims_of, realize_finite_group
from app.services.simplicity import MODES
from app.services.storage import write_algebra

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    p = subparsers.add_parser("realize", help="build a simple algebra whose automorphism group is G")
    p.add_argument("--group", required=True, help='permutation group, e.g. "n=3; gens=(1 2),(1 2 3)"')
    p.add_argument("--field", required=True, type=field_arg, help="Q, p, p,k or p,k,c0,...,ck (monic modulus, low to high)")
    p.add_argument("--params", default=None, help="JSON parameter file overriding canonical choices")
    p.add_argument("--lambda", dest="lam", default=None, help="comma-separated lambda (overrides --params)")
    p.add_argument("--out", default=None, help="write the algebra JSON here")
    p.add_argument("--mode", choices=MODES, default="norton", help="simplicity test")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--no-automorphisms", action="store_true", help="skip the automorphism enumeration")
    add_worker_options(p)
    add_output_options(p)
    p.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> CommandOutcome:
    field = args.field
    group = parse_group(args.group)
    params = construction_params(field, load_params(args.params))
    if args.lam is not None:
        params.lam = scalar_list(field, args.lam)
    report = realize_finite_group(group, field, params, workers=args.workers,
                                  with_automorphisms=not args.no_automorphisms,
                                  simplicity_mode=args.mode, seed=args.seed,
                                  budget=args.budget, force=args.force)
    data = {"group_order": group.order, "degree": group.degree}
    if report.inner is not None and "lambda" in report.inner.params:
        data["lambda"] = report.inner.params["lambda"]
        data["lambda_route"] = report.inner.params["lambda_route"]
    if args.out:
        write_algebra(args.out, report.algebra, claims_of(report))
        data["algebra_file"] = args.out
    return outcome(report_doc("realize", report, data))
