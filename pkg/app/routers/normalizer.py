import argparse

from app.core.exactfield import format_field, format_raw
from app.routers.common import add_output_options, field_arg, outcome, scalar_list
from app.schemas.report import CheckDoc, CommandOutcome, ReportDoc
from app.services.constructions import invariant_f, lambda_for_group, validate_lambda
from app.services.graded import graded_basis
from app.services.permgroups import format_group, line_normalizer, parse_group, vector_stabilizer


def register(subparsers) -> None:
    p = subparsers.add_parser("normalizer", help="line normalizer and stabilizer of the invariant polynomial f")
    p.add_argument("--group", required=True)
    p.add_argument("--field", required=True, type=field_arg)
    p.add_argument("--lambda", dest="lam", default=None, help="comma-separated lambda (default: canonical choice)")
    add_output_options(p)
    p.set_defaults(handler=handle)


def _polynomial_text(field, f, n: int, degree: int) -> str:
    terms = []
    for m, c in zip(graded_basis(n, degree, "symmetric").monomials, f):
        if c == field.zero:
            continue
        powers = "*".join(f"e{i + 1}^{m.count(i)}" if m.count(i) > 1 else f"e{i + 1}" for i in sorted(set(m)))
        terms.append(powers if c == field.one else f"{format_raw(field, c)}*{powers}")
    return " + ".join(terms) or "0"


def handle(args: argparse.Namespace) -> CommandOutcome:
    field = args.field
    group = parse_group(args.group)
    if args.lam is None:
        lam, route = lambda_for_group(group, field)
    else:
        lam = scalar_list(field, args.lam)
        route = validate_lambda(group, lam, field)
    f = invariant_f(group, lam, field)
    normalizer = line_normalizer(group.degree, field, f, group.order)
    stabilizer = vector_stabilizer(group.degree, field, f, group.order)
    checks = []
    for claim, found in (("line_normalizer", normalizer), ("vector_stabilizer", stabilizer)):
        if found == group:
            checks.append(CheckDoc(claim=claim, status="pass", details={"order": found.order}))
        else:
            checks.append(CheckDoc(claim=claim, status="fail", details={"order": found.order},
                                   witness={"error": "mismatch", "message": f"{claim} differs from G",
                                            "witness": {"elements": format_group(found)}}))
    ok = all(c.status == "pass" for c in checks)
    doc = ReportDoc(
        command="normalizer",
        ok=ok,
        exit_code=0 if ok else 1,
        field=format_field(field),
        checks=checks,
        data={
            "group": str(group),
            "group_order": group.order,
            "lambda": [format_raw(field, x) for x in lam],
            "lambda_route": route,
            "f": _polynomial_text(field, f, group.degree, group.order),
            "normalizer": format_group(normalizer),
        },
    )
    return outcome(doc)
