import argparse

from app.core.exactfield import format_field, format_raw
from app.routers.common import add_algebra_option, add_output_options, outcome
from app.schemas.report import CommandOutcome, ReportDoc
from app.services.algebra_ops import TRACE_KINDS, export_tensor, trace_form
from app.services.storage import read_algebra


def register(subparsers) -> None:
    p = subparsers.add_parser("trace-forms", help="Gram matrices of the four trace forms")
    add_algebra_option(p)
    add_output_options(p)
    p.set_defaults(handler=handle_trace_forms)

    p = subparsers.add_parser("export-tensor", help="structure tensor entries (i, j, k, c) with b_i b_j = sum c b_k")
    add_algebra_option(p)
    add_output_options(p)
    p.set_defaults(handler=handle_export_tensor)


def _doc(command: str, a, data: dict) -> ReportDoc:
    return ReportDoc(command=command, ok=True, exit_code=0, construction=a.construction,
                     field=format_field(a.field), dim=a.dim, data=data)


def handle_trace_forms(args: argparse.Namespace) -> CommandOutcome:
    a, _ = read_algebra(args.algebra)
    forms = {}
    for kind in TRACE_KINDS:
        form = trace_form(a, kind)
        forms[kind] = {"gram": form.gram.to_text(), "nondegenerate": form.nondegenerate}
    return outcome(_doc("trace-forms", a, {"forms": forms}))


def handle_export_tensor(args: argparse.Namespace) -> CommandOutcome:
    a, _ = read_algebra(args.algebra)
    entries = [[i, j, k, format_raw(a.field, c)] for i, j, k, c in export_tensor(a)]
    return outcome(_doc("export-tensor", a, {"entries": entries, "count": len(entries)}))
