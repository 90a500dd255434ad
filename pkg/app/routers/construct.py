import argparse
import logging

from app.core.errors import UsageError
from app.core.exactfield import FieldSpec
from app.core.linalg import Subspace
from app.models.algebra import Algebra, BlockRole
from app.routers.common import (
    add_output_options,
    add_worker_options,
    construction_params,
    field_arg,
    load_params,
    outcome,
    report_doc,
    scalar_list,
    scalars,
    subspace,
)
from app.schemas.algebra import ParamsDoc
from app.schemas.report import CommandOutcome
from app.services.autgroup import expected_set
from app.services.constructions import (
    algebra_C,
    algebra_D,
    algebra_E,
    exterior_B,
    rigid_algebra,
    split_etale,
    wrap_simple,
    zero_algebra,
)
from app.services.graded import FLAVORS, build_A, graded_basis
from app.services.permgroups import parse_group
from app.services.pipeline import (
    ConstructionReport,
    check_automorphisms,
    check_blocks,
    check_left_identity,
    check_simplicity,
    claims_of,
)
from app.services.storage import read_algebra, write_algebra

logger = logging.getLogger(__name__)

KINDS = ("rigid", "B", "A", "C", "D", "E", "wrap", "etale", "zero")


def register(subparsers) -> None:
    p = subparsers.add_parser("construct", help="build a single construction")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--field", required=True, type=field_arg)
    p.add_argument("--s", type=int, default=2, help="dimension of the rigid algebra L")
    p.add_argument("--n", type=int, default=2, help="dimension of U (B, C, D), of V (A) or of E_n / zero")
    p.add_argument("--r", type=int, default=2, help="truncation degree (A, D)")
    p.add_argument("--flavor", choices=FLAVORS, default="tensor", help="A(V,S) flavor")
    p.add_argument("--group", default=None, help="permutation group for E")
    p.add_argument("--lambda", dest="lam", default=None, help="comma-separated lambda for E")
    p.add_argument("--inner", default=None, help="algebra JSON wrapped by --kind wrap (default rigid of size --s)")
    p.add_argument("--params", default=None, help="JSON parameter file")
    p.add_argument("--out", default=None, help="write the algebra JSON here")
    p.add_argument("--full", action="store_true", help="also test simplicity and enumerate automorphisms")
    p.add_argument("--seed", type=int, default=1)
    add_worker_options(p)
    add_output_options(p)
    p.set_defaults(handler=handle)


def _default_A_subspace(field: FieldSpec, v: int, r: int, flavor: str, first: int = 0) -> Subspace:
    """The line spanned by x_first^r in the degree-r piece."""
    basis = graded_basis(v, r, flavor)
    vec = [field.zero] * basis.size
    vec[basis.index[(first,) * r]] = field.one
    return Subspace.span(field, basis.size, [vec])


def build(args: argparse.Namespace, doc: ParamsDoc) -> Algebra:
    field = args.field
    params = construction_params(field, doc)
    kind = args.kind
    if kind == "rigid":
        return rigid_algebra(args.s, field, scalars(field, doc.beta))
    if kind == "B":
        return exterior_B(args.n, field)
    if kind == "A":
        size = graded_basis(args.n, args.r, args.flavor).size
        S = subspace(field, doc.S, size) or _default_A_subspace(field, args.n, args.r, args.flavor)
        return build_A(args.n, field, S, args.r, args.flavor)
    if kind == "C":
        return algebra_C(rigid_algebra(args.s, field, scalars(field, doc.beta)), args.n, params.gamma)
    if kind == "D":
        v = args.s + args.n
        size = graded_basis(v, args.r, "tensor").size
        S = subspace(field, doc.S, size) or _default_A_subspace(field, v, args.r, "tensor", first=args.s)
        L = rigid_algebra(args.s, field, scalars(field, doc.beta))
        return algebra_D(L, args.n, S, args.r, params.gamma, params.delta, params.Phi)
    if kind == "E":
        if args.group is None:
            raise UsageError("--kind E needs --group")
        lam = scalar_list(field, args.lam) if args.lam is not None else params.lam
        return algebra_E(parse_group(args.group), field, lam, params.mu)
    if kind == "wrap":
        if args.inner:
            inner, _ = read_algebra(args.inner)
            if inner.field != field:
                raise UsageError(f"inner algebra lives over {inner.field}, not {field}")
        else:
            inner = rigid_algebra(args.s, field, scalars(field, doc.beta))
        return wrap_simple(inner, params.alpha, params.zeta, params.Delta, params.variant)
    if kind == "etale":
        return split_etale(args.n, field)
    return zero_algebra(args.n, field)


def handle(args: argparse.Namespace) -> CommandOutcome:
    a = build(args, load_params(args.params))
    logger.info("Constructed %s of dimension %d over %s", a.construction, a.dim, a.field)
    report = ConstructionReport(a)
    if any(b.role == BlockRole.UNIT_LINE for b in a.top_blocks):
        check_left_identity(report)
        check_blocks(report)
    if args.full:
        check_simplicity(report, "norton", args.seed)
        expectation = expected_set(a) if a.field.is_finite else None
        if expectation is None:
            check_automorphisms(report, workers=args.workers, budget=args.budget, force=args.force)
        else:
            check_automorphisms(report, expectation.elements, expectation.compose, expectation.form,
                                args.workers, args.budget, args.force)
    data = {"basis": list(a.basis_names), "blocks": [b.name for b in a.blocks]}
    if args.out:
        write_algebra(args.out, a, claims_of(report))
        data["algebra_file"] = args.out
    return outcome(report_doc("construct", report, data))
