"""Shared argument groups, parameter conversion and report rendering for the subcommands."""
from __future__ import annotations

import argparse
from typing import Any

from app.core.errors import DimensionMismatch
from app.core.exactfield import FieldSpec, format_field, parse_field, parse_raw
from app.core.linalg import Matrix, Subspace
from app.models.algebra import Algebra
from app.schemas.algebra import ParamsDoc
from app.schemas.report import CheckDoc, CommandOutcome, ReportDoc
from app.services.constructions import ConstructionParams
from app.services.pipeline import ConstructionReport
from app.services.storage import read_params


# ------------------------------------------------------------ arguments

def add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    parser.add_argument("--report", default=None, help="also write the JSON report to this file")


def add_worker_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workers", type=int, default=None,
                        help="worker processes (default AUTALG_WORKERS; 0 = physical cores)")
    parser.add_argument("--budget", type=int, default=None, help="candidate-tuple budget (default AUTALG_BUDGET)")
    parser.add_argument("--force", action="store_true", help="run even when the budget is exceeded")


def add_algebra_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--algebra", required=True, help="algebra JSON file")


def field_arg(text: str) -> FieldSpec:
    return parse_field(text)


# ----------------------------------------------------------- parameters

def scalars(field: FieldSpec, values: list[str] | None) -> list | None:
    if values is None:
        return None
    return [parse_raw(field, x) for x in values]


def scalar_list(field: FieldSpec, text: str | None) -> list | None:
    """Comma-separated scalars, e.g. ``1,2,5``."""
    if text is None:
        return None
    return [parse_raw(field, t) for t in text.split(",") if t.strip()]


def matrix(field: FieldSpec, rows: list[list[str]] | None, name: str) -> Matrix | None:
    if rows is None:
        return None
    if len({len(r) for r in rows}) > 1:
        raise DimensionMismatch(f"{name} is ragged")
    return Matrix(field, tuple(tuple(parse_raw(field, x) for x in r) for r in rows))


def subspace(field: FieldSpec, rows: list[list[str]] | None, ambient: int) -> Subspace | None:
    if rows is None:
        return None
    vectors = [[parse_raw(field, x) for x in r] for r in rows]
    for v in vectors:
        if len(v) != ambient:
            raise DimensionMismatch(f"S vectors need {ambient} coordinates, got {len(v)}")
    return Subspace.span(field, ambient, vectors)


def load_params(path: str | None) -> ParamsDoc:
    return read_params(path) if path else ParamsDoc()


def construction_params(field: FieldSpec, doc: ParamsDoc) -> ConstructionParams:
    return ConstructionParams(
        gamma=scalars(field, doc.gamma),
        delta=scalars(field, doc.delta),
        mu=scalars(field, doc.mu),
        lam=scalars(field, doc.lam),
        alpha=parse_raw(field, doc.alpha) if doc.alpha is not None else None,
        zeta=parse_raw(field, doc.zeta) if doc.zeta is not None else None,
        Delta=matrix(field, doc.Delta, "Delta"),
        Phi=matrix(field, doc.Phi, "Phi"),
        variant=doc.variant,
    )


# -------------------------------------------------------------- reports

def check_docs(report: ConstructionReport) -> list[CheckDoc]:
    return [CheckDoc(claim=c.claim, status=c.status, witness=c.witness, details=c.details) for c in report.checks]


def exit_code_of(report: ConstructionReport) -> int:
    if not report.ok:
        return 1
    return 3 if report.inconclusive else 0


def report_doc(command: str, report: ConstructionReport, data: dict[str, Any] | None = None) -> ReportDoc:
    a: Algebra = report.algebra
    auts = report.automorphisms
    return ReportDoc(
        command=command,
        ok=report.ok,
        exit_code=exit_code_of(report),
        construction=a.construction,
        field=format_field(a.field),
        dim=a.dim,
        aut_order=report.aut_order,
        complete=auts.complete if auts is not None else None,
        simple=report.simple,
        matched_form=report.matched_form,
        checks=check_docs(report),
        data=data or {},
    )


def render_text(doc: ReportDoc) -> str:
    lines = [f"{doc.command}: {'ok' if doc.ok else 'FAILED'} (exit {doc.exit_code})"]
    for key in ("construction", "field", "dim", "aut_order", "complete", "simple", "matched_form"):
        value = getattr(doc, key)
        if value is not None:
            lines.append(f"  {key}: {value}")
    for c in doc.checks:
        lines.append(f"  [{c.status}] {c.claim}")
        if c.witness is not None:
            lines.append(f"      witness: {c.witness}")
    for key in sorted(doc.data):
        lines.append(f"  {key}: {doc.data[key]}")
    return "\n".join(lines)


def outcome(doc: ReportDoc) -> CommandOutcome:
    payload = doc.model_dump()
    return CommandOutcome(exit_code=doc.exit_code, payload=payload, text=render_text(doc))
