# app/services/pipeline.py
"""Realization of a finite permutation group as the automorphism group of a simple algebra,
and the re-runnable checks recorded in construction reports."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from typing import Any

from app.core.errors import AutAlgError, FieldTooSmall, PropertyViolation
from app.core.exactfield import FieldSpec, format_field, parse_raw
from app.models.algebra import Algebra, BlockRole
from app.models.permutation import PermGroup
from app.services.algebra_ops import restrict_to_block, unique_left_identity
from app.services.autgroup import (
    AutomorphismSet,
    enumerate_automorphisms,
    expected_set,
    match_expected,
    verify_block_hypotheses,
)
from app.services.constructions import ConstructionParams, algebra_E, invariant_f, rigid_algebra, wrap_simple
from app.services.observability import trace_operation
from app.services.permgroups import format_group, group_from_params, line_normalizer
from app.services.simplicity import is_simple

logger = logging.getLogger(__name__)


@dataclass
class Check:
    claim: str
    status: str  # "pass" | "fail" | "inconclusive" | "skipped"
    witness: Any = None
    details: dict = dc_field(default_factory=dict)


@dataclass
class ConstructionReport:
    algebra: Algebra
    checks: list[Check] = dc_field(default_factory=list)
    inner: Algebra | None = None
    automorphisms: AutomorphismSet | None = None
    matched_form: str | None = None
    simple: bool | None = None

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def inconclusive(self) -> bool:
        return any(c.status == "inconclusive" for c in self.checks)

    @property
    def aut_order(self) -> int | None:
        return self.automorphisms.order if self.automorphisms else None

    def check(self, claim: str) -> Check | None:
        return next((c for c in self.checks if c.claim == claim), None)


def _run(report: ConstructionReport, claim: str, fn) -> Any:
    """Run one check; property violations become failed checks with their witness."""
    try:
        result = fn()
    except PropertyViolation as exc:
        report.checks.append(Check(claim, "fail", exc.envelope()))
        return None
    report.checks.append(Check(claim, "pass"))
    return result


def check_left_identity(report: ConstructionReport) -> None:
    a = report.algebra

    def run():
        e = unique_left_identity(a)
        unit = next((b for b in a.top_blocks if b.role == BlockRole.UNIT_LINE), None)
        if unit is not None and any(e[i] != (a.field.one if i == unit.lo else a.field.zero) for i in range(a.dim)):
            raise PropertyViolation("the left identity is not the designated unit",
                                    witness={"unit_block": unit.name})
        return e

    _run(report, "unique_left_identity", run)


def check_blocks(report: ConstructionReport) -> None:
    _run(report, "eigenblocks", lambda: verify_block_hypotheses(report.algebra))


def check_simplicity(report: ConstructionReport, mode: str = "norton", seed: int = 1,
                     rounds: int | None = None) -> None:
    verdict = is_simple(report.algebra, mode, seed, rounds)
    status = {"simple": "pass", "not_simple": "fail", "inconclusive": "inconclusive"}[verdict.status]
    witness = None
    if verdict.status == "not_simple":
        witness = {"error": "not_simple", "message": "proper nonzero ideal found",
                   "witness": {"ideal_basis": verdict.witness_rows()}}
    report.simple = True if verdict.status == "simple" else (False if verdict.status == "not_simple" else None)
    report.checks.append(Check("simple", status, witness, {"mode": mode, "seed": seed, **verdict.details}))


def check_automorphisms(report: ConstructionReport, expected=None, compose=None, form: str | None = None,
                        workers: int | None = None, budget: int | None = None, force: bool = False) -> None:
    a = report.algebra
    try:
        auts = enumerate_automorphisms(a, budget=budget, workers=workers, force=force)
    except PropertyViolation as exc:
        report.checks.append(Check("automorphisms", "fail", exc.envelope()))
        return
    except AutAlgError as exc:
        report.checks.append(Check("automorphisms", "skipped", exc.envelope()))
        return
    report.automorphisms = auts
    details = {"order": auts.order, "candidates": auts.candidates}
    if expected is None:
        report.checks.append(Check("automorphisms", "pass", None, details))
        return
    try:
        match = match_expected(auts, expected, compose, form)
    except PropertyViolation as exc:
        report.checks.append(Check("automorphisms", "fail", exc.envelope(), details))
        return
    report.matched_form = match.form
    report.checks.append(Check("automorphisms", "pass", None, {**details, "matched_form": match.form}))


def check_line_normalizer(report: ConstructionReport, G: PermGroup, e_alg: Algebra) -> None:
    """The invariant line of lambda must have normalizer exactly G in S_n."""
    f = invariant_f(G, _lambda_of(e_alg), e_alg.field)
    normalizer = line_normalizer(G.degree, e_alg.field, f, G.order)
    details = {"route": e_alg.params.get("lambda_route"), "order": normalizer.order}
    if normalizer == G:
        report.checks.append(Check("line_normalizer", "pass", None, details))
        return
    witness = {"error": "mismatch", "message": "line normalizer differs from G",
               "witness": {"normalizer": format_group(normalizer)}}
    report.checks.append(Check("line_normalizer", "fail", witness, details))


def realize_finite_group(G: PermGroup, field: FieldSpec, params: ConstructionParams | None = None,
                         workers: int | None = None, with_automorphisms: bool = True, simplicity_mode: str = "norton",
                         seed: int = 1, budget: int | None = None, force: bool = False) -> ConstructionReport:
    """A simple algebra whose automorphism group is G (checks recorded in the report)."""
    params = params or ConstructionParams()
    with trace_operation("realize_finite_group", field=format_field(field), degree=G.degree, order=G.order):
        if G.is_trivial():
            inner = rigid_algebra(2, field)
        else:
            inner = algebra_E(G, field, params.lam, params.mu)
        try:
            wrapped = wrap_simple(inner, params.alpha, params.zeta, params.Delta, params.variant)
        except FieldTooSmall as exc:
            raise FieldTooSmall(f"{exc.message} (binding constraint: wrap)", witness=exc.witness) from exc
        report = ConstructionReport(wrapped, inner=inner)
        check_left_identity(report)
        check_blocks(report)
        if not G.is_trivial():
            check_line_normalizer(report, G, inner)
        check_simplicity(report, simplicity_mode, seed)
        if with_automorphisms:
            expectation = expected_set(wrapped)
            check_automorphisms(report, expectation.elements, expectation.compose, expectation.form,
                                workers, budget, force)
    logger.info("Realized group of order %d over %s: dim %d, %d checks, ok=%s",
                G.order, field, wrapped.dim, len(report.checks), report.ok)
    return report


def _lambda_of(e_alg: Algebra) -> list:
    return [parse_raw(e_alg.field, x) for x in e_alg.params["lambda"]]


# ------------------------------------------------------------------ claims

def claims_of(report: ConstructionReport) -> dict:
    """Passed checks as re-runnable claims for the algebra's metadata."""
    claims: dict[str, Any] = {}
    for c in report.checks:
        if c.status != "pass":
            continue
        if c.claim == "simple":
            claims["simple"] = {"mode": c.details["mode"], "seed": c.details["seed"]}
        elif c.claim == "automorphisms":
            claims["automorphisms"] = {"order": c.details["order"], "matched": "matched_form" in c.details}
        else:
            claims[c.claim] = True
    return claims


def _inner_group_algebra(a: Algebra) -> tuple[PermGroup, Algebra] | None:
    e_alg = restrict_to_block(a, "R") if a.construction == "wrap" and a.has_block("R") else a
    if e_alg.construction != "E":
        return None
    return group_from_params(e_alg.params["group"]), e_alg


def replay_claims(a: Algebra, claims: dict, workers: int | None = None, budget: int | None = None,
                  force: bool = False) -> ConstructionReport:
    """Re-run every claim recorded next to an algebra."""
    report = ConstructionReport(a)
    with trace_operation("replay_claims", construction=a.construction, claims=len(claims)):
        for claim in sorted(claims):
            recorded = claims[claim]
            if claim == "unique_left_identity":
                check_left_identity(report)
            elif claim == "eigenblocks":
                check_blocks(report)
            elif claim == "line_normalizer":
                found = _inner_group_algebra(a)
                if found is None:
                    report.checks.append(Check(claim, "skipped", None, {"reason": "no group construction inside"}))
                else:
                    check_line_normalizer(report, *found)
            elif claim == "simple":
                check_simplicity(report, recorded.get("mode", "norton"), recorded.get("seed", 1))
            elif claim == "automorphisms":
                expectation = expected_set(a) if recorded.get("matched") else None
                if expectation is None:
                    check_automorphisms(report, workers=workers, budget=budget, force=force)
                else:
                    check_automorphisms(report, expectation.elements, expectation.compose, expectation.form,
                                        workers, budget, force)
                _compare_order(report, recorded.get("order"))
            else:
                report.checks.append(Check(claim, "skipped", None, {"reason": "unknown claim"}))
    logger.info("Replayed %d claims on %s: ok=%s", len(claims), a.construction, report.ok)
    return report


def _compare_order(report: ConstructionReport, recorded: int | None) -> None:
    if recorded is None or report.automorphisms is None or report.aut_order == recorded:
        return
    report.checks.append(Check("aut_order", "fail",
                               {"error": "mismatch", "message": "automorphism count differs from the recorded one",
                                "witness": {"recorded": recorded, "found": report.aut_order}}))
