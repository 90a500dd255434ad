# app/services/simplicity.py
"""Simplicity tests: exhaustive spinning, the Norton irreducibility test and random sampling.

An algebra is simple when its multiplication is nonzero and no proper nonzero
subspace is stable under every left and right multiplication operator.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from itertools import product

import numpy as np

from app.config import settings
from app.core.errors import TooLargeForExhaustive, UsageError
from app.core.exactfield import FieldSpec, format_raw
from app.core.linalg import Matrix, Subspace, annihilator, charpoly, kernel, poly_eval_matrix, spin
from app.core.polynomials import irreducible_factors
from app.models.algebra import Algebra
from app.services.algebra_ops import has_nonzero_multiplication
from app.services.observability import trace_operation
from app.utils.math import projective_point_count

logger = logging.getLogger(__name__)

MODES = ("exhaustive", "norton", "sampled")


@dataclass(frozen=True)
class SimplicityVerdict:
    status: str  # "simple" | "not_simple" | "inconclusive"
    mode: str
    witness: Subspace | None = None
    details: dict = dc_field(default_factory=dict)

    def witness_rows(self) -> list[list[str]] | None:
        if self.witness is None:
            return None
        return [[format_raw(self.witness.field, x) for x in v] for v in self.witness.basis]


def _operators(a: Algebra) -> list[Matrix]:
    return list(a.left_operators) + list(a.right_operators)


def _random_scalar(field: FieldSpec, rng: np.random.Generator):
    if field.is_finite:
        return int(rng.integers(field.order))
    return field.normalize(int(rng.integers(-5, 6)))


def _random_vector(field: FieldSpec, n: int, rng: np.random.Generator) -> tuple:
    return tuple(_random_scalar(field, rng) for _ in range(n))


def projective_points(field: FieldSpec, n: int):
    """Normalized representatives (first nonzero coordinate 1) in lexicographic order."""
    values = list(field.elements())
    for lead in range(n):
        head = (field.zero,) * lead + (field.one,)
        for tail in product(values, repeat=n - lead - 1):
            yield head + tail


def _proper(a: Algebra, seed: tuple, ops: list[Matrix]) -> Subspace | None:
    closure = spin(a.field, a.dim, [seed], ops)
    return None if closure.is_full else closure


def exhaustive(a: Algebra) -> SimplicityVerdict:
    f = a.field
    if not f.is_finite:
        raise TooLargeForExhaustive("exhaustive mode needs a finite field")
    points = projective_point_count(a.dim, f.order)
    if points > settings.EXHAUSTIVE_LIMIT:
        raise TooLargeForExhaustive(
            f"{points} projective points exceed the limit of {settings.EXHAUSTIVE_LIMIT}",
            witness={"points": points, "limit": settings.EXHAUSTIVE_LIMIT},
        )
    ops = _operators(a)
    for v in projective_points(f, a.dim):
        ideal = _proper(a, v, ops)
        if ideal is not None:
            return SimplicityVerdict("not_simple", "exhaustive", ideal, {"points_checked": points})
    return SimplicityVerdict("simple", "exhaustive", None, {"points_checked": points})


def _random_envelope_element(a: Algebra, ops: list[Matrix], rng: np.random.Generator) -> Matrix:
    f = a.field
    theta = Matrix.identity(f, a.dim).scale(_random_scalar(f, rng))
    for length in (1, 1, 2, 2, 3):
        word = Matrix.identity(f, a.dim)
        for _ in range(length):
            word = word @ ops[int(rng.integers(len(ops)))]
        theta = theta + word.scale(_random_scalar(f, rng))
    return theta


def norton(a: Algebra, seed: int = 0, rounds: int | None = None) -> SimplicityVerdict:
    """Norton's test with a random element theta of the operator envelope.

    A round is usable when p is an irreducible factor of the characteristic
    polynomial of theta and ker p(theta) has dimension deg p; then one kernel
    vector and one kernel vector of the transpose decide irreducibility.
    """
    rounds = settings.NORTON_ROUNDS if rounds is None else rounds
    f = a.field
    ops = _operators(a)
    ops_t = [m.transpose() for m in ops]
    rng = np.random.default_rng(seed)
    for attempt in range(1, rounds + 1):
        theta = _random_envelope_element(a, ops, rng)
        factors = irreducible_factors(f, charpoly(theta))
        for p, _ in factors:
            z = poly_eval_matrix(p, theta)
            null = kernel(z)
            if null.dim != len(p) - 1:
                continue
            v = null.basis[0]
            ideal = _proper(a, v, ops)
            if ideal is not None:
                return SimplicityVerdict("not_simple", "norton", ideal, {"round": attempt})
            w = kernel(z.transpose()).basis[0]
            dual = spin(f, a.dim, [w], ops_t)
            if not dual.is_full:
                return SimplicityVerdict("not_simple", "norton", annihilator(dual), {"round": attempt, "dual": True})
            logger.debug("Norton certificate in round %d with a degree-%d factor", attempt, len(p) - 1)
            return SimplicityVerdict("simple", "norton", None, {"round": attempt, "factor_degree": len(p) - 1})
    return SimplicityVerdict("inconclusive", "norton", None, {"rounds": rounds})


def sampled(a: Algebra, seed: int = 0, rounds: int | None = None) -> SimplicityVerdict:
    rounds = settings.SAMPLED_ROUNDS if rounds is None else rounds
    f = a.field
    ops = _operators(a)
    rng = np.random.default_rng(seed)
    seeds = [tuple(f.one if i == j else f.zero for i in range(a.dim)) for j in range(a.dim)]
    seeds += [_random_vector(f, a.dim, rng) for _ in range(rounds)]
    for v in seeds:
        if all(x == f.zero for x in v):
            continue
        ideal = _proper(a, v, ops)
        if ideal is not None:
            return SimplicityVerdict("not_simple", "sampled", ideal, {"spins": len(seeds)})
    return SimplicityVerdict("inconclusive", "sampled", None, {"spins": len(seeds)})


def is_simple(a: Algebra, mode: str = "norton", seed: int = 0, rounds: int | None = None) -> SimplicityVerdict:
    if mode not in MODES:
        raise UsageError(f"unknown simplicity mode {mode!r}; expected one of {MODES}")
    if not has_nonzero_multiplication(a):
        return SimplicityVerdict("not_simple", mode, Subspace.full(a.field, a.dim), {"reason": "zero multiplication"})
    with trace_operation("is_simple", mode=mode, dim=a.dim):
        if mode == "exhaustive":
            return exhaustive(a)
        if mode == "norton":
            return norton(a, seed, rounds)
        return sampled(a, seed, rounds)
