# app/core/polynomials.py
"""Univariate polynomial factoring over the supported fields.

Finite fields go through ``galois`` (its integer representation of
GF(p^k) elements is the same code ``sum(c_i * p**i)`` used by exactfield);
the rationals go through ``sympy``.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Sequence

import galois
import sympy

from app.core.exactfield import FieldSpec

logger = logging.getLogger(__name__)


def _trim(coeffs: Sequence, zero) -> list:
    c = list(coeffs)
    while len(c) > 1 and c[-1] == zero:
        c.pop()
    return c


def irreducible_factors(field: FieldSpec, coeffs: Sequence) -> list[tuple[list, int]]:
    """Monic irreducible factors with multiplicities, coefficients low to high.

    Factors are sorted by degree, then by coefficients, so callers can try the
    cheapest factor first.
    """
    c = _trim(coeffs, field.zero)
    if len(c) <= 1:
        return []
    lead = field.inv(c[-1])
    c = [field.mul(lead, x) for x in c]
    if field.is_finite:
        gf = field.gf
        poly = galois.Poly([int(x) for x in reversed(c)], field=gf)
        factors, mults = poly.factors()
        out = [([int(v) for v in f.coeffs][::-1], int(m)) for f, m in zip(factors, mults)]
    else:
        x = sympy.Symbol("x")
        poly = sympy.Poly([sympy.Rational(v.numerator, v.denominator) for v in reversed(c)], x, domain=sympy.QQ)
        _, pairs = poly.factor_list()
        out = []
        for f, m in pairs:
            f = f.monic()
            out.append(([Fraction(int(v.p), int(v.q)) for v in reversed(f.all_coeffs())], int(m)))
    out.sort(key=lambda fm: (len(fm[0]), [_sort_key(field, v) for v in fm[0]]))
    logger.debug("Factored degree-%d polynomial over %s into %d factors", len(c) - 1, field, len(out))
    return out


def _sort_key(field: FieldSpec, v):
    if field.is_rational:
        return (v.denominator, v.numerator)
    return v


def roots(field: FieldSpec, coeffs: Sequence) -> list:
    """Distinct roots in the field (from the linear factors)."""
    out = []
    for f, _ in irreducible_factors(field, coeffs):
        if len(f) == 2:
            out.append(field.neg(f[0]))
    return out
