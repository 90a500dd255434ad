# app/services/permgroups.py
"""Small permutation groups: parsing, closure, matrix actions and line normalizers.

Closure and orders come from ``sympy.combinatorics``; this module adds the
1-based cycle syntax of the command line and the element cap.
"""
from __future__ import annotations

import logging
import re
from typing import Sequence

from sympy.combinatorics import PermutationGroup
from sympy.combinatorics.named_groups import SymmetricGroup

from app.config import settings
from app.core.errors import GroupTooLarge, InvalidPermutation, UsageError, ZeroVector
from app.core.exactfield import FieldSpec
from app.core.linalg import Matrix, Subspace, is_zero_vector
from app.models.permutation import PermGroup, Permutation
from app.services.graded import graded_basis

logger = logging.getLogger(__name__)

_CYCLE = re.compile(r"\(([^()]*)\)")
# one generator: a one-line list, or one or more cycles (whitespace between cycles multiplies)
_GENERATOR = re.compile(r"\s*(?:\[[^\[\]]*\]|\([^()]*\)(?:\s*\([^()]*\))*)\s*")
_GROUP_KEYS = {"n", "gens"}


def group_from_generators(n: int, gens: Sequence[Permutation], cap: int | None = None) -> PermGroup:
    """The group generated by ``gens``; refuses groups above ``cap`` before listing elements."""
    cap = settings.GROUP_CAP if cap is None else cap
    for g in gens:
        if g.degree != n:
            raise InvalidPermutation(f"generator {g} has degree {g.degree}, expected {n}")
    group = PermutationGroup([g.sym for g in gens] or [Permutation.identity(n).sym])
    order = int(group.order())
    if order > cap:
        raise GroupTooLarge(f"group of order {order} exceeds the cap of {cap} elements",
                            witness={"cap": cap, "order": order})
    return PermGroup.from_sympy(group, tuple(gens))


def symmetric_group(n: int) -> PermGroup:
    if n < 2:
        return group_from_generators(n, [], cap=1)
    return PermGroup.from_sympy(SymmetricGroup(n))


def regular_representation(table: Sequence[Sequence[int]]) -> PermGroup:
    """Left regular representation of a group given by its Cayley table (entries 0..m-1)."""
    m = len(table)
    if any(len(row) != m for row in table):
        raise UsageError("Cayley table must be square")
    perms = [Permutation(tuple(int(x) for x in row)) for row in table]
    return group_from_generators(m, perms)


def perm_matrix(sigma: Permutation, field: FieldSpec) -> Matrix:
    """0/1 matrix sending e_i to e_{sigma(i)}."""
    n = sigma.degree
    rows = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        rows[sigma(i)][i] = field.one
    return Matrix(field, tuple(tuple(r) for r in rows))


def permute_symmetric(sigma: Permutation, vector: Sequence, degree: int) -> tuple:
    """Action of sigma on a symmetric-power vector by relabeling monomials."""
    basis = graded_basis(sigma.degree, degree, "symmetric")
    idx = basis.index
    out = list(vector)
    for m, c in zip(basis.monomials, vector):
        out[idx[tuple(sorted(sigma(i) for i in m))]] = c
    return tuple(out)


def line_normalizer(n: int, field: FieldSpec, f: Sequence, degree: int,
                    within: PermGroup | None = None) -> PermGroup:
    """Elements of ``within`` (default S_n) mapping the line <f> to itself."""
    if is_zero_vector(field, f):
        raise ZeroVector("line normalizer of the zero vector")
    group = within or symmetric_group(n)
    line = Subspace.span(field, len(f), [f])
    kept = [s for s in group.elements if line.contains(permute_symmetric(s, f, degree))]
    logger.debug("Line normalizer: %d of %d permutations keep <f>", len(kept), group.order)
    return PermGroup(n, tuple(kept), tuple(kept))


def vector_stabilizer(n: int, field: FieldSpec, f: Sequence, degree: int,
                      within: PermGroup | None = None) -> PermGroup:
    group = within or symmetric_group(n)
    kept = [s for s in group.elements if permute_symmetric(s, f, degree) == tuple(f)]
    return PermGroup(n, tuple(kept), tuple(kept))


# ---------------------------------------------------------------- parsing

def parse_permutation(n: int, text: str) -> Permutation:
    """Cycle notation ``(1 2 3)(2 3)`` (left to right, 1-based) or one-line ``[2,3,1]``."""
    text = text.strip()
    if not text or text == "()":
        return Permutation.identity(n)
    if text.startswith("["):
        try:
            images = tuple(int(t) - 1 for t in text.strip("[]").replace(",", " ").split())
        except ValueError as exc:
            raise InvalidPermutation(f"cannot read {text!r}") from exc
        if len(images) != n:
            raise InvalidPermutation(f"{text} does not have {n} entries")
        return Permutation(images)
    cycles = []
    rest = _CYCLE.sub("", text).strip()
    if rest:
        raise InvalidPermutation(f"unexpected text {rest!r} in {text!r}")
    for body in _CYCLE.findall(text):
        try:
            pts = [int(t) - 1 for t in body.replace(",", " ").split()]
        except ValueError as exc:
            raise InvalidPermutation(f"cannot read cycle ({body})") from exc
        if pts:
            cycles.append(pts)
    return Permutation.from_cycles(n, cycles)


def split_generators(text: str) -> list[str]:
    """Split a ``gens`` value at its top-level commas; any text outside the grammar raises."""
    text = text.strip()
    if not text:
        return []
    out = []
    pos = 0
    while True:
        m = _GENERATOR.match(text, pos)
        if m is None or not m.group(0).strip():
            raise InvalidPermutation(f"cannot read generator at {text[pos:]!r}",
                                     witness={"gens": text, "position": pos})
        out.append(m.group(0).strip())
        pos = m.end()
        if pos == len(text):
            return out
        if text[pos] != ",":
            raise InvalidPermutation(f"expected ',' between generators at {text[pos:]!r}",
                                     witness={"gens": text, "position": pos})
        pos += 1


def parse_group(text: str, cap: int | None = None) -> PermGroup:
    """Read ``n=3; gens=(1 2),(1 2 3)``.

    Generators are separated by commas. Cycles written next to each other,
    with or without spaces, form one generator: ``(1 2) (1 2 3)`` is the
    product ``(1 2)(1 2 3)``.
    """
    fields = {}
    for part in text.split(";"):
        if "=" not in part:
            if part.strip():
                raise UsageError(f"cannot read group part {part!r}")
            continue
        key, value = part.split("=", 1)
        key = key.strip().lower()
        if key not in _GROUP_KEYS:
            raise UsageError(f"unknown group key {key!r}")
        fields[key] = value.strip()
    if "n" not in fields:
        raise UsageError("group spec needs n=<degree>")
    try:
        n = int(fields["n"])
    except ValueError as exc:
        raise UsageError(f"bad degree {fields['n']!r}") from exc
    if n < 1:
        raise UsageError(f"degree must be positive, got {n}")
    gens = [parse_permutation(n, chunk) for chunk in split_generators(fields.get("gens", ""))]
    return group_from_generators(n, gens, cap)


def format_group(group: PermGroup) -> list[str]:
    return [str(g) for g in group.elements]


def group_params(group: PermGroup) -> dict:
    """JSON form recorded in algebra metadata: degree and generators in cycle notation."""
    return {"n": group.degree, "gens": [str(g) for g in group.generators]}


def group_from_params(spec: dict, cap: int | None = None) -> PermGroup:
    try:
        n = int(spec["n"])
        gens = [parse_permutation(n, g) for g in spec.get("gens", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot read group parameters {spec!r}") from exc
    return group_from_generators(n, gens, cap)
