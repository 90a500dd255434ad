# app/services/graded.py
"""Truncated tensor / symmetric algebras and the quotient algebras A(V, S).

Monomials of degree i are index tuples: words of length i (tensor flavor) or
nondecreasing tuples (symmetric flavor), both in lexicographic order.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from app.core.errors import DegreeOutOfRange, DimensionMismatch, SubspaceWrongDegree, UsageError
from app.core.exactfield import FieldSpec
from app.core.linalg import Matrix, Subspace, is_invertible
from app.models.algebra import Algebra, BlockInfo, BlockRole, StructureBuilder, SubspaceConstraint
from app.services.algebra_ops import AutomorphismCheck, is_automorphism
from app.utils.math import merge_multisets, symmetric_monomials, tensor_words

logger = logging.getLogger(__name__)

FLAVORS = ("tensor", "symmetric")


@dataclass(frozen=True)
class GradedBasis:
    flavor: str
    base_dim: int
    degree: int
    monomials: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.monomials)

    @property
    def index(self) -> dict[tuple[int, ...], int]:
        return _index_of(self)

    def product(self, m1: Sequence[int], m2: Sequence[int]) -> tuple[int, ...]:
        if self.flavor == "tensor":
            return tuple(m1) + tuple(m2)
        return merge_multisets(m1, m2)


@lru_cache(maxsize=None)
def _index_of(basis: GradedBasis) -> dict:
    return {m: i for i, m in enumerate(basis.monomials)}


@lru_cache(maxsize=None)
def graded_basis(n: int, degree: int, flavor: str) -> GradedBasis:
    if flavor not in FLAVORS:
        raise UsageError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")
    if degree < 1:
        raise DegreeOutOfRange(f"degree must be positive, got {degree}")
    monos = tensor_words(n, degree) if flavor == "tensor" else symmetric_monomials(n, degree)
    return GradedBasis(flavor, n, degree, tuple(monos))


# ------------------------------------------------------------ actions

def _apply_columns(field: FieldSpec, cols: Sequence[Sequence], monomial: Sequence[int],
                   basis: GradedBasis) -> list:
    """Image of a monomial under the map with columns ``cols`` (product of the images)."""
    add, mul, zero = field.add, field.mul, field.zero
    n = basis.base_dim
    current: dict[tuple, object] = {(): field.one}
    for letter in monomial:
        col = cols[letter]
        nxt: dict[tuple, object] = {}
        for word, c in current.items():
            for t in range(n):
                v = col[t]
                if v == zero:
                    continue
                w = word + (t,) if basis.flavor == "tensor" else merge_multisets(word, (t,))
                nxt[w] = add(nxt.get(w, zero), mul(c, v))
        current = {w: c for w, c in nxt.items() if c != zero}
    out = [zero] * basis.size
    idx = basis.index
    for w, c in current.items():
        out[idx[w]] = c
    return out


def apply_induced(g: Matrix, vector: Sequence, degree: int, flavor: str) -> tuple:
    """g acting on a degree-``degree`` vector without forming the induced matrix."""
    basis = graded_basis(g.rows, degree, flavor)
    if len(vector) != basis.size:
        raise DimensionMismatch(f"vector of length {len(vector)} in a piece of dimension {basis.size}")
    f = g.field
    cols = g.columns()
    out = [f.zero] * basis.size
    for m, c in zip(basis.monomials, vector):
        if c == f.zero:
            continue
        img = _apply_columns(f, cols, m, basis)
        out = [f.add(x, f.mul(c, y)) for x, y in zip(out, img)]
    return tuple(out)


def induced_action(g: Matrix, degree: int, flavor: str) -> Matrix:
    """Matrix of g^{(x)i} or Sym^i(g) on the monomial basis; degree 1 gives g."""
    if not g.is_square:
        raise DimensionMismatch("induced action of a non-square matrix")
    if degree == 1:
        return g
    basis = graded_basis(g.rows, degree, flavor)
    cols = g.columns()
    return Matrix.from_columns(g.field, [_apply_columns(g.field, cols, m, basis) for m in basis.monomials])


def normalizes_subspace(g: Matrix, s: Subspace, degree: int, flavor: str) -> bool:
    basis = graded_basis(g.rows, degree, flavor)
    if s.ambient != basis.size:
        raise SubspaceWrongDegree(f"subspace lives in dimension {s.ambient}, degree-{degree} piece has {basis.size}")
    images = [apply_induced(g, v, degree, flavor) for v in s.basis]
    return Subspace.span(g.field, s.ambient, images) == s


# ----------------------------------------------------------- A(V, S)

@dataclass(frozen=True)
class QuotientPlan:
    """Top-degree piece modulo S: non-pivot monomials of RREF(S) represent the cosets."""

    degree: int
    subspace: Subspace
    coset_reps: tuple[int, ...]

    def reduce(self, vector: Sequence) -> tuple:
        """Coordinates of ``vector`` modulo S on the coset representatives."""
        residual = self.subspace.residual(vector)
        return tuple(residual[i] for i in self.coset_reps)


def quotient_plan(s: Subspace, degree: int) -> QuotientPlan:
    pivots = set(s.pivots)
    reps = tuple(i for i in range(s.ambient) if i not in pivots)
    return QuotientPlan(degree, s, reps)


def _monomial_name(names: Sequence[str], m: Sequence[int], flavor: str) -> str:
    if flavor == "tensor":
        return "(x)".join(names[i] for i in m)
    parts = []
    for i in sorted(set(m)):
        e = m.count(i)
        parts.append(names[i] if e == 1 else f"{names[i]}^{e}")
    return "*".join(parts)


def build_A(n: int, field: FieldSpec, s: Subspace, r: int, flavor: str,
            var_names: Sequence[str] | None = None) -> Algebra:
    """The truncated graded algebra on V (dim n) modulo the ideal generated by S in degree r.

    Degrees 1..r-1 are kept whole; degree r is the quotient by S; products of
    total degree above r vanish.
    """
    if r <= 1:
        raise DegreeOutOfRange(f"the truncation degree must exceed 1, got {r}")
    top = graded_basis(n, r, flavor)
    if s.ambient != top.size:
        raise SubspaceWrongDegree(
            f"S must live in the degree-{r} {flavor} piece of dimension {top.size}, got ambient {s.ambient}",
            witness={"expected": top.size, "got": s.ambient},
        )
    names = list(var_names) if var_names else [f"e{i + 1}" for i in range(n)]
    plan = quotient_plan(s, r)

    pieces = [graded_basis(n, i, flavor) for i in range(1, r)]
    offsets = []
    basis_names: list[str] = []
    pos = 0
    for piece in pieces:
        offsets.append(pos)
        basis_names += [_monomial_name(names, m, flavor) for m in piece.monomials]
        pos += piece.size
    top_offset = pos
    basis_names += [_monomial_name(names, top.monomials[i], flavor) for i in plan.coset_reps]
    dim = pos + len(plan.coset_reps)

    builder = StructureBuilder(field, dim)
    for i, pi in enumerate(pieces, start=1):
        for j, pj in enumerate(pieces, start=1):
            if i + j > r:
                continue
            for a_idx, m1 in enumerate(pi.monomials):
                for b_idx, m2 in enumerate(pj.monomials):
                    prod = pi.product(m1, m2)
                    src_a = offsets[i - 1] + a_idx
                    src_b = offsets[j - 1] + b_idx
                    if i + j < r:
                        target = graded_basis(n, i + j, flavor).index[prod]
                        builder.add(src_a, src_b, offsets[i + j - 1] + target, field.one)
                    else:
                        vec = [field.zero] * top.size
                        vec[top.index[prod]] = field.one
                        for t, c in enumerate(plan.reduce(vec)):
                            if c != field.zero:
                                builder.add(src_a, src_b, top_offset + t, c)

    blocks = []
    for i, piece in enumerate(pieces, start=1):
        role = BlockRole.GENERATOR if i == 1 else BlockRole.GENERATED
        blocks.append(BlockInfo(f"A{i}", offsets[i - 1], offsets[i - 1] + piece.size, role))
    if plan.coset_reps:
        blocks.append(BlockInfo(f"A{r}", top_offset, dim, BlockRole.GENERATED))
    constraint = SubspaceConstraint("A1", r, flavor, s.basis)
    logger.debug("Built A(V,S): n=%d r=%d flavor=%s dim=%d", n, r, flavor, dim)
    return Algebra(
        field=field,
        dim=dim,
        basis_names=tuple(basis_names),
        structure=builder.build(),
        blocks=tuple(blocks),
        constraints=(constraint,),
        construction="A",
        params={"n": n, "r": r, "flavor": flavor},
    )


def graded_extension(a: Algebra, g: Matrix) -> Matrix:
    """Extend g on V to the graded algebra built by ``build_A`` (same layout and metadata)."""
    params = a.params if a.construction == "A" else None
    if params is None:
        raise UsageError("graded_extension expects an algebra built by build_A")
    return extension_on_blocks(a, g, "", params["r"], params["flavor"])


def extension_on_blocks(a: Algebra, g: Matrix, prefix: str, r: int, flavor: str) -> Matrix:
    """Block-diagonal map on the A(V,S) blocks ``{prefix}A1..A{r}`` induced by g on V."""
    constraint = next(c for c in a.constraints if c.block == f"{prefix}A1")
    s = Subspace.span(a.field, graded_basis(g.rows, r, flavor).size, constraint.basis)
    plan = quotient_plan(s, r)
    parts = [induced_action(g, i, flavor) for i in range(1, r)]
    if plan.coset_reps:
        top = graded_basis(g.rows, r, flavor)
        cols = g.columns()
        reps = []
        for rep in plan.coset_reps:
            reps.append(plan.reduce(_apply_columns(a.field, cols, top.monomials[rep], top)))
        parts.append(Matrix.from_columns(a.field, reps))
    return Matrix.block_diagonal(a.field, parts)


def check_prop1(a: Algebra, g: Matrix) -> AutomorphismCheck:
    """Whether the graded extension of g is an automorphism of A(V, S)."""
    if not is_invertible(g):
        return AutomorphismCheck(False, None, "singular")
    return is_automorphism(a, graded_extension(a, g))
