# app/services/algebra_ops.py
"""Operations on structure-constant algebras.

Multiplication, multiplication operators, left identities and the
eigenblock analysis of right multiplication by a left identity, ideals,
trace forms, the multiplication tensor, direct sums and base change.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from app.core.errors import (
    BlockMetadataMismatch,
    DecompositionFails,
    DimensionMismatch,
    FieldMismatch,
    NoUniqueLeftIdentity,
    ZeroVector,
)
from app.core.exactfield import FieldSpec, embed_prime_field, format_raw
from app.core.linalg import (
    AffineSolution,
    Matrix,
    Subspace,
    eigenspace,
    eigenvalues,
    inverse,
    is_invertible,
    is_zero_vector,
    solve_affine,
    spin,
    unit_vector,
)
from app.models.algebra import Algebra, BlockInfo, BlockRole, StructureBuilder, SubspaceConstraint

logger = logging.getLogger(__name__)

SparseVector = dict


# ---------------------------------------------------------- multiplication

def multiply(a: Algebra, x: Sequence, y: Sequence) -> tuple:
    if len(x) != a.dim or len(y) != a.dim:
        raise DimensionMismatch(f"vectors of length {len(x)}, {len(y)} in an algebra of dimension {a.dim}")
    return dense(a, multiply_sparse(a, sparse(a, x), sparse(a, y)))


def sparse(a: Algebra, x: Sequence) -> SparseVector:
    zero = a.field.zero
    return {i: c for i, c in enumerate(x) if c != zero}


def dense(a: Algebra, x: SparseVector) -> tuple:
    out = [a.field.zero] * a.dim
    for i, c in x.items():
        out[i] = c
    return tuple(out)


def multiply_sparse(a: Algebra, x: SparseVector, y: SparseVector) -> SparseVector:
    f = a.field
    add, mul, zero = f.add, f.mul, f.zero
    table = a.table
    acc: dict = {}
    for i, xi in x.items():
        for j, yj in y.items():
            entries = table.get((i, j))
            if not entries:
                continue
            w = mul(xi, yj)
            for k, c in entries:
                acc[k] = add(acc.get(k, zero), mul(w, c))
    return {k: c for k, c in acc.items() if c != zero}


def mult_operator(a: Algebra, v: Sequence, side: str) -> Matrix:
    """Matrix of x -> v*x (``side="left"``) or x -> x*v (``side="right"``)."""
    if len(v) != a.dim:
        raise DimensionMismatch(f"vector of length {len(v)} in an algebra of dimension {a.dim}")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    ops = a.left_operators if side == "left" else a.right_operators
    f = a.field
    result = Matrix.zeros(f, a.dim, a.dim)
    for i, c in enumerate(v):
        if c != f.zero:
            result = result + ops[i].scale(c)
    return result


# ----------------------------------------------------------- left identity

def left_identities(a: Algebra, indices: Sequence[int] | None = None) -> AffineSolution:
    """Solutions e of e*b_j = b_j for all j, with e supported on ``indices`` (default: all).

    Restricting ``indices`` to a block that is a subalgebra gives the left
    identities of that subalgebra.
    """
    f = a.field
    idx = list(range(a.dim)) if indices is None else list(indices)
    pos = {g: n for n, g in enumerate(idx)}
    rows: list[list] = []
    rhs: list = []
    for j in idx:
        for k in idx:
            row = [f.zero] * len(idx)
            for i in idx:
                for kk, c in a.table.get((i, j), ()):
                    if kk == k:
                        row[pos[i]] = c
            rows.append(row)
            rhs.append(f.one if j == k else f.zero)
    if not rows:
        return AffineSolution("empty", None, Subspace.zero(f, 0))
    return solve_affine(Matrix(f, tuple(tuple(r) for r in rows)), rhs)


def unique_left_identity(a: Algebra, indices: Sequence[int] | None = None) -> tuple:
    """The unique left identity (ambient coordinates) or NoUniqueLeftIdentity."""
    sol = left_identities(a, indices)
    if not sol.is_unique:
        witness = {"kind": sol.kind}
        if sol.kind == "family":
            witness["family_dim"] = sol.homogeneous.dim
        raise NoUniqueLeftIdentity(f"left identity is not unique ({sol.kind})", witness=witness)
    if indices is None:
        return sol.particular
    out = [a.field.zero] * a.dim
    for n, g in enumerate(indices):
        out[g] = sol.particular[n]
    return tuple(out)


def subalgebra_left_identity(a: Algebra, block: BlockInfo) -> tuple:
    require_subalgebra(a, block.indices, block.name)
    return unique_left_identity(a, block.indices)


def require_subalgebra(a: Algebra, indices: range, name: str) -> None:
    for i in indices:
        for j in indices:
            for k, _ in a.table.get((i, j), ()):
                if k not in indices:
                    raise BlockMetadataMismatch(
                        f"block {name} is not closed under multiplication",
                        witness={"block": name, "pair": [a.basis_names[i], a.basis_names[j]]},
                    )


# ------------------------------------------------------------- eigenblocks

@dataclass(frozen=True)
class EigenBlock:
    eigenvalue: object
    space: Subspace


def restricted_right_operator(a: Algebra, e: Sequence, indices: Sequence[int]) -> Matrix:
    """R_e restricted to the span of ``indices`` (which must be R_e-stable)."""
    f = a.field
    idx = list(indices)
    pos = {g: n for n, g in enumerate(idx)}
    ev = sparse(a, e)
    cols = []
    for j in idx:
        prod = multiply_sparse(a, {j: f.one}, ev)
        col = [f.zero] * len(idx)
        for k, c in prod.items():
            if k not in pos:
                raise BlockMetadataMismatch(
                    "right multiplication by the unit leaves the block",
                    witness={"basis_vector": a.basis_names[j], "lands_in": a.basis_names[k]},
                )
            col[pos[k]] = c
        cols.append(col)
    return Matrix.from_columns(f, cols)


def eigenblock_decomposition(a: Algebra, e: Sequence, indices: Sequence[int] | None = None,
                             allow_zero: bool = False) -> list[EigenBlock]:
    """Eigenspaces of R_e besides the unit line, in canonical eigenvalue order.

    Succeeds iff the eigenspaces together with <e> fill the space (or the span
    of ``indices``), the eigenvalue-1 eigenspace is exactly <e>, and (unless
    ``allow_zero``) no eigenvalue is zero.
    """
    f = a.field
    idx = list(range(a.dim)) if indices is None else list(indices)
    m = restricted_right_operator(a, e, idx)
    local_e = tuple(e[g] for g in idx)

    def ambient(v):
        out = [f.zero] * a.dim
        for n, g in enumerate(idx):
            out[g] = v[n]
        return tuple(out)

    blocks: list[EigenBlock] = []
    total = 0
    for lam in eigenvalues(m):
        space = eigenspace(m, lam)
        if lam == f.one:
            if space != Subspace.span(f, len(idx), [local_e]):
                raise DecompositionFails(
                    "eigenvalue 1 has an eigenspace larger than the unit line",
                    witness={"defect": "unit-collision", "dim": space.dim},
                )
            total += 1
            continue
        if lam == f.zero and not allow_zero:
            raise DecompositionFails("zero eigenvalue of right multiplication by the unit",
                                     witness={"defect": "zero-eigenvalue", "dim": space.dim})
        total += space.dim
        blocks.append(EigenBlock(lam, Subspace.span(f, a.dim, [ambient(v) for v in space.basis])))
    if total != len(idx):
        raise DecompositionFails(
            "eigenspaces of right multiplication do not fill the space",
            witness={"defect": "missing-dimension", "found": total, "expected": len(idx)},
        )
    return blocks


# ------------------------------------------------------------ automorphisms

@dataclass(frozen=True)
class AutomorphismCheck:
    ok: bool
    pair: tuple[int, int] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def columns_sparse(a: Algebra, g: Matrix) -> list[SparseVector]:
    zero = a.field.zero
    return [{k: r[j] for k, r in enumerate(g.entries) if r[j] != zero} for j in range(g.cols)]


def first_violation(a: Algebra, cols: list[SparseVector], pairs: Iterable[tuple[int, int]]) -> tuple[int, int] | None:
    """First basis pair (i, j) with g(b_i b_j) != g(b_i) g(b_j), given the sparse columns of g."""
    f = a.field
    add, mul, zero = f.add, f.mul, f.zero
    table = a.table
    for i, j in pairs:
        lhs: dict = {}
        for k, c in table.get((i, j), ()):
            for t, v in cols[k].items():
                lhs[t] = add(lhs.get(t, zero), mul(c, v))
        lhs = {t: v for t, v in lhs.items() if v != zero}
        if lhs != multiply_sparse(a, cols[i], cols[j]):
            return (i, j)
    return None


def is_automorphism(a: Algebra, g: Matrix) -> AutomorphismCheck:
    if g.rows != a.dim or g.cols != a.dim:
        raise DimensionMismatch(f"{g.rows}x{g.cols} matrix on an algebra of dimension {a.dim}")
    cols = columns_sparse(a, g)
    pair = first_violation(a, cols, ((i, j) for i in range(a.dim) for j in range(a.dim)))
    if pair is not None:
        return AutomorphismCheck(False, pair, "multiplicativity")
    if not is_invertible(g):
        return AutomorphismCheck(False, None, "singular")
    return AutomorphismCheck(True)


def stabilizes_tensor(a: Algebra, g: Matrix) -> bool:
    """Whether g fixes the multiplication tensor in V* (x) V* (x) V.

    Decided from ``export_tensor(a)`` alone.
    """
    if g.rows != a.dim or g.cols != a.dim:
        raise DimensionMismatch(f"{g.rows}x{g.cols} matrix on an algebra of dimension {a.dim}")
    return stabilizes_entries(a.field, a.dim, export_tensor(a), g)


def stabilizes_entries(field: FieldSpec, dim: int, entries: Iterable[tuple[int, int, int, object]],
                       g: Matrix) -> bool:
    """Tensor stabilization for raw entries (i, j, k, c).

    The action is (g.t)(x, y) = g t(g^-1 x, g^-1 y); singular g never stabilizes.
    """
    if g.field != field:
        raise FieldMismatch("matrix and tensor live over different fields")
    if not is_invertible(g):
        return False
    add, mul, zero = field.add, field.mul, field.zero
    table: dict[tuple[int, int], list] = {}
    for i, j, k, c in entries:
        if c != zero:
            table.setdefault((i, j), []).append((k, c))
    g_inv = inverse(g)
    inv_cols = [{r: row[j] for r, row in enumerate(g_inv.entries) if row[j] != zero} for j in range(dim)]
    for i in range(dim):
        for j in range(dim):
            t = [zero] * dim
            for p, xp in inv_cols[i].items():
                for q, yq in inv_cols[j].items():
                    w = mul(xp, yq)
                    for k, c in table.get((p, q), ()):
                        t[k] = add(t[k], mul(w, c))
            expected = [zero] * dim
            for k, c in table.get((i, j), ()):
                expected[k] = add(expected[k], c)
            if tuple(expected) != g.apply(t):
                return False
    return True


def export_tensor(a: Algebra) -> list[tuple[int, int, int, object]]:
    """Multiplication tensor entries (i, j, k, c) with b_i b_j = sum c b_k."""
    return list(a.structure)


# --------------------------------------------------------------- ideals

def ideal_generated_by(a: Algebra, v: Sequence) -> Subspace:
    if len(v) != a.dim:
        raise DimensionMismatch(f"vector of length {len(v)} in an algebra of dimension {a.dim}")
    if is_zero_vector(a.field, v):
        raise ZeroVector("the ideal generated by zero is not informative")
    ops = list(a.left_operators) + list(a.right_operators)
    return spin(a.field, a.dim, [tuple(v)], ops)


def has_nonzero_multiplication(a: Algebra) -> bool:
    return bool(a.structure)


# ------------------------------------------------------------ trace forms

TRACE_KINDS = ("LL", "RR", "LR", "RL")


@dataclass(frozen=True)
class TraceForm:
    kind: str
    gram: Matrix
    nondegenerate: bool


def _trace_product(f: FieldSpec, x: Matrix, y: Matrix):
    acc = f.zero
    for p in range(x.rows):
        row = x.entries[p]
        for q, v in enumerate(row):
            if v != f.zero:
                w = y.entries[q][p]
                if w != f.zero:
                    acc = f.add(acc, f.mul(v, w))
    return acc


def trace_form(a: Algebra, kind: str) -> TraceForm:
    if kind not in TRACE_KINDS:
        raise ValueError(f"unknown trace form {kind!r}")
    first = a.left_operators if kind[0] == "L" else a.right_operators
    second = a.left_operators if kind[1] == "L" else a.right_operators
    f = a.field
    rows = tuple(tuple(_trace_product(f, first[i], second[j]) for j in range(a.dim)) for i in range(a.dim))
    gram = Matrix(f, rows)
    return TraceForm(kind, gram, is_invertible(gram))


# ----------------------------------------------------------- composition

def embed_blocks(inner: Algebra, offset: int, prefix: str, parent: str | None) -> list[BlockInfo]:
    return [b.shifted(offset, prefix, parent) for b in inner.blocks]


def embed_constraints(inner: Algebra, prefix: str) -> list[SubspaceConstraint]:
    return [c.renamed(prefix) for c in inner.constraints]


def direct_sum(a: Algebra, b: Algebra, names: tuple[str, str] = ("left", "right")) -> Algebra:
    """Block-diagonal structure constants; all cross products are zero."""
    if a.field != b.field:
        raise FieldMismatch(f"direct sum of algebras over {a.field} and {b.field}")
    dim = a.dim + b.dim
    builder = StructureBuilder(a.field, dim)
    builder.embed(a, 0)
    builder.embed(b, a.dim)
    left, right = names
    blocks = [BlockInfo(left, 0, a.dim), BlockInfo(right, a.dim, dim)]
    blocks += embed_blocks(a, 0, left + ".", left)
    blocks += embed_blocks(b, a.dim, right + ".", right)
    return Algebra(
        field=a.field,
        dim=dim,
        basis_names=tuple(f"{left}.{n}" for n in a.basis_names) + tuple(f"{right}.{n}" for n in b.basis_names),
        structure=builder.build(),
        blocks=tuple(blocks),
        constraints=tuple(embed_constraints(a, left + ".") + embed_constraints(b, right + ".")),
        construction="direct_sum",
        params={"left": a.construction, "right": b.construction},
    )


def single_block(a: Algebra, name: str = "all") -> Algebra:
    """The same algebra with one plain block covering everything (the trivial partition)."""
    return a.with_blocks([BlockInfo(name, 0, a.dim, BlockRole.PLAIN)])


def restrict_to_block(a: Algebra, name: str) -> Algebra:
    """Extract the subalgebra spanned by a block, keeping its nested metadata."""
    block = a.block(name)
    require_subalgebra(a, block.indices, name)
    lo, hi = block.lo, block.hi
    builder = StructureBuilder(a.field, block.size)
    for i, j, k, c in a.structure:
        if lo <= i < hi and lo <= j < hi:
            builder.add(i - lo, j - lo, k - lo, c)
    prefix = name + "."
    blocks = []
    for b in a.blocks:
        if b.name.startswith(prefix):
            blocks.append(replace(
                b,
                name=b.name[len(prefix):],
                lo=b.lo - lo,
                hi=b.hi - lo,
                linked_to=b.linked_to[len(prefix):] if b.linked_to and b.linked_to.startswith(prefix) else b.linked_to,
                parent=b.parent[len(prefix):] if b.parent and b.parent != name else None,
            ))
    constraints = [replace(c, block=c.block[len(prefix):]) for c in a.constraints if c.block.startswith(prefix)]
    names = tuple(n[len(prefix):] if n.startswith(prefix) else n for n in a.basis_names[lo:hi])
    inner_params = a.params.get("inner", {}) if isinstance(a.params.get("inner"), dict) else {}
    return Algebra(a.field, block.size, names, builder.build(), tuple(blocks), tuple(constraints),
                   inner_params.get("construction", "restricted"), inner_params.get("params", {}))


def extend_scalars(a: Algebra, big: FieldSpec) -> Algebra:
    """Base change of a prime-field algebra to an extension (or the same field)."""
    small = a.field
    conv = lambda x: embed_prime_field(big, small, x)  # noqa: E731
    structure = tuple((i, j, k, conv(c)) for i, j, k, c in a.structure)
    blocks = []
    for b in a.blocks:
        pairing = None
        if b.pairing is not None:
            pairing = Matrix(big, tuple(tuple(conv(x) for x in r) for r in b.pairing.entries))
        eig = conv(b.eigenvalue) if b.eigenvalue is not None else None
        blocks.append(replace(b, eigenvalue=eig, pairing=pairing))
    constraints = tuple(replace(c, basis=tuple(tuple(conv(x) for x in v) for v in c.basis)) for c in a.constraints)
    params = dict(a.params)
    params["base_field"] = str(small)
    return Algebra(big, a.dim, a.basis_names, structure, tuple(blocks), constraints, a.construction, params)


def format_vector(a: Algebra, v: Sequence) -> str:
    terms = []
    for i, c in enumerate(v):
        if c != a.field.zero:
            coeff = format_raw(a.field, c)
            terms.append(a.basis_names[i] if c == a.field.one else f"{coeff}*{a.basis_names[i]}")
    return " + ".join(terms) or "0"


def basis_vector(a: Algebra, i: int) -> tuple:
    return unit_vector(a.field, a.dim, i)
