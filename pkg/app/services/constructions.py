# app/services/constructions.py
"""Builders for the block-structured algebras.

Every builder validates its field-size bound and scalar parameters, lays the
basis out block by block and records block metadata (unit line, eigenvalues,
generator / generated / pairing-linked roles) for the enumeration in
``autgroup``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Any, Sequence

from app.core.errors import (
    BadEigenvalues,
    BadLambda,
    BadScalars,
    DegeneratePairing,
    DimensionMismatch,
    FieldTooSmall,
    PairingViolatesOrthogonality,
    TrivialGroup,
    UsageError,
    ZeroLambda,
)
from app.core.exactfield import FieldSpec, distinct_units, format_raw
from app.core.linalg import Matrix, Subspace, determinant, is_invertible
from app.models.algebra import Algebra, BlockInfo, BlockRole, StructureBuilder
from app.models.permutation import PermGroup
from app.services.algebra_ops import embed_blocks, embed_constraints
from app.services.graded import build_A, graded_basis, normalizes_subspace
from app.services.permgroups import group_params, line_normalizer
from app.utils.guard import field_at_least, require
from app.utils.math import merge_multisets, shuffle_sign, wedge_monomials

logger = logging.getLogger(__name__)


@dataclass
class ConstructionParams:
    """Optional explicit parameters; ``None`` means the canonical choice."""

    gamma: list | None = None
    delta: list | None = None
    mu: list | None = None
    lam: list | None = None
    alpha: Any = None
    zeta: Any = None
    Delta: Matrix | None = None
    Phi: Matrix | None = None
    variant: str = "standard"
    extra: dict = dc_field(default_factory=dict)


def _fmt(field: FieldSpec, values: Sequence) -> list[str]:
    return [format_raw(field, v) for v in values]


def _units(field: FieldSpec, values: Sequence | None, count: int, name: str) -> list:
    """Validated raw values: ``count`` pairwise distinct elements outside {0, 1}."""
    if values is None:
        return [s.raw for s in distinct_units(field, count)]
    raw = [field.normalize(v) for v in values]
    require(len(raw) == count, BadEigenvalues, f"{name} needs {count} values, got {len(raw)}",
            name=name, expected=count, got=len(raw))
    for v in raw:
        require(v not in (field.zero, field.one), BadEigenvalues, f"{name} contains 0 or 1",
                name=name, value=format_raw(field, v))
    require(len(set(raw)) == len(raw), BadEigenvalues, f"{name} has a repeated value",
            name=name, values=_fmt(field, raw))
    return raw


def _pairing(field: FieldSpec, matrix: Matrix | None, size: int, name: str) -> Matrix:
    if matrix is None:
        return Matrix.identity(field, size)
    if matrix.rows != size or matrix.cols != size:
        raise DimensionMismatch(f"{name} must be {size}x{size}, got {matrix.rows}x{matrix.cols}")
    if not is_invertible(matrix):
        raise DegeneratePairing(f"{name} is degenerate", witness={"pairing": name})
    return matrix


# ------------------------------------------------------------------ rigid

def rigid_algebra(s: int, field: FieldSpec, betas: Sequence | None = None) -> Algebra:
    """Algebra on e, e1..e_{s-1}: e left identity, e_i*e = beta_i e_i, e_i^2 = e_i, e_i e_j = 0."""
    if s < 1:
        raise UsageError(f"s must be at least 1, got {s}")
    field_at_least(field, s + 1, FieldTooSmall, "rigid algebra needs |F| >= s+1")
    beta = _units(field, betas, s - 1, "beta")
    builder = StructureBuilder(field, s)
    for j in range(s):
        builder.add(0, j, j, field.one)
    for i in range(1, s):
        builder.add(i, 0, i, beta[i - 1])
        builder.add(i, i, i, field.one)
    blocks = [BlockInfo("unit", 0, 1, BlockRole.UNIT_LINE, field.one)]
    blocks += [BlockInfo(f"line{i}", i, i + 1, BlockRole.PLAIN, beta[i - 1]) for i in range(1, s)]
    names = ("e",) + tuple(f"e{i}" for i in range(1, s))
    return Algebra(field, s, names, builder.build(), tuple(blocks),
                   construction="rigid", params={"s": s, "beta": _fmt(field, beta)})


# ------------------------------------------------------------------- B(U)

def exterior_B(n: int, field: FieldSpec) -> Algebra:
    """Wedge monomials of degrees 1..n with the wedge product, except b0*b0 = b0 for the top monomial."""
    if n < 1:
        raise UsageError(f"n must be at least 1, got {n}")
    monos = [m for i in range(1, n + 1) for m in wedge_monomials(n, i)]
    index = {m: i for i, m in enumerate(monos)}
    top = tuple(range(n))
    builder = StructureBuilder(field, len(monos))
    for p in monos:
        for q in monos:
            if len(p) + len(q) > n:
                continue
            sign = shuffle_sign(p, q)
            if sign:
                builder.add(index[p], index[q], index[tuple(sorted(p + q))],
                            field.one if sign > 0 else field.neg(field.one))
    builder.add(index[top], index[top], index[top], field.one)
    blocks = []
    lo = 0
    for i in range(1, n + 1):
        size = len(wedge_monomials(n, i))
        role = BlockRole.GENERATOR if i == 1 else BlockRole.GENERATED
        blocks.append(BlockInfo(f"W{i}", lo, lo + size, role))
        lo += size
    names = tuple("^".join(f"u{j + 1}" for j in m) for m in monos)
    return Algebra(field, len(monos), names, builder.build(), tuple(blocks),
                   construction="B", params={"n": n, "sign_convention": "lexicographic-shuffle"})


def exterior_extension(g: Matrix, n: int | None = None) -> Matrix:
    """Direct sum of the exterior powers of g on U, in the basis of ``exterior_B``."""
    n = g.rows if n is None else n
    f = g.field
    parts = []
    for i in range(1, n + 1):
        monos = wedge_monomials(n, i)
        cols = []
        for J in monos:
            cols.append([determinant(g.submatrix(I, J)) for I in monos])
        parts.append(Matrix.from_columns(f, cols))
    return Matrix.block_diagonal(f, parts)


# ------------------------------------------------------------------------ C

def algebra_C(L: Algebra, n: int, gammas: Sequence | None = None) -> Algebra:
    """<c> + L + B(U): c left identity, x*c = gamma per block, L and B(U) multiply inside themselves only."""
    field = L.field
    s = L.dim
    field_at_least(field, max(n + 3, s + 1), FieldTooSmall, "C needs |F| >= max(n+3, s+1)")
    gamma = _units(field, gammas, n + 1, "gamma")
    B = exterior_B(n, field)
    dim = 1 + s + B.dim
    builder = StructureBuilder(field, dim)
    builder.add(0, 0, 0, field.one)
    for j in range(1, dim):
        builder.add(0, j, j, field.one)
    for j in range(s):
        builder.add(1 + j, 0, 1 + j, gamma[0])
    lo = 1 + s
    for blk in B.blocks:
        degree = int(blk.name[1:])
        for j in blk.indices:
            builder.add(lo + j, 0, lo + j, gamma[degree])
    builder.embed(L, 1)
    builder.embed(B, lo)

    blocks = [BlockInfo("c", 0, 1, BlockRole.UNIT_LINE, field.one),
              BlockInfo("L", 1, 1 + s, BlockRole.PLAIN, gamma[0])]
    blocks += embed_blocks(L, 1, "L.", "L")
    for blk in B.blocks:
        degree = int(blk.name[1:])
        blocks.append(BlockInfo(blk.name, blk.lo + lo, blk.hi + lo, blk.role, gamma[degree]))
    names = ("c",) + tuple(f"L.{x}" for x in L.basis_names) + B.basis_names
    return Algebra(field, dim, names, builder.build(), tuple(blocks), tuple(embed_constraints(L, "L.")),
                   construction="C",
                   params={"s": s, "n": n, "gamma": _fmt(field, gamma),
                           "sign_convention": "lexicographic-shuffle",
                           "action": {"trivial": ["c", "L"], "exterior": [b.name for b in B.blocks]},
                           "inner": {"construction": L.construction, "params": L.params}})


# ------------------------------------------------------------------------ D

def algebra_D(L: Algebra, n: int, S: Subspace, r: int, gammas: Sequence | None = None,
              deltas: Sequence | None = None, phi: Matrix | None = None) -> Algebra:
    """<d> + A(V,S) + C(L,U,gamma) with V = L + U, tensor flavor.

    d is a left identity with x*d = delta_1 x on C and delta_{i+1} x on the
    degree-i block of A. V_A and V_C pair through Phi into <d> (both orders).
    """
    field = L.field
    s = L.dim
    v = s + n
    field_at_least(field, max(n + 3, s + 1, r + 3), FieldTooSmall, "D needs |F| >= max(n+3, s+1, r+3)")
    var_names = [f"l{i}" for i in range(s)] + [f"u{i + 1}" for i in range(n)]
    A = build_A(v, field, S, r, "tensor", var_names)
    C = algebra_C(L, n, gammas)
    top_full = S.is_full
    m = r if top_full else r + 1
    delta = _units(field, deltas, m, "delta")
    Phi = _pairing(field, phi, v, "Phi")
    for i in range(s):
        for j in range(s, v):
            if Phi[i, j] != field.zero or Phi[j, i] != field.zero:
                raise PairingViolatesOrthogonality(
                    "Phi must vanish between L_A and U_C (and U_A and L_C)",
                    witness={"entry": [i, j]},
                )
    phi_L = Phi.submatrix(range(s), range(s))
    phi_U = Phi.submatrix(range(s, v), range(s, v))
    _pairing(field, phi_L, s, "Phi on L")
    _pairing(field, phi_U, n, "Phi on U")

    a_off = 1
    c_off = 1 + A.dim
    dim = c_off + C.dim
    builder = StructureBuilder(field, dim)
    builder.add(0, 0, 0, field.one)
    for j in range(1, dim):
        builder.add(0, j, j, field.one)
    for j in range(C.dim):
        builder.add(c_off + j, 0, c_off + j, delta[0])
    for blk in A.blocks:
        degree = int(blk.name[1:])
        for j in blk.indices:
            builder.add(a_off + j, 0, a_off + j, delta[degree])
    builder.embed(A, a_off)
    builder.embed(C, c_off)
    # V_C is C's basis 1..v (L block then wedge degree 1), V_A is A's degree-1 block
    for i in range(v):
        for j in range(v):
            c = Phi[i, j]
            if c != field.zero:
                builder.add(a_off + i, c_off + 1 + j, 0, c)
                builder.add(c_off + 1 + j, a_off + i, 0, c)

    blocks = [BlockInfo("d", 0, 1, BlockRole.UNIT_LINE, field.one)]
    for blk in A.blocks:
        degree = int(blk.name[1:])
        blocks.append(BlockInfo(blk.name, blk.lo + a_off, blk.hi + a_off, blk.role, delta[degree]))
    blocks.append(BlockInfo("A1.L", a_off, a_off + s, BlockRole.PAIRING_LINKED, None, "C.L", phi_L, "A1"))
    blocks.append(BlockInfo("A1.U", a_off + s, a_off + v, BlockRole.PAIRING_LINKED, None, "C.W1", phi_U, "A1"))
    blocks.append(BlockInfo("C", c_off, dim, BlockRole.PLAIN, delta[0]))
    blocks += embed_blocks(C, c_off, "C.", "C")
    names = ("d",) + tuple(f"A.{x}" for x in A.basis_names) + tuple(f"C.{x}" for x in C.basis_names)
    constraints = tuple(A.constraints) + tuple(embed_constraints(C, "C."))
    return Algebra(field, dim, names, builder.build(), tuple(blocks), constraints,
                   construction="D",
                   params={"s": s, "n": n, "r": r, "flavor": "tensor",
                           "gamma": C.params["gamma"], "delta": _fmt(field, delta),
                           "Phi": Phi.to_text(),
                           "S": [_fmt(field, row) for row in S.basis],
                           "inner": {"construction": L.construction, "params": L.params}})


# ------------------------------------------------------------------- wrap

def wrap_simple(R: Algebra, alpha=None, zeta=None, delta: Matrix | None = None,
                variant: str = "standard") -> Algebra:
    """<e> + Z + R with Z a zero algebra paired to R by Delta.

    e is a left identity, x*e = zeta x on Z and alpha x on R, z*a = Delta(z, a) e,
    a*z = 0 and Z*Z = 0.
    """
    field = R.field
    k = R.dim
    if variant == "standard":
        field_at_least(field, 4, FieldTooSmall, "wrapping needs |F| >= 4")
        if alpha is None or zeta is None:
            defaults = [u.raw for u in distinct_units(field, 2)]
            alpha = defaults[0] if alpha is None else alpha
            zeta = defaults[1] if zeta is None else zeta
        a_raw, z_raw = field.normalize(alpha), field.normalize(zeta)
        require(z_raw not in (field.zero, field.one), BadScalars, "zeta must avoid 0 and 1",
                zeta=format_raw(field, z_raw))
    elif variant == "zeta_zero":
        field_at_least(field, 3, FieldTooSmall, "wrapping with zeta = 0 needs |F| >= 3")
        if alpha is None:
            alpha = distinct_units(field, 1)[0].raw
        a_raw = field.normalize(alpha)
        z_raw = field.normalize(0 if zeta is None else zeta)
        require(z_raw == field.zero, BadScalars, "the zeta_zero variant needs zeta = 0",
                zeta=format_raw(field, z_raw))
    else:
        raise UsageError(f"unknown wrap variant {variant!r}")
    require(a_raw not in (field.zero, field.one), BadScalars, "alpha must avoid 0 and 1",
            alpha=format_raw(field, a_raw))
    require(a_raw != z_raw, BadScalars, "alpha and zeta must differ", alpha=format_raw(field, a_raw))
    Delta = _pairing(field, delta, k, "Delta")

    z_off, r_off = 1, 1 + k
    dim = 1 + 2 * k
    builder = StructureBuilder(field, dim)
    builder.add(0, 0, 0, field.one)
    for j in range(1, dim):
        builder.add(0, j, j, field.one)
    for j in range(k):
        if z_raw != field.zero:
            builder.add(z_off + j, 0, z_off + j, z_raw)
        builder.add(r_off + j, 0, r_off + j, a_raw)
    builder.embed(R, r_off)
    for i in range(k):
        for j in range(k):
            c = Delta[i, j]
            if c != field.zero:
                builder.add(z_off + i, r_off + j, 0, c)

    blocks = [BlockInfo("e", 0, 1, BlockRole.UNIT_LINE, field.one),
              BlockInfo("Z", z_off, r_off, BlockRole.PAIRING_LINKED, z_raw, "R", Delta),
              BlockInfo("R", r_off, dim, BlockRole.PLAIN, a_raw)]
    blocks += embed_blocks(R, r_off, "R.", "R")
    names = ("e",) + tuple(f"z{i + 1}" for i in range(k)) + tuple(f"R.{x}" for x in R.basis_names)
    return Algebra(field, dim, names, builder.build(), tuple(blocks), tuple(embed_constraints(R, "R.")),
                   construction="wrap",
                   params={"alpha": format_raw(field, a_raw), "zeta": format_raw(field, z_raw),
                           "variant": variant, "Delta": Delta.to_text(),
                           "inner": {"construction": R.construction, "params": R.params}})


# --------------------------------------------------------------- E_n, E

def split_etale(n: int, field: FieldSpec) -> Algebra:
    """E_n: n orthogonal idempotents, one plain block (the trivial partition)."""
    builder = StructureBuilder(field, n)
    for i in range(n):
        builder.add(i, i, i, field.one)
    return Algebra(field, n, tuple(f"e{i + 1}" for i in range(n)), builder.build(),
                   (BlockInfo("En", 0, n, BlockRole.PLAIN),), construction="etale", params={"n": n})


def zero_algebra(n: int, field: FieldSpec) -> Algebra:
    return Algebra(field, n, tuple(f"z{i + 1}" for i in range(n)), (), construction="zero", params={"n": n})


def lambda_ratios_distinct(field: FieldSpec, lam: Sequence) -> bool:
    ratios = [field.div(lam[i], lam[j]) for i in range(len(lam)) for j in range(len(lam)) if i != j]
    return len(set(ratios)) == len(ratios)


def choose_lambda(n: int, field: FieldSpec, search_cap: int = 64) -> list:
    """First nonzero lambda in canonical order with all ordered ratios lambda_i/lambda_j distinct."""
    candidates = []
    for x in field.nonzero():
        candidates.append(x)
        if len(candidates) >= (field.order - 1 if field.is_finite else search_cap):
            break

    def extend(prefix: list) -> list | None:
        if len(prefix) == n:
            return prefix
        for x in candidates:
            trial = prefix + [x]
            if lambda_ratios_distinct(field, trial):
                found = extend(trial)
                if found is not None:
                    return found
        return None

    found = extend([])
    if found is None:
        raise FieldTooSmall(f"no lambda of length {n} with distinct ratios in {field}",
                            witness={"n": n, "field_order": field.order, "constraint": "lambda"})
    return found


def invariant_f(G: PermGroup, lam: Sequence, field: FieldSpec) -> tuple:
    """prod over sigma in G of sum lambda_i e_{sigma(i)}, in the Sym^{|G|} monomial basis."""
    lam = [field.normalize(x) for x in lam]
    if len(lam) != G.degree:
        raise BadLambda(f"lambda has {len(lam)} entries for a group of degree {G.degree}")
    if any(x == field.zero for x in lam):
        raise ZeroLambda("lambda entries must be nonzero", witness={"lambda": _fmt(field, lam)})
    poly: dict[tuple, Any] = {(): field.one}
    for sigma in G.elements:
        form = [field.zero] * G.degree
        for i, x in enumerate(lam):
            form[sigma(i)] = x
        nxt: dict[tuple, Any] = {}
        for m, c in poly.items():
            for t, x in enumerate(form):
                key = merge_multisets(m, (t,))
                nxt[key] = field.add(nxt.get(key, field.zero), field.mul(c, x))
        poly = {m: c for m, c in nxt.items() if c != field.zero}
    basis = graded_basis(G.degree, G.order, "symmetric")
    out = [field.zero] * basis.size
    for m, c in poly.items():
        out[basis.index[m]] = c
    return tuple(out)


def lambda_for_group(G: PermGroup, field: FieldSpec) -> tuple[list, str]:
    """A lambda whose invariant line has normalizer exactly G in S_n, and the route used.

    Route "ratios": the first lambda with distinct ratios. Route "normalizer":
    when no such lambda exists, the first lambda (lambda_1 = 1) in canonical
    order whose invariant line has normalizer G.
    """
    try:
        lam = choose_lambda(G.degree, field)
        return lam, "ratios"
    except FieldTooSmall:
        logger.info("No ratio-distinct lambda for n=%d over %s; searching by normalizer", G.degree, field)
    units = list(field.nonzero()) if field.is_finite else []
    for tail in product(units, repeat=G.degree - 1):
        lam = [field.one, *tail]
        f = invariant_f(G, lam, field)
        if line_normalizer(G.degree, field, f, G.order) == G:
            return lam, "normalizer"
    raise FieldTooSmall(f"no lambda in {field} gives an invariant line with normalizer G",
                        witness={"constraint": "lambda", "field_order": field.order})


def validate_lambda(G: PermGroup, lam: Sequence, field: FieldSpec) -> str:
    raw = [field.normalize(x) for x in lam]
    f = invariant_f(G, raw, field)
    if lambda_ratios_distinct(field, raw):
        return "ratios"
    if line_normalizer(G.degree, field, f, G.order) == G:
        return "normalizer"
    raise BadLambda("lambda has repeated ratios and its invariant line is normalized by more than G",
                    witness={"lambda": _fmt(field, raw)})


def algebra_E(G: PermGroup, field: FieldSpec, lam: Sequence | None = None, mu: Sequence | None = None) -> Algebra:
    """<e> + A(V, <f>) + E_n with V = vect(E_n), symmetric flavor, r = |G|.

    x*e = mu_1 x on E_n and mu_{i+1} x on the degree-i block of A; x*y = y*x = (x, y) e
    for x in V_A and y in E_n.
    """
    r, n = G.order, G.degree
    if r < 2:
        raise TrivialGroup("the trivial group is realized through the rigid algebra", witness={"order": r})
    field_at_least(field, r + 3, FieldTooSmall, "mu needs |G|+1 distinct units outside {0, 1}: |F| >= |G|+3")
    if lam is None:
        lam, route = lambda_for_group(G, field)
    else:
        route = validate_lambda(G, lam, field)
    lam = [field.normalize(x) for x in lam]
    f = invariant_f(G, lam, field)
    S = Subspace.span(field, len(f), [f])
    A = build_A(n, field, S, r, "symmetric", [f"v{i + 1}" for i in range(n)])
    mus = _units(field, mu, r + 1, "mu")

    a_off = 1
    e_off = 1 + A.dim
    dim = e_off + n
    builder = StructureBuilder(field, dim)
    builder.add(0, 0, 0, field.one)
    for j in range(1, dim):
        builder.add(0, j, j, field.one)
    for blk in A.blocks:
        degree = int(blk.name[1:])
        for j in blk.indices:
            builder.add(a_off + j, 0, a_off + j, mus[degree])
    for i in range(n):
        builder.add(e_off + i, 0, e_off + i, mus[0])
        builder.add(e_off + i, e_off + i, e_off + i, field.one)
        builder.add(a_off + i, e_off + i, 0, field.one)
        builder.add(e_off + i, a_off + i, 0, field.one)
    builder.embed(A, a_off)

    blocks = [BlockInfo("e", 0, 1, BlockRole.UNIT_LINE, field.one)]
    for blk in A.blocks:
        degree = int(blk.name[1:])
        blocks.append(BlockInfo(blk.name, blk.lo + a_off, blk.hi + a_off, blk.role, mus[degree]))
    blocks.append(BlockInfo("En", e_off, dim, BlockRole.PAIRING_LINKED, mus[0], "A1", Matrix.identity(field, n)))
    names = ("e",) + tuple(f"A.{x}" for x in A.basis_names) + tuple(f"E.e{i + 1}" for i in range(n))
    return Algebra(field, dim, names, builder.build(), tuple(blocks), tuple(A.constraints),
                   construction="E",
                   params={"group": group_params(G),
                           "lambda": _fmt(field, lam), "lambda_route": route,
                           "mu": _fmt(field, mus), "r": r})


# ------------------------------------------------------- independent sides

def special_linear(n: int, field: FieldSpec) -> list[Matrix]:
    """SL(n, q) in row-major code order."""
    if not field.is_finite:
        raise UsageError("SL enumeration needs a finite field")
    q = field.order
    found = []
    for entries in product(range(q), repeat=n * n):
        g = Matrix(field, tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n)))
        if determinant(g) == field.one:
            found.append(g)
    return found


def sl_normalizer(s: int, n: int, S: Subspace, r: int, field: FieldSpec) -> list[Matrix]:
    """{g in SL(U) : (id_L + g) S = S} on the degree-r tensor piece of V = L + U."""
    ident = Matrix.identity(field, s)
    found = [g for g in special_linear(n, field)
             if normalizes_subspace(Matrix.block_diagonal(field, [ident, g]), S, r, "tensor")]
    logger.debug("SL normalizer of S: %d elements", len(found))
    return found
