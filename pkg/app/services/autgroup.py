# app/services/autgroup.py
"""Automorphism groups of block-structured algebras.

The enumeration is complete only after ``verify_block_hypotheses`` succeeds:
automorphisms then fix the unit, preserve every declared block and are
determined by their restrictions to the free leaves (generator and plain
blocks). Generated blocks follow from products, pairing-linked blocks from
the pairing, and every surviving candidate is re-checked with
``is_automorphism``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from math import prod
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from app.config import settings
from app.core.errors import (
    AutAlgError,
    BlockMetadataMismatch,
    BudgetExceeded,
    DecompositionFails,
    DegeneratePairing,
    HypothesesNotVerified,
    Mismatch,
    NoUniqueLeftIdentity,
    NotGenerated,
    SingularMatrix,
    UsageError,
)
from app.core.exactfield import format_raw, parse_raw
from app.core.linalg import Matrix, Subspace, inverse, is_invertible, solve_affine
from app.models.algebra import FREE_ROLES, Algebra, BlockInfo, BlockRole
from app.models.permutation import Permutation
from app.services.algebra_ops import (
    eigenblock_decomposition,
    first_violation,
    is_automorphism,
    multiply_sparse,
    restrict_to_block,
    subalgebra_left_identity,
    unique_left_identity,
)
from app.services.constructions import exterior_extension, sl_normalizer, special_linear
from app.services.graded import extension_on_blocks, graded_basis, normalizes_subspace
from app.services.observability import trace_operation
from app.services.permgroups import group_from_params, perm_matrix
from app.utils.math import gl_order
from app.workers import kernels
from app.workers.pool import run_partitioned

logger = logging.getLogger(__name__)


# ------------------------------------------------------------ verification

@dataclass(frozen=True)
class VerifiedBlocks:
    unit: tuple | None
    blocks: tuple[BlockInfo, ...]
    trivial_partition: bool = False


def _check_partition(a: Algebra, name: str | None, lo: int, hi: int) -> None:
    children = a.children(name)
    pos = lo
    for c in children:
        if c.lo != pos:
            raise BlockMetadataMismatch(
                f"blocks under {name or 'the root'} do not partition [{lo}, {hi})",
                witness={"parent": name, "gap_at": pos, "next_block": c.name},
            )
        pos = c.hi
        if not a.is_leaf(c.name):
            _check_partition(a, c.name, c.lo, c.hi)
    if pos != hi:
        raise BlockMetadataMismatch(f"blocks under {name or 'the root'} stop at {pos}, expected {hi}",
                                    witness={"parent": name, "end": pos, "expected": hi})


def _unit_of(a: Algebra, name: str | None, top_unit: tuple) -> tuple:
    """Unit of the node ``name``: its unit-line child (the global unit at the root)."""
    if name is None:
        return top_unit
    for c in a.children(name):
        if c.role == BlockRole.UNIT_LINE:
            vec = [a.field.zero] * a.dim
            vec[c.lo] = a.field.one
            return tuple(vec)
    raise BlockMetadataMismatch(f"block {name} has no unit line", witness={"block": name})


def _lowest_common_ancestor(a: Algebra, x: str, y: str) -> str | None:
    ax = a.ancestors(x)
    ay = set(a.ancestors(y))
    for name in ax:
        if name in ay:
            return name
    return None


def _verify_node(a: Algebra, parent: str | None, unit: tuple) -> None:
    f = a.field
    children = a.children(parent)
    units = [c for c in children if c.role == BlockRole.UNIT_LINE]
    if len(units) != 1 or units[0].size != 1:
        raise BlockMetadataMismatch(f"{parent or 'the root'} needs exactly one unit line",
                                    witness={"parent": parent, "unit_lines": [u.name for u in units]})
    u = units[0]
    if any(unit[i] != (f.one if i == u.lo else f.zero) for i in range(a.dim)):
        raise BlockMetadataMismatch(f"declared unit line {u.name} is not the left identity",
                                    witness={"block": u.name})
    others = [c for c in children if c is not u]
    declared = [c for c in others if c.eigenvalue is not None]
    seen: dict = {}
    for c in declared:
        if c.eigenvalue == f.one:
            raise DecompositionFails(f"block {c.name} declares eigenvalue 1",
                                     witness={"defect": "unit-collision", "block": c.name})
        if c.eigenvalue in seen:
            raise DecompositionFails(
                f"blocks {seen[c.eigenvalue]} and {c.name} share the eigenvalue {format_raw(f, c.eigenvalue)}",
                witness={"defect": "collision", "blocks": [seen[c.eigenvalue], c.name],
                         "eigenvalue": format_raw(f, c.eigenvalue)},
            )
        seen[c.eigenvalue] = c.name
    lo = min(c.lo for c in children)
    hi = max(c.hi for c in children)
    computed = eigenblock_decomposition(a, unit, range(lo, hi), allow_zero=True)
    if len(computed) != len(others):
        raise BlockMetadataMismatch(
            f"{len(computed)} eigenspaces under {parent or 'the root'} but {len(others)} declared blocks",
            witness={"parent": parent, "computed": [format_raw(f, b.eigenvalue) for b in computed]},
        )
    for c in others:
        span = Subspace.coordinate(f, a.dim, c.indices)
        match = next((b for b in computed if b.space == span), None)
        if match is None or (c.eigenvalue is not None and match.eigenvalue != c.eigenvalue):
            raise BlockMetadataMismatch(
                f"block {c.name} is not an eigenspace of right multiplication by the unit",
                witness={"block": c.name,
                         "declared": format_raw(f, c.eigenvalue) if c.eigenvalue is not None else None,
                         "computed": format_raw(f, match.eigenvalue) if match else None},
            )
    for c in others:
        if a.is_leaf(c.name):
            continue
        grand = a.children(c.name)
        if any(g.role == BlockRole.UNIT_LINE for g in grand):
            _verify_node(a, c.name, subalgebra_left_identity(a, c))
        elif any(g.role != BlockRole.PAIRING_LINKED for g in grand):
            raise BlockMetadataMismatch(f"block {c.name} has no unit line and splits only through pairings",
                                        witness={"block": c.name})


def _verify_pairings(a: Algebra, top_unit: tuple) -> None:
    f = a.field
    for x in a.blocks:
        if x.role != BlockRole.PAIRING_LINKED:
            continue
        if x.linked_to is None or x.pairing is None or not a.has_block(x.linked_to):
            raise BlockMetadataMismatch(f"pairing-linked block {x.name} lacks its partner",
                                        witness={"block": x.name})
        y = a.block(x.linked_to)
        p = x.pairing
        if p.rows != x.size or p.cols != y.size or not is_invertible(p):
            raise DegeneratePairing(f"pairing of {x.name} with {y.name} is not square and invertible",
                                    witness={"block": x.name, "linked_to": y.name})
        unit = _unit_of(a, _lowest_common_ancestor(a, x.name, y.name), top_unit)
        u = next(i for i, c in enumerate(unit) if c != f.zero)
        partners = [x]
        if x.parent is not None and not any(c.role == BlockRole.UNIT_LINE for c in a.children(x.parent)):
            partners = a.children(x.parent)
        for other in partners:
            ylink = a.block(other.linked_to)
            for i in x.indices:
                for j in ylink.indices:
                    got = dict(a.table.get((i, j), ()))
                    want = {u: p[i - x.lo, j - y.lo]} if other.name == x.name else {}
                    want = {k: v for k, v in want.items() if v != f.zero}
                    if got != want:
                        raise BlockMetadataMismatch(
                            f"product of {x.name} with {ylink.name} is not the declared pairing",
                            witness={"pair": [a.basis_names[i], a.basis_names[j]]},
                        )


def verify_block_hypotheses(a: Algebra) -> VerifiedBlocks:
    """Check that the declared blocks are preserved by every automorphism."""
    if not a.blocks:
        raise HypothesesNotVerified("the algebra carries no block metadata", witness={"blocks": 0})
    _check_partition(a, None, 0, a.dim)
    top = a.top_blocks
    if len(top) == 1 and a.is_leaf(top[0].name) and top[0].role in FREE_ROLES:
        return VerifiedBlocks(None, a.blocks, trivial_partition=True)
    unit = unique_left_identity(a)
    _verify_node(a, None, unit)
    _verify_pairings(a, unit)
    logger.debug("Block hypotheses verified for %s (dim %d, %d blocks)", a.construction, a.dim, len(a.blocks))
    return VerifiedBlocks(unit, a.blocks)


# -------------------------------------------------------- generation plans

Tree = int | tuple


@dataclass(frozen=True)
class GenerationPlan:
    generator_blocks: tuple[str, ...]
    expressions: dict[int, tuple[tuple[object, Tree], ...]] = dc_field(default_factory=dict)
    depends: dict[str, tuple[str, ...]] = dc_field(default_factory=dict)


def _tree_leaves(t: Tree) -> Iterable[int]:
    if isinstance(t, int):
        yield t
    else:
        for s in t:
            yield from _tree_leaves(s)


def evaluate_tree(a: Algebra, t: Tree, cols, memo: dict) -> dict:
    if t in memo:
        return memo[t]
    if isinstance(t, int):
        value = cols[t]
    else:
        value = multiply_sparse(a, evaluate_tree(a, t[0], cols, memo), evaluate_tree(a, t[1], cols, memo))
    memo[t] = value
    return value


def generation_plan(a: Algebra) -> GenerationPlan:
    """Express each generated basis vector through products of generator basis vectors."""
    f = a.field
    gens = [b for b in a.blocks if b.role == BlockRole.GENERATOR]
    targets = [b for b in a.blocks if b.role == BlockRole.GENERATED]
    names = tuple(b.name for b in gens)
    if not targets:
        return GenerationPlan(names)
    wanted = [i for b in targets for i in b.indices]
    ident = [{i: f.one} for i in range(a.dim)]

    kept: list[tuple[Tree, dict]] = []
    span = Subspace.zero(f, a.dim)

    def offer(tree: Tree, value: dict) -> bool:
        nonlocal span
        if not value:
            return False
        vec = tuple(value.get(i, f.zero) for i in range(a.dim))
        if span.contains(vec):
            return False
        span = span + Subspace.span(f, a.dim, [vec])
        kept.append((tree, value))
        return True

    for b in gens:
        for i in b.indices:
            offer(i, ident[i])
    fresh = list(range(len(kept)))
    memo: dict = {}
    while fresh and not all(span.contains(ident_vec(f, a.dim, t)) for t in wanted):
        new = []
        snapshot = list(kept)
        for x in range(len(snapshot)):
            for y in range(len(snapshot)):
                if x not in fresh and y not in fresh:
                    continue
                tree = (snapshot[x][0], snapshot[y][0])
                if offer(tree, evaluate_tree(a, tree, ident, memo)):
                    new.append(len(kept) - 1)
        fresh = new

    unreached = [a.basis_names[t] for t in wanted if not span.contains(ident_vec(f, a.dim, t))]
    if unreached:
        raise NotGenerated("generated blocks are not reached by products of the generator blocks",
                           witness={"unreached": unreached})
    m = Matrix.from_columns(f, [tuple(v.get(i, f.zero) for i in range(a.dim)) for _, v in kept])
    expressions = {}
    for t in wanted:
        sol = solve_affine(m, ident_vec(f, a.dim, t))
        expressions[t] = tuple((c, kept[n][0]) for n, c in enumerate(sol.particular) if c != f.zero)
    depends = {}
    for b in targets:
        leaves = set()
        for t in b.indices:
            for _, tree in expressions[t]:
                for i in _tree_leaves(tree):
                    leaves.add(a.leaf_of(i).name)
        depends[b.name] = tuple(sorted(leaves))
    logger.debug("Generation plan: %d targets from %d products", len(wanted), len(kept))
    return GenerationPlan(names, expressions, depends)


def ident_vec(field, n: int, i: int) -> tuple:
    v = [field.zero] * n
    v[i] = field.one
    return tuple(v)


# ------------------------------------------------------------- enumeration

@dataclass(frozen=True)
class AutomorphismSet:
    elements: tuple[Matrix, ...]
    candidates: int
    complete: bool
    matched_form: str | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, g: Matrix) -> bool:
        return g in set(self.elements)


def _canonical(mats: Iterable[Matrix]) -> tuple[Matrix, ...]:
    unique = {m.entries: m for m in mats}
    return tuple(unique[k] for k in sorted(unique))


def linked_map(h: Matrix, pairing: Matrix) -> Matrix:
    """Map forced on a block paired with P against a block mapped by h: (P h^-1 P^-1)^T."""
    return (pairing @ inverse(h) @ inverse(pairing)).transpose()


def _local_pairs(a: Algebra, leaf: BlockInfo) -> list[tuple[int, int]]:
    """Pairs inside ``leaf`` whose product stays inside it (checkable from the leaf map alone)."""
    out = []
    for i in leaf.indices:
        for j in leaf.indices:
            if all(leaf.lo <= k < leaf.hi for k, _ in a.table.get((i, j), ())):
                out.append((i, j))
    return out


def _leaf_columns(leaf: BlockInfo, g: Matrix) -> dict[int, dict]:
    zero = g.field.zero
    return {leaf.lo + j: {leaf.lo + i: g.entries[i][j] for i in range(g.rows) if g.entries[i][j] != zero}
            for j in range(g.cols)}


def _constraint_subspace(a: Algebra, c) -> Subspace:
    size = graded_basis(a.block(c.block).size, c.degree, c.flavor).size
    return Subspace.span(a.field, size, c.basis)


@dataclass
class _Enumerator:
    """Resolves one tuple of free-leaf maps into a full candidate matrix."""

    algebra: Algebra
    free: list[str]
    candidates: list[list[Matrix]]
    steps: list[tuple[str, str]]
    plan: GenerationPlan
    local: dict[str, list[tuple[int, int]]]
    constraints: dict[str, list[tuple[Subspace, int, str]]]

    def decode(self, index: int) -> list[int]:
        out = []
        for cands in reversed(self.candidates):
            index, r = divmod(index, len(cands))
            out.append(r)
        return out[::-1]

    def resolve(self, index: int) -> Matrix | None:
        a = self.algebra
        f = a.field
        maps: dict[str, Matrix] = {}
        cols: dict[int, dict] = {}
        for name, cands, pick in zip(self.free, self.candidates, self.decode(index)):
            maps[name] = cands[pick]
            cols.update(_leaf_columns(a.block(name), cands[pick]))
        memo: dict = {}
        for op, name in self.steps:
            block = a.block(name)
            if op == "unit":
                maps[name] = Matrix.identity(f, 1)
                cols.update(_leaf_columns(block, maps[name]))
            elif op == "compose":
                maps[name] = Matrix.block_diagonal(f, [maps[c.name] for c in a.children(name)])
            elif op == "link":
                try:
                    maps[name] = linked_map(maps[block.linked_to], block.pairing)
                except SingularMatrix:
                    return None
                cols.update(_leaf_columns(block, maps[name]))
            elif op == "generate":
                columns = []
                for t in block.indices:
                    value: dict = {}
                    for c, tree in self.plan.expressions[t]:
                        for k, v in evaluate_tree(a, tree, cols, memo).items():
                            value[k] = f.add(value.get(k, f.zero), f.mul(c, v))
                    local = [f.zero] * block.size
                    for k, v in value.items():
                        if v == f.zero:
                            continue
                        if not block.lo <= k < block.hi:
                            return None
                        local[k - block.lo] = v
                    columns.append(local)
                maps[name] = Matrix.from_columns(f, columns)
                cols.update(_leaf_columns(block, maps[name]))
            elif op == "local":
                if first_violation(a, cols, self.local[name]) is not None:
                    return None
            elif op == "constraint":
                for s, degree, flavor in self.constraints[name]:
                    if not normalizes_subspace(maps[name], s, degree, flavor):
                        return None
        g = Matrix.block_diagonal(f, [maps[b.name] for b in a.top_blocks])
        return g if is_automorphism(a, g) else None


def _enumerate_chunk(lo: int, hi: int, enumerator: _Enumerator) -> list[Matrix]:
    found = []
    for index in range(lo, hi):
        g = enumerator.resolve(index)
        if g is not None:
            found.append(g)
    return found


def _compile_steps(a: Algebra, plan: GenerationPlan, free: set[str],
                   constrained: set[str]) -> list[tuple[str, str]]:
    known = set(free)
    steps: list[tuple[str, str]] = []
    pending = [b for b in a.blocks if b.name not in free]
    for b in list(pending):
        if b.role == BlockRole.UNIT_LINE and a.is_leaf(b.name):
            steps.append(("unit", b.name))
            known.add(b.name)
            pending.remove(b)

    def ready(b: BlockInfo) -> str | None:
        if not a.is_leaf(b.name):
            return "compose" if all(c.name in known for c in a.children(b.name)) else None
        if b.role == BlockRole.PAIRING_LINKED:
            return "link" if b.linked_to in known else None
        if b.role == BlockRole.GENERATED:
            return "generate" if all(d in known for d in plan.depends.get(b.name, ())) else None
        return None

    def after(name: str) -> None:
        if name in constrained:
            steps.append(("constraint", name))

    while pending:
        options = [(b, ready(b)) for b in pending]
        options = [(b, op) for b, op in options if op is not None]
        if not options:
            raise HypothesesNotVerified("block maps cannot be derived from the free blocks",
                                        witness={"unresolved": [b.name for b in pending]})
        b, op = min(options, key=lambda o: (-len(a.ancestors(o[0].name)), o[0].lo))
        steps.append((op, b.name))
        known.add(b.name)
        pending.remove(b)
        if op in ("link", "generate"):
            steps.append(("local", b.name))
        after(b.name)
    return steps


def _prepared_constraint(a: Algebra, c) -> tuple:
    s = _constraint_subspace(a, c)
    basis = graded_basis(a.block(c.block).size, c.degree, c.flavor)
    return (basis.monomials, c.flavor, [list(r) for r in s.basis], list(s.pivots))


def leaf_candidates(a: Algebra, leaf: BlockInfo, workers: int | None = None) -> list[Matrix]:
    """Invertible maps on a free leaf passing its subspace constraints and local products."""
    f = a.field
    k, q = leaf.size, f.order
    prepared = [_prepared_constraint(a, c) for c in a.constraints if c.block == leaf.name]
    codes = run_partitioned(kernels.scan_leaf_chunk, kernels.code_space(q, k), workers,
                            field=f, k=k, constraints=prepared)
    pairs = _local_pairs(a, leaf)
    out = []
    for code in codes:
        g = Matrix(f, kernels.code_to_entries(code, q, k))
        if k > kernels.LEIBNIZ_MAX and not is_invertible(g):
            continue
        if pairs and first_violation(a, _leaf_columns(leaf, g), pairs) is not None:
            continue
        out.append(g)
    logger.debug("Leaf %s: %d of %d candidate maps kept", leaf.name, len(out), gl_order(k, q))
    return out


def _build_enumerator(a: Algebra, plan: GenerationPlan, workers: int | None = None) -> _Enumerator:
    free = [b for b in a.leaves if b.role in FREE_ROLES]
    free_names = {b.name for b in free}
    constrained = {c.block for c in a.constraints}
    return _Enumerator(
        algebra=a,
        free=[b.name for b in free],
        candidates=[leaf_candidates(a, b, workers) for b in free],
        steps=_compile_steps(a, plan, free_names, constrained - free_names),
        plan=plan,
        local={b.name: _local_pairs(a, b) for b in a.leaves},
        constraints={name: [(_constraint_subspace(a, c), c.degree, c.flavor)
                            for c in a.constraints if c.block == name] for name in constrained},
    )


def candidate_count(a: Algebra) -> int:
    if not a.field.is_finite:
        raise UsageError("automorphism enumeration needs a finite field")
    return prod(gl_order(b.size, a.field.order) for b in a.leaves if b.role in FREE_ROLES)


def enumerate_automorphisms(a: Algebra, plan: GenerationPlan | None = None, budget: int | None = None,
                            workers: int | None = None, force: bool = False) -> AutomorphismSet:
    """All automorphisms of ``a`` under verified block hypotheses."""
    budget = settings.BUDGET if budget is None else budget
    try:
        verify_block_hypotheses(a)
        plan = plan or generation_plan(a)
    except (DecompositionFails, NoUniqueLeftIdentity, BlockMetadataMismatch, NotGenerated,
            DegeneratePairing) as exc:
        raise HypothesesNotVerified(f"block hypotheses fail: {exc.message}",
                                    witness={"cause": exc.code, "detail": exc.witness}) from exc
    count = candidate_count(a)
    if count > budget and not force:
        raise BudgetExceeded(f"{count} candidate tuples exceed the budget of {budget}",
                             witness={"candidates": count, "budget": budget})
    for leaf in a.leaves:
        if leaf.role in FREE_ROLES:
            kernels.code_space(a.field.order, leaf.size)
    with trace_operation("enumerate_automorphisms", construction=a.construction, dim=a.dim, candidates=count):
        enumerator = _build_enumerator(a, plan, workers)
        total = prod(len(c) for c in enumerator.candidates)
        found = run_partitioned(_enumerate_chunk, total, workers, chunk=max(1, settings.BATCH_SIZE // 64),
                                enumerator=enumerator)
    logger.info("Enumerated %d automorphisms from %d candidate tuples (%d after leaf filters)",
                len(found), count, total)
    return AutomorphismSet(_canonical(found), count, complete=True)


def brute_force_automorphisms(a: Algebra, workers: int | None = None, budget: int | None = None) -> AutomorphismSet:
    """Unrestricted search over all d x d matrices; the oracle for small algebras."""
    budget = settings.BUDGET if budget is None else budget
    if not a.field.is_finite:
        raise UsageError("brute force needs a finite field")
    q, d = a.field.order, a.dim
    total = q ** (d * d)
    if total > budget:
        raise BudgetExceeded(f"{total} matrices exceed the budget of {budget}",
                             witness={"candidates": total, "budget": budget})
    kernels.code_space(q, d)
    structure = [(i, j, k, c) for i, j, k, c in a.structure]
    with trace_operation("brute_force_automorphisms", dim=d, candidates=total):
        codes = run_partitioned(kernels.brute_force_chunk, total, workers, field=a.field, d=d, structure=structure)
    found = []
    for code in codes:
        g = Matrix(a.field, kernels.code_to_entries(code, q, d))
        if is_automorphism(a, g):
            found.append(g)
    return AutomorphismSet(_canonical(found), total, complete=True)


def sample_automorphisms(a: Algebra, rounds: int | None = None, seed: int = 0) -> AutomorphismSet:
    """Sound but incomplete: identity plus automorphisms hit by random candidates, closed under products."""
    rounds = settings.SAMPLED_ROUNDS if rounds is None else rounds
    f = a.field
    rng = np.random.default_rng(seed)
    found = {Matrix.identity(f, a.dim)}
    try:
        if not f.is_finite:
            raise UsageError("structured sampling needs a finite field")
        verify_block_hypotheses(a)
        enumerator = _build_enumerator(a, generation_plan(a))
        total = prod(len(c) for c in enumerator.candidates)
        draw = lambda: enumerator.resolve(int(rng.integers(total))) if total else None  # noqa: E731
    except AutAlgError as exc:
        logger.info("Sampling without block structure: %s", exc)

        def draw():
            rows = rng.integers(f.order, size=(a.dim, a.dim)) if f.is_finite else rng.integers(-3, 4, size=(a.dim, a.dim))
            g = Matrix.from_rows(f, [[int(x) for x in r] for r in rows])
            return g if is_automorphism(a, g) else None

    for _ in range(rounds):
        g = draw()
        if g is not None:
            found.add(g)
    grow = True
    while grow and len(found) < settings.GROUP_CAP:
        grow = False
        for x in list(found):
            for y in list(found):
                z = x @ y
                if z not in found:
                    found.add(z)
                    grow = True
    return AutomorphismSet(_canonical(found), rounds, complete=False)


# ----------------------------------------------------------------- matching

@dataclass(frozen=True)
class MatchResult:
    form: str
    bijection: tuple[tuple[Hashable, Matrix], ...]


def match_expected(auts: AutomorphismSet, expected: Sequence[tuple[Hashable, Matrix]],
                   compose: Callable[[Hashable, Hashable], Hashable], form: str) -> MatchResult:
    """Check that ``auts`` is exactly the predicted set and that ref -> matrix is a homomorphism."""
    predicted = {}
    for ref, m in expected:
        if m in predicted.values():
            raise Mismatch("two references predict the same matrix", witness={"ref": str(ref), "matrix": m.to_text()})
        predicted[ref] = m
    actual = set(auts.elements)
    for ref, m in predicted.items():
        if m not in actual:
            raise Mismatch("a predicted matrix is not an enumerated automorphism",
                           witness={"ref": str(ref), "matrix": m.to_text()})
    values = set(predicted.values())
    for m in auts.elements:
        if m not in values:
            raise Mismatch("an enumerated automorphism is not predicted", witness={"matrix": m.to_text()})
    for x, mx in predicted.items():
        for y, my in predicted.items():
            z = compose(x, y)
            if predicted.get(z) != mx @ my:
                raise Mismatch("the predicted correspondence does not preserve composition",
                               witness={"pair": [str(x), str(y)]})
    return MatchResult(form, tuple(predicted.items()))


def matrix_compose(x: Matrix, y: Matrix) -> Matrix:
    return x @ y


def perm_compose(x: Permutation, y: Permutation) -> Permutation:
    return x * y


def _ident(a: Algebra, n: int) -> Matrix:
    return Matrix.identity(a.field, n)


def expected_for_C(c_alg: Algebra, sl: Sequence[Matrix]) -> list[tuple[Matrix, Matrix]]:
    """id on <c> and L, exterior powers of g on B(U)."""
    s, n = c_alg.params["s"], c_alg.params["n"]
    return [(g, Matrix.block_diagonal(c_alg.field, [_ident(c_alg, 1 + s), exterior_extension(g, n)])) for g in sl]


def expected_for_D(d_alg: Algebra, sl: Sequence[Matrix]) -> list[tuple[Matrix, Matrix]]:
    """id on <d>, the graded extension of id_L + g on A, and id + exterior((g*)^-1) on C."""
    f = d_alg.field
    s, n, r = d_alg.params["s"], d_alg.params["n"], d_alg.params["r"]
    phi_u = d_alg.block("A1.U").pairing
    out = []
    for g in sl:
        v_map = Matrix.block_diagonal(f, [_ident(d_alg, s), g])
        a_map = extension_on_blocks(d_alg, v_map, "", r, "tensor")
        h = _inverse_linked(g, phi_u)
        c_map = Matrix.block_diagonal(f, [_ident(d_alg, 1 + s), exterior_extension(h, n)])
        out.append((g, Matrix.block_diagonal(f, [_ident(d_alg, 1), a_map, c_map])))
    return out


def _inverse_linked(g: Matrix, pairing: Matrix) -> Matrix:
    """The map h on the right block for which ``g = linked_map(h, pairing)``."""
    return inverse(inverse(pairing) @ g.transpose() @ pairing)


def expected_for_wrap(w_alg: Algebra, inner: Sequence[tuple[Hashable, Matrix]]) -> list[tuple[Hashable, Matrix]]:
    """id on <e>, (g*)^-1 on Z, g on R, for each inner automorphism g."""
    delta = w_alg.block("Z").pairing
    return [(ref, Matrix.block_diagonal(w_alg.field, [_ident(w_alg, 1), linked_map(g, delta), g]))
            for ref, g in inner]


def expected_for_E(e_alg: Algebra, group) -> list[tuple[Permutation, Matrix]]:
    """id on <e>, the symmetric-power extension of sigma on A, sigma on E_n."""
    f = e_alg.field
    r = e_alg.params["r"]
    out = []
    for sigma in group.elements:
        p = perm_matrix(sigma, f)
        a_map = extension_on_blocks(e_alg, p, "", r, "symmetric")
        out.append((sigma, Matrix.block_diagonal(f, [_ident(e_alg, 1), a_map, p])))
    return out


def rigid_expected(a: Algebra) -> list[tuple[str, Matrix]]:
    return [("id", _ident(a, a.dim))]


def restrict_automorphisms(auts: AutomorphismSet, block: BlockInfo) -> list[Matrix]:
    """Restrictions of each automorphism to a preserved block."""
    idx = list(block.indices)
    return [g.submatrix(idx, idx) for g in auts.elements]


# ------------------------------------------------------------------- B(U)

@dataclass(frozen=True)
class ExtensionScan:
    """GL(U) scan for B(U): accepted exterior extensions and the first violation of each rejected one."""

    accepted: AutomorphismSet
    rejected: tuple[tuple[Matrix, tuple[int, int] | None], ...]


def u_preserving_automorphisms(b_alg: Algebra, workers: int | None = None) -> ExtensionScan:
    """Automorphisms of B(U) that preserve U, one per g in GL(U)."""
    if b_alg.construction != "B":
        raise UsageError(f"U-preserving scan needs a B(U) algebra, got {b_alg.construction!r}")
    n = b_alg.params["n"]
    accepted, rejected = [], []
    with trace_operation("u_preserving_automorphisms", n=n, field=b_alg.field):
        for g in leaf_candidates(b_alg, b_alg.block("W1"), workers):
            ext = exterior_extension(g, n)
            check = is_automorphism(b_alg, ext)
            if check:
                accepted.append(ext)
            else:
                rejected.append((g, check.pair))
    total = len(accepted) + len(rejected)
    logger.info("B(U), n=%d: %d of %d maps in GL(U) extend", n, len(accepted), total)
    return ExtensionScan(AutomorphismSet(_canonical(accepted), total, complete=True), tuple(rejected))


# ------------------------------------------------------------ expectations

@dataclass(frozen=True)
class Expectation:
    kind: str
    elements: tuple[tuple[Hashable, Matrix], ...]
    compose: Callable[[Hashable, Hashable], Hashable]
    form: str


def _subspace_param(a: Algebra, rows: Sequence[Sequence[str]], degree: int) -> Subspace:
    size = graded_basis(a.params["s"] + a.params["n"], degree, "tensor").size
    return Subspace.span(a.field, size, [[parse_raw(a.field, x) for x in row] for row in rows])


def expected_set(a: Algebra) -> Expectation | None:
    """Predicted automorphisms of a known construction, or None when none is predicted."""
    kind = a.construction
    if kind == "rigid":
        return Expectation(kind, tuple(rigid_expected(a)), lambda x, y: "id", "id")
    if kind == "C":
        sl = special_linear(a.params["n"], a.field)
        return Expectation(kind, tuple(expected_for_C(a, sl)), matrix_compose,
                           "id + exterior(g), g in SL(U)")
    if kind == "D":
        S = _subspace_param(a, a.params["S"], a.params["r"])
        sl = sl_normalizer(a.params["s"], a.params["n"], S, a.params["r"], a.field)
        return Expectation(kind, tuple(expected_for_D(a, sl)), matrix_compose,
                           "id + ext(id_L + g) + id + exterior((g*)^-1), g in SL(U) with gS = S")
    if kind == "E":
        return Expectation(kind, tuple(expected_for_E(a, group_from_params(a.params["group"]))), perm_compose,
                           "id + Sym(sigma) + sigma, sigma in G")
    if kind == "wrap":
        inner = expected_set(restrict_to_block(a, "R"))
        if inner is None:
            return None
        return Expectation(kind, tuple(expected_for_wrap(a, inner.elements)), inner.compose,
                           f"id + (g*)^-1 + g, g = {inner.form}")
    return None
