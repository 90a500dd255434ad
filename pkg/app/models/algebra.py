# app/models/algebra.py
"""Finite-dimensional (non-associative) algebras given by structure constants."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field, replace
from enum import Enum
from functools import cached_property
from typing import Any, Iterable, Sequence

from app.core.errors import SchemaViolation
from app.core.exactfield import FieldSpec
from app.core.linalg import Matrix


class BlockRole(str, Enum):
    UNIT_LINE = "unit-line"
    GENERATOR = "generator"
    GENERATED = "generated"
    PAIRING_LINKED = "pairing-linked"
    PLAIN = "plain"


FREE_ROLES = (BlockRole.GENERATOR, BlockRole.PLAIN)


@dataclass(frozen=True)
class BlockInfo:
    """A contiguous range [lo, hi) of basis indices with its declared role.

    ``pairing`` (for pairing-linked blocks) has rows indexed by this block and
    columns by ``linked_to``; entry (i, j) is the unit coefficient of
    ``b_i * b_j``.
    """

    name: str
    lo: int
    hi: int
    role: BlockRole = BlockRole.PLAIN
    eigenvalue: Any = None
    linked_to: str | None = None
    pairing: Matrix | None = None
    parent: str | None = None

    @property
    def size(self) -> int:
        return self.hi - self.lo

    @property
    def indices(self) -> range:
        return range(self.lo, self.hi)

    def shifted(self, offset: int, prefix: str = "", parent: str | None = None) -> "BlockInfo":
        """Copy moved by ``offset`` with names prefixed (used when embedding an algebra)."""
        return replace(
            self,
            name=prefix + self.name,
            lo=self.lo + offset,
            hi=self.hi + offset,
            linked_to=prefix + self.linked_to if self.linked_to else None,
            parent=prefix + self.parent if self.parent else parent,
        )


@dataclass(frozen=True)
class SubspaceConstraint:
    """Declared invariant: every automorphism maps ``basis`` (a subspace of the
    degree-``degree`` power of block ``block``) onto itself."""

    block: str
    degree: int
    flavor: str
    basis: tuple[tuple, ...]

    def renamed(self, prefix: str) -> "SubspaceConstraint":
        return replace(self, block=prefix + self.block)


@dataclass(frozen=True, eq=False)
class Algebra:
    field: FieldSpec
    dim: int
    basis_names: tuple[str, ...]
    structure: tuple[tuple[int, int, int, Any], ...]
    blocks: tuple[BlockInfo, ...] = ()
    constraints: tuple[SubspaceConstraint, ...] = ()
    construction: str = "custom"
    params: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if len(self.basis_names) != self.dim:
            raise SchemaViolation(f"{len(self.basis_names)} basis names for dimension {self.dim}", location="basis")
        prev = None
        zero = self.field.zero
        for pos, (i, j, k, c) in enumerate(self.structure):
            if not (0 <= i < self.dim and 0 <= j < self.dim and 0 <= k < self.dim):
                raise SchemaViolation(f"index out of range in entry {(i, j, k)}", location=f"structure[{pos}]")
            if c == zero:
                raise SchemaViolation(f"zero coefficient stored at {(i, j, k)}", location=f"structure[{pos}]")
            if prev is not None and (i, j, k) <= prev:
                raise SchemaViolation(f"structure entries not sorted and unique at {(i, j, k)}",
                                      location=f"structure[{pos}]")
            prev = (i, j, k)
        names = set()
        for pos, b in enumerate(self.blocks):
            if b.name in names:
                raise SchemaViolation(f"duplicate block name {b.name}", location=f"blocks[{pos}]")
            names.add(b.name)
            if not (0 <= b.lo < b.hi <= self.dim):
                raise SchemaViolation(f"block {b.name} has range [{b.lo}, {b.hi})", location=f"blocks[{pos}]")

    def __eq__(self, other):
        if not isinstance(other, Algebra):
            return NotImplemented
        return (self.field, self.dim, self.basis_names, self.structure, self.blocks, self.constraints,
                self.construction, self.params) == (
            other.field, other.dim, other.basis_names, other.structure, other.blocks, other.constraints,
            other.construction, other.params)

    __hash__ = object.__hash__

    # ---------------------------------------------------------------- table
    @cached_property
    def table(self) -> dict[tuple[int, int], tuple[tuple[int, Any], ...]]:
        """(i, j) -> ((k, c), ...) for every nonzero product b_i * b_j."""
        out: dict[tuple[int, int], list] = {}
        for i, j, k, c in self.structure:
            out.setdefault((i, j), []).append((k, c))
        return {key: tuple(v) for key, v in out.items()}

    @cached_property
    def left_operators(self) -> tuple[Matrix, ...]:
        return tuple(self._operator(i, "left") for i in range(self.dim))

    @cached_property
    def right_operators(self) -> tuple[Matrix, ...]:
        return tuple(self._operator(i, "right") for i in range(self.dim))

    def _operator(self, i: int, side: str) -> Matrix:
        f = self.field
        rows = [[f.zero] * self.dim for _ in range(self.dim)]
        for (a, b), entries in self.table.items():
            if side == "left" and a == i:
                for k, c in entries:
                    rows[k][b] = c
            elif side == "right" and b == i:
                for k, c in entries:
                    rows[k][a] = c
        return Matrix(f, tuple(tuple(r) for r in rows))

    # --------------------------------------------------------------- blocks
    def block(self, name: str) -> BlockInfo:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(name)

    def has_block(self, name: str) -> bool:
        return any(b.name == name for b in self.blocks)

    def children(self, name: str | None) -> list[BlockInfo]:
        return sorted((b for b in self.blocks if b.parent == name), key=lambda b: b.lo)

    @property
    def top_blocks(self) -> list[BlockInfo]:
        return self.children(None)

    def is_leaf(self, name: str) -> bool:
        return not any(b.parent == name for b in self.blocks)

    @property
    def leaves(self) -> list[BlockInfo]:
        return sorted((b for b in self.blocks if self.is_leaf(b.name)), key=lambda b: b.lo)

    def leaf_of(self, index: int) -> BlockInfo | None:
        for b in self.leaves:
            if b.lo <= index < b.hi:
                return b
        return None

    def ancestors(self, name: str) -> list[str]:
        out = []
        parent = self.block(name).parent
        while parent is not None:
            out.append(parent)
            parent = self.block(parent).parent
        return out

    def with_blocks(self, blocks: Iterable[BlockInfo], constraints: Iterable[SubspaceConstraint] = ()) -> "Algebra":
        return replace(self, blocks=tuple(blocks), constraints=tuple(constraints))

    def with_params(self, construction: str, params: dict) -> "Algebra":
        return replace(self, construction=construction, params=dict(params))


class StructureBuilder:
    """Accumulates structure constants; zero sums are dropped on ``build``."""

    def __init__(self, field: FieldSpec, dim: int):
        self.field = field
        self.dim = dim
        self._entries: dict[tuple[int, int, int], Any] = {}

    def add(self, i: int, j: int, k: int, c) -> None:
        f = self.field
        key = (i, j, k)
        self._entries[key] = f.add(self._entries.get(key, f.zero), c)

    def set_product(self, i: int, j: int, vector: Sequence) -> None:
        for k, c in enumerate(vector):
            if c != self.field.zero:
                self.add(i, j, k, c)

    def embed(self, other: Algebra, offset: int) -> None:
        for i, j, k, c in other.structure:
            self.add(i + offset, j + offset, k + offset, c)

    def build(self) -> tuple[tuple[int, int, int, Any], ...]:
        zero = self.field.zero
        return tuple((i, j, k, c) for (i, j, k), c in sorted(self._entries.items()) if c != zero)
