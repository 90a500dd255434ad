# app/models/permutation.py
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from sympy.combinatorics import Permutation as SymPermutation
from sympy.combinatorics import PermutationGroup

from app.core.errors import InvalidPermutation


@dataclass(frozen=True, order=True)
class Permutation:
    """Permutation of {0, ..., n-1} stored as its image tuple.

    ``(a * b)(i) == a(b(i))``: the right factor acts first. sympy composes the
    other way round, so products are taken there with the factors swapped.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise InvalidPermutation(f"{list(self.images)} is not a permutation",
                                     witness={"images": list(self.images)})

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_sympy(cls, p: SymPermutation, n: int | None = None) -> "Permutation":
        images = list(p.array_form)
        n = len(images) if n is None else n
        return cls(tuple(images + list(range(len(images), n))))

    @classmethod
    def from_cycles(cls, n: int, cycles: list[list[int]]) -> "Permutation":
        """Build from 0-based cycles; the product is applied left to right."""
        for cyc in cycles:
            if len(set(cyc)) != len(cyc) or any(not 0 <= x < n for x in cyc):
                raise InvalidPermutation(f"bad cycle {[x + 1 for x in cyc]} on {n} points")
        factors = [SymPermutation([list(cyc)], size=n) for cyc in cycles]
        return cls.from_sympy(reduce(lambda x, y: x * y, factors, SymPermutation(list(range(n)))), n)

    @property
    def sym(self) -> SymPermutation:
        return SymPermutation(list(self.images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise InvalidPermutation("degrees differ")
        return Permutation.from_sympy(other.sym * self.sym, self.degree)

    def inverse(self) -> "Permutation":
        return Permutation.from_sympy(~self.sym, self.degree)

    def is_identity(self) -> bool:
        return self.sym.is_Identity

    def cycles(self) -> list[tuple[int, ...]]:
        return [tuple(c) for c in self.sym.cyclic_form]

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc)


@dataclass(frozen=True)
class PermGroup:
    """A finite permutation group: its sorted element list and the generators it was built from."""

    degree: int
    elements: tuple[Permutation, ...]
    generators: tuple[Permutation, ...] = ()

    @classmethod
    def from_sympy(cls, group: PermutationGroup, generators: tuple[Permutation, ...] | None = None) -> "PermGroup":
        n = group.degree
        elements = tuple(sorted(Permutation.from_sympy(p, n) for p in group.generate()))
        if generators is None:
            generators = tuple(Permutation.from_sympy(g, n) for g in group.generators)
        return cls(n, elements, tuple(generators))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Permutation) -> bool:
        return p in self._members

    @property
    def _members(self) -> frozenset:
        return frozenset(self.elements)

    def is_trivial(self) -> bool:
        return self.order == 1

    def __eq__(self, other):
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.degree == other.degree and self.elements == other.elements

    def __hash__(self):
        return hash((self.degree, self.elements))

    def __str__(self) -> str:
        gens = ",".join(str(g) for g in self.generators) or "()"
        return f"n={self.degree}; gens={gens}"
