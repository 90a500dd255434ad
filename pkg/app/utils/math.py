# app/utils/math.py
"""Combinatorial helpers for monomial bases and group orders"""
from __future__ import annotations

from itertools import combinations, combinations_with_replacement, product
from math import prod
from typing import Sequence


def shuffle_sign(a: Sequence[int], b: Sequence[int]) -> int:
    """Sign of sorting the concatenation a+b of two increasing index lists.

    Returns 0 when they share an index (the wedge product vanishes).
    """
    if set(a) & set(b):
        return 0
    inversions = sum(1 for x in a for y in b if x > y)
    return -1 if inversions % 2 else 1


def wedge_monomials(n: int, degree: int) -> list[tuple[int, ...]]:
    """Increasing index tuples of a given degree in lexicographic order."""
    return list(combinations(range(n), degree))


def tensor_words(n: int, degree: int) -> list[tuple[int, ...]]:
    return list(product(range(n), repeat=degree))


def symmetric_monomials(n: int, degree: int) -> list[tuple[int, ...]]:
    """Nondecreasing index tuples (multisets) of a given degree in lexicographic order."""
    return list(combinations_with_replacement(range(n), degree))


def merge_multisets(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted((*a, *b)))


def gl_order(k: int, q: int) -> int:
    """|GL(k, q)|."""
    return prod(q ** k - q ** i for i in range(k))


def sl_order(k: int, q: int) -> int:
    return gl_order(k, q) // (q - 1) if k else 1


def projective_point_count(dim: int, q: int) -> int:
    return (q ** dim - 1) // (q - 1)
