# app/workers/kernels.py
"""Batch kernels over finite fields on galois arrays.

Field elements are integer codes; a batch of k x k matrices is a galois
``FieldArray`` of shape (B, k, k). Candidate matrices are numbered in
lexicographic entry order (entry (0, 0) most significant), so index ranges can
be split across workers and decoded independently. Indices are int64, which
caps a scan at q^(k*k) < 2^63.
"""
from __future__ import annotations

from itertools import permutations
from typing import Sequence

import numpy as np
from sympy.combinatorics import Permutation

from app.core.errors import BudgetExceeded
from app.core.exactfield import FieldSpec
from app.utils.math import merge_multisets

LEIBNIZ_MAX = 5
MAX_CODES = int(np.iinfo(np.int64).max)


def code_space(q: int, k: int) -> int:
    """Number of k x k matrices over F_q; refuses spaces int64 indices cannot number."""
    total = q ** (k * k)
    if total > MAX_CODES:
        raise BudgetExceeded(f"{q}^{k * k} candidate matrices cannot be indexed by the batch kernels",
                             witness={"field_order": q, "size": k, "limit": MAX_CODES})
    return total


def decode_codes(start: int, stop: int, q: int, k: int) -> np.ndarray:
    code_space(q, k)
    idx = np.arange(start, stop, dtype=np.int64)
    powers = q ** np.arange(k * k - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] // powers[None, :]) % q).reshape(-1, k, k)


def _nonzero_rows(w) -> np.ndarray:
    return (w.view(np.ndarray) != 0).any(axis=1)


def det_batch(gf, mats) -> np.ndarray:
    """Determinants by the Leibniz formula (k <= LEIBNIZ_MAX)."""
    b, k, _ = mats.shape
    total = gf.Zeros(b)
    for perm in permutations(range(k)):
        term = mats[:, 0, perm[0]]
        for i in range(1, k):
            term = term * mats[:, i, perm[i]]
        total = total + term if Permutation(list(perm)).is_even else total - term
    return total.view(np.ndarray)


def invertible_mask(gf, mats) -> np.ndarray:
    return det_batch(gf, mats) != 0


def _power_images(gf, mats, monomials: Sequence[tuple], flavor: str) -> dict:
    """Images of the given degree-r monomials under each matrix: {monomial: {out_monomial: (B,)}}."""
    b, k, _ = mats.shape
    out = {}
    cache: dict[tuple, dict] = {(): {(): gf.Ones(b)}}

    def image(m: tuple) -> dict:
        if m in cache:
            return cache[m]
        prev = image(m[:-1])
        col = mats[:, :, m[-1]]
        nxt: dict = {}
        for word, arr in prev.items():
            for s in range(k):
                w = word + (s,) if flavor == "tensor" else merge_multisets(word, (s,))
                term = arr * col[:, s]
                nxt[w] = nxt[w] + term if w in nxt else term
        cache[m] = nxt
        return nxt

    for m in monomials:
        out[m] = image(tuple(m))
    return out


def constraint_mask(gf, mats, monomials: Sequence[tuple], flavor: str,
                    basis_rows: Sequence[Sequence[int]], pivots: Sequence[int]) -> np.ndarray:
    """Rows g of the batch whose induced action maps every basis vector of S into S (nonzero image)."""
    b = mats.shape[0]
    index = {m: i for i, m in enumerate(monomials)}
    n_mono = len(monomials)
    rows = gf(np.array(basis_rows, dtype=np.int64).reshape(len(basis_rows), n_mono))
    needed = sorted({monomials[i] for row in basis_rows for i, c in enumerate(row) if c})
    images = _power_images(gf, mats, needed, flavor)
    mask = np.ones(b, dtype=bool)
    for raw in basis_rows:
        w = gf.Zeros((b, n_mono))
        for i, c in enumerate(raw):
            if not c:
                continue
            scale = gf(int(c))
            for mono, arr in images[monomials[i]].items():
                j = index[mono]
                w[:, j] = w[:, j] + arr * scale
        nonzero = _nonzero_rows(w)
        for prow, p in zip(rows, pivots):
            w = w - w[:, p][:, None] * prow[None, :]
        mask &= nonzero & ~_nonzero_rows(w)
    return mask


def homomorphism_mask(gf, mats, structure: Sequence[tuple[int, int, int, int]]) -> np.ndarray:
    """Rows g with g(b_i b_j) = g(b_i) g(b_j) for all basis pairs (singular g may pass)."""
    b, d, _ = mats.shape
    coeff = {c: gf(int(c)) for _, _, _, c in structure}
    by_pair: dict[tuple[int, int], list] = {}
    for i, j, k, c in structure:
        by_pair.setdefault((i, j), []).append((k, coeff[c]))
    mask = np.ones(b, dtype=bool)
    for i in range(d):
        for j in range(d):
            lhs = gf.Zeros((b, d))
            for k, c in by_pair.get((i, j), ()):
                lhs = lhs + mats[:, :, k] * c
            rhs = gf.Zeros((b, d))
            for a_, b_, k, c in structure:
                rhs[:, k] = rhs[:, k] + mats[:, a_, i] * mats[:, b_, j] * coeff[c]
            mask &= ~_nonzero_rows(lhs - rhs)
            if not mask.any():
                return mask
    return mask


# ------------------------------------------------------ worker tasks

def scan_leaf_chunk(start: int, stop: int, field: FieldSpec, k: int,
                    constraints: Sequence[tuple]) -> list[int]:
    """Codes in [start, stop) of invertible k x k matrices passing every prepared constraint.

    Each constraint is (monomials, flavor, basis_rows, pivots).
    """
    gf = field.gf
    mats = gf(decode_codes(start, stop, field.order, k))
    mask = np.ones(mats.shape[0], dtype=bool)
    for monomials, flavor, rows, pivots in constraints:
        mask &= constraint_mask(gf, mats, monomials, flavor, rows, pivots)
    if k <= LEIBNIZ_MAX:
        sel = np.nonzero(mask)[0]
        if sel.size:
            inv = invertible_mask(gf, mats[sel])
            mask[:] = False
            mask[sel[inv]] = True
    return [start + int(i) for i in np.nonzero(mask)[0]]


def brute_force_chunk(start: int, stop: int, field: FieldSpec, d: int,
                      structure: Sequence[tuple[int, int, int, int]]) -> list[int]:
    gf = field.gf
    mats = gf(decode_codes(start, stop, field.order, d))
    mask = homomorphism_mask(gf, mats, structure)
    return [start + int(i) for i in np.nonzero(mask)[0]]


def code_to_entries(code: int, q: int, k: int) -> tuple[tuple[int, ...], ...]:
    digits = []
    for _ in range(k * k):
        digits.append(code % q)
        code //= q
    digits.reverse()
    return tuple(tuple(digits[i * k:(i + 1) * k]) for i in range(k))
