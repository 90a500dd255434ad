# app/core/linalg.py
"""Exact linear algebra over a ``FieldSpec``.

Vectors are tuples of raw field values. Matrices act on column vectors; the
column ``j`` of a map is the image of the ``j``-th basis vector.
Over finite fields the matrix routines run on galois arrays; the rationals
use Fraction elimination.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from app.core.errors import DegeneratePairing, DimensionMismatch, SingularMatrix
from app.config import settings
from app.core.exactfield import FieldSpec, format_raw

Vector = tuple


# ------------------------------------------------------------------ vectors

def zero_vector(field: FieldSpec, n: int) -> Vector:
    return (field.zero,) * n


def unit_vector(field: FieldSpec, n: int, i: int) -> Vector:
    v = [field.zero] * n
    v[i] = field.one
    return tuple(v)


def vec_add(field: FieldSpec, x: Sequence, y: Sequence) -> Vector:
    if len(x) != len(y):
        raise DimensionMismatch(f"vector lengths {len(x)} and {len(y)}")
    add = field.add
    return tuple(add(a, b) for a, b in zip(x, y))


def vec_sub(field: FieldSpec, x: Sequence, y: Sequence) -> Vector:
    if len(x) != len(y):
        raise DimensionMismatch(f"vector lengths {len(x)} and {len(y)}")
    sub = field.sub
    return tuple(sub(a, b) for a, b in zip(x, y))


def vec_scale(field: FieldSpec, c, x: Sequence) -> Vector:
    mul = field.mul
    return tuple(mul(c, a) for a in x)


def dot(field: FieldSpec, x: Sequence, y: Sequence):
    if len(x) != len(y):
        raise DimensionMismatch(f"vector lengths {len(x)} and {len(y)}")
    acc = field.zero
    add, mul, zero = field.add, field.mul, field.zero
    for a, b in zip(x, y):
        if a != zero and b != zero:
            acc = add(acc, mul(a, b))
    return acc


def is_zero_vector(field: FieldSpec, x: Sequence) -> bool:
    zero = field.zero
    return all(a == zero for a in x)


# ------------------------------------------------------------------ matrices

@dataclass(frozen=True)
class Matrix:
    field: FieldSpec
    entries: tuple[tuple, ...]

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Iterable[Iterable]) -> "Matrix":
        return cls(field, tuple(tuple(field.normalize(x) for x in row) for row in rows))

    @classmethod
    def from_raw(cls, field: FieldSpec, rows: Iterable[Iterable]) -> "Matrix":
        return cls(field, tuple(tuple(row) for row in rows))

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[Sequence]) -> "Matrix":
        if not columns:
            return cls(field, ())
        return cls(field, tuple(zip(*columns)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, tuple(unit_vector(field, n, i) for i in range(n)))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, tuple((field.zero,) * cols for _ in range(rows)))

    @classmethod
    def diagonal(cls, field: FieldSpec, values: Sequence) -> "Matrix":
        n = len(values)
        rows = []
        for i, v in enumerate(values):
            row = [field.zero] * n
            row[i] = field.normalize(v)
            rows.append(tuple(row))
        return cls(field, tuple(rows))

    @classmethod
    def block_diagonal(cls, field: FieldSpec, blocks: Sequence["Matrix"]) -> "Matrix":
        n = sum(b.rows for b in blocks)
        rows = []
        offset = 0
        for b in blocks:
            for r in b.entries:
                row = [field.zero] * n
                row[offset:offset + b.cols] = r
                rows.append(tuple(row))
            offset += b.cols
        return cls(field, tuple(rows))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[Vector]:
        return [tuple(c) for c in zip(*self.entries)] if self.entries else []

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(zip(*self.entries)) if self.entries else ())

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, tuple(tuple(self.entries[i][j] for j in cols) for i in rows))

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatch(f"matrix with {self.cols} columns applied to vector of length {len(v)}")
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero
        nz = [(j, x) for j, x in enumerate(v) if x != zero]
        out = []
        for r in self.entries:
            acc = zero
            for j, x in nz:
                a = r[j]
                if a != zero:
                    acc = add(acc, mul(a, x))
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = [other.column(j) for j in range(other.cols)]
        return Matrix.from_columns(self.field, [self.apply(c) for c in cols]) if cols else Matrix(self.field, ((),) * self.rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix shapes differ")
        return Matrix(self.field, tuple(vec_add(self.field, a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix shapes differ")
        return Matrix(self.field, tuple(vec_sub(self.field, a, b) for a, b in zip(self.entries, other.entries)))

    def scale(self, c) -> "Matrix":
        return Matrix(self.field, tuple(vec_scale(self.field, c, r) for r in self.entries))

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.field, self.rows)

    def to_text(self) -> list[list[str]]:
        return [[format_raw(self.field, x) for x in r] for r in self.entries]

    def __str__(self) -> str:
        return "\n".join(" ".join(row) for row in self.to_text())


# ---------------------------------------------------------------- echelon

def _gf(field: FieldSpec, rows: Sequence[Sequence]):
    return field.to_gf([list(r) for r in rows])


def _lists(arr) -> list[list]:
    return arr.view(np.ndarray).tolist()


def rref(field: FieldSpec, rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and their pivot columns."""
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return [], []
    if field.is_finite:
        out, pivots = [], []
        for r in _lists(_gf(field, m).row_reduce()):
            lead = next((j for j, x in enumerate(r) if x), None)
            if lead is None:
                break
            out.append(r)
            pivots.append(lead)
        return out, pivots
    ncols = len(m[0])
    add, mul, inv, neg, zero = field.add, field.mul, field.inv, field.neg, field.zero
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != zero), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        s = inv(m[r][c])
        m[r] = [mul(s, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != zero:
                f = neg(m[i][c])
                m[i] = [add(x, mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(m: Matrix) -> int:
    if m.field.is_finite and m.rows and m.cols:
        return int(np.linalg.matrix_rank(_gf(m.field, m.entries)))
    return len(rref(m.field, m.entries)[1])


def determinant(m: Matrix):
    if not m.is_square:
        raise DimensionMismatch("determinant of a non-square matrix")
    f = m.field
    if not m.rows:
        return f.one
    if f.is_finite:
        return int(np.linalg.det(_gf(f, m.entries)))
    a = [list(r) for r in m.entries]
    n = len(a)
    det = f.one
    for c in range(n):
        pivot = next((i for i in range(c, n) if a[i][c] != f.zero), None)
        if pivot is None:
            return f.zero
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = f.neg(det)
        det = f.mul(det, a[c][c])
        s = f.inv(a[c][c])
        for i in range(c + 1, n):
            if a[i][c] != f.zero:
                k = f.neg(f.mul(a[i][c], s))
                a[i] = [f.add(x, f.mul(k, y)) for x, y in zip(a[i], a[c])]
    return det


def is_invertible(m: Matrix) -> bool:
    return m.is_square and rank(m) == m.rows


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise DimensionMismatch("inverse of a non-square matrix")
    f = m.field
    n = m.rows
    if f.is_finite and n:
        r = rank(m)
        if r < n:
            raise SingularMatrix("matrix is not invertible", witness={"rank": r})
        return Matrix(f, tuple(tuple(row) for row in _lists(np.linalg.inv(_gf(f, m.entries)))))
    aug = [list(r) + list(unit_vector(f, n, i)) for i, r in enumerate(m.entries)]
    red, pivots = rref(f, aug)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise SingularMatrix("matrix is not invertible", witness={"rank": sum(1 for p in pivots if p < n)})
    return Matrix(f, tuple(tuple(r[n:]) for r in red))


# ---------------------------------------------------------------- subspaces

@dataclass(frozen=True)
class Subspace:
    """A subspace stored by its canonical RREF basis (equality is basis equality)."""

    field: FieldSpec
    ambient: int
    basis: tuple[tuple, ...]
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, field: FieldSpec, ambient: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [tuple(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {ambient}")
        rows, pivots = rref(field, vecs)
        return cls(field, ambient, tuple(tuple(r) for r in rows), tuple(pivots))

    @classmethod
    def zero(cls, field: FieldSpec, ambient: int) -> "Subspace":
        return cls(field, ambient, (), ())

    @classmethod
    def full(cls, field: FieldSpec, ambient: int) -> "Subspace":
        return cls.span(field, ambient, [unit_vector(field, ambient, i) for i in range(ambient)])

    @classmethod
    def coordinate(cls, field: FieldSpec, ambient: int, indices: Iterable[int]) -> "Subspace":
        return cls.span(field, ambient, [unit_vector(field, ambient, i) for i in indices])

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient

    def residual(self, v: Sequence) -> Vector:
        """``v`` minus its component along the pivots of this basis."""
        f = self.field
        w = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = w[p]
            if c != f.zero:
                w = [f.sub(x, f.mul(c, y)) for x, y in zip(w, row)]
        return tuple(w)

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {self.ambient}")
        return is_zero_vector(self.field, self.residual(v))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of ``v`` in the RREF basis (the pivot entries)."""
        return tuple(v[p] for p in self.pivots)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.field, self.ambient, list(self.basis) + list(other.basis))

    def intersection(self, other: "Subspace") -> "Subspace":
        return annihilator(annihilator(self) + annihilator(other))

    def __str__(self) -> str:
        return "<" + ", ".join("(" + ",".join(format_raw(self.field, x) for x in v) + ")" for v in self.basis) + ">"


def kernel(m: Matrix) -> Subspace:
    """Right kernel {x : m x = 0}."""
    f = m.field
    n = m.cols
    if f.is_finite and m.rows and n:
        return Subspace.span(f, n, _lists(_gf(f, m.entries).null_space()))
    red, pivots = rref(f, m.entries) if m.rows else ([], [])
    free = [j for j in range(n) if j not in pivots]
    vecs = []
    for j in free:
        v = [f.zero] * n
        v[j] = f.one
        for row, p in zip(red, pivots):
            v[p] = f.neg(row[j])
        vecs.append(tuple(v))
    return Subspace.span(f, n, vecs)


def annihilator(s: Subspace) -> Subspace:
    """{v : w . v = 0 for every w in s} under the standard dot product."""
    if not s.basis:
        return Subspace.full(s.field, s.ambient)
    return kernel(Matrix(s.field, s.basis))


def image(m: Matrix, s: Subspace) -> Subspace:
    return Subspace.span(m.field, m.rows, [m.apply(v) for v in s.basis])


# ---------------------------------------------------------------- solving

@dataclass(frozen=True)
class AffineSolution:
    kind: str  # "unique" | "family" | "empty"
    particular: Vector | None
    homogeneous: Subspace

    @property
    def is_unique(self) -> bool:
        return self.kind == "unique"


def solve_affine(m: Matrix, rhs: Sequence) -> AffineSolution:
    """Solve ``m x = rhs``."""
    f = m.field
    n = m.cols
    if len(rhs) != m.rows:
        raise DimensionMismatch(f"{m.rows} equations but right-hand side of length {len(rhs)}")
    hom = kernel(m)
    aug = [list(r) + [b] for r, b in zip(m.entries, rhs)]
    red, pivots = rref(f, aug)
    if pivots and pivots[-1] == n:
        return AffineSolution("empty", None, hom)
    x = [f.zero] * n
    for row, p in zip(red, pivots):
        x[p] = row[n]
    return AffineSolution("unique" if hom.dim == 0 else "family", tuple(x), hom)


# ------------------------------------------------------- spectra and orbits

def spin(field: FieldSpec, ambient: int, seeds: Iterable[Sequence], operators: Sequence[Matrix],
         stop_when_full: bool = True) -> Subspace:
    """Smallest subspace containing ``seeds`` and closed under every operator."""
    basis: list[list] = []
    pivots: list[int] = []
    add, mul, neg, inv, zero = field.add, field.mul, field.neg, field.inv, field.zero

    def insert(v) -> list | None:
        w = list(v)
        for row, p in zip(basis, pivots):
            c = w[p]
            if c != zero:
                nc = neg(c)
                w = [add(x, mul(nc, y)) for x, y in zip(w, row)]
        lead = next((i for i, x in enumerate(w) if x != zero), None)
        if lead is None:
            return None
        s = inv(w[lead])
        w = [mul(s, x) for x in w]
        basis.append(w)
        pivots.append(lead)
        return w

    work = []
    for v in seeds:
        w = insert(v)
        if w is not None:
            work.append(w)
    while work:
        if stop_when_full and len(basis) == ambient:
            break
        v = work.pop()
        for op in operators:
            w = insert(op.apply(v))
            if w is not None:
                work.append(w)
                if stop_when_full and len(basis) == ambient:
                    break
    return Subspace.span(field, ambient, basis)


def eigenspace(m: Matrix, lam) -> Subspace:
    f = m.field
    shifted = m - Matrix.identity(f, m.rows).scale(lam)
    return kernel(shifted)


def eigenvalues(m: Matrix, scan_limit: int | None = None) -> list:
    """Distinct eigenvalues in the base field, in canonical order."""
    f = m.field
    limit = settings.SCAN_LIMIT if scan_limit is None else scan_limit
    if f.is_finite and f.order <= limit:
        return [lam for lam in f.elements() if eigenspace(m, lam).dim > 0]
    from app.core.polynomials import roots
    return sorted(roots(f, charpoly(m)), key=_canonical_key(f))


def _canonical_key(field: FieldSpec):
    if field.is_rational:
        return lambda x: (abs(x) != x, abs(x))
    return lambda x: x


def charpoly(m: Matrix) -> list:
    """Monic characteristic polynomial, coefficients low to high (Hessenberg method over Q)."""
    if not m.is_square:
        raise DimensionMismatch("characteristic polynomial of a non-square matrix")
    f = m.field
    n = m.rows
    if f.is_finite and n:
        return [int(c) for c in _gf(f, m.entries).characteristic_poly().coeffs][::-1]
    add, sub, mul, inv, zero, one = f.add, f.sub, f.mul, f.inv, f.zero, f.one
    h = [list(r) for r in m.entries]
    # reduce to upper Hessenberg form by similarity
    for k in range(n - 2):
        pivot = next((i for i in range(k + 1, n) if h[i][k] != zero), None)
        if pivot is None:
            continue
        if pivot != k + 1:
            h[k + 1], h[pivot] = h[pivot], h[k + 1]
            for r in h:
                r[k + 1], r[pivot] = r[pivot], r[k + 1]
        p = inv(h[k + 1][k])
        for i in range(k + 2, n):
            t = mul(h[i][k], p)
            if t != zero:
                h[i] = [sub(x, mul(t, y)) for x, y in zip(h[i], h[k + 1])]
                for r in h:
                    r[k + 1] = add(r[k + 1], mul(t, r[i]))
    # recurrence on leading principal submatrices
    polys: list[list] = [[one]]
    for k in range(n):
        prev = polys[k]
        nxt = [zero] + prev  # x * p_k
        nxt = [sub(a, mul(h[k][k], b)) for a, b in zip(nxt, prev + [zero])]
        t = one
        for i in range(k - 1, -1, -1):
            t = mul(t, h[i + 1][i])
            if t == zero:
                break
            c = mul(t, h[i][k])
            if c != zero:
                older = polys[i] + [zero] * (len(nxt) - len(polys[i]))
                nxt = [sub(a, mul(c, b)) for a, b in zip(nxt, older)]
        polys.append(nxt)
    return polys[n]


def poly_eval_matrix(coeffs: Sequence, m: Matrix) -> Matrix:
    """Evaluate a polynomial (low-to-high coefficients) at a square matrix by Horner's rule."""
    f = m.field
    n = m.rows
    result = Matrix.zeros(f, n, n)
    ident = Matrix.identity(f, n)
    for c in reversed(list(coeffs)):
        result = result @ m + ident.scale(c)
    return result


def adjoint(g: Matrix, pairing: Matrix) -> Matrix:
    """The adjoint ``P^{-1} g^T P`` of g with respect to the bilinear form with Gram matrix P."""
    try:
        p_inv = inverse(pairing)
    except SingularMatrix as exc:
        raise DegeneratePairing("pairing matrix is singular") from exc
    return p_inv @ g.transpose() @ pairing
