import pytest

from app.core.errors import DimensionMismatch, SingularMatrix
from app.core.linalg import (
    Matrix,
    Subspace,
    adjoint,
    annihilator,
    charpoly,
    determinant,
    eigenspace,
    eigenvalues,
    inverse,
    kernel,
    poly_eval_matrix,
    rank,
    solve_affine,
    spin,
)
from app.services.permgroups import parse_permutation, perm_matrix


def M(field, rows):
    return Matrix.from_rows(field, rows)


def test_solve_affine_kinds(f5):
    ident = Matrix.identity(f5, 2)
    sol = solve_affine(ident, (3, 4))
    assert sol.is_unique and sol.particular == (3, 4)

    zero = Matrix.zeros(f5, 2, 2)
    family = solve_affine(zero, (0, 0))
    assert family.kind == "family" and family.homogeneous.dim == 2

    assert solve_affine(zero, (1, 0)).kind == "empty"


def test_solve_affine_length_mismatch(f5):
    with pytest.raises(DimensionMismatch):
        solve_affine(Matrix.identity(f5, 2), (1,))


def test_eigenspaces_of_diagonal(f5):
    d = Matrix.diagonal(f5, [1, 2])
    assert eigenspace(d, 2) == Subspace.span(f5, 2, [(0, 1)])
    assert eigenspace(d, 3).dim == 0
    assert eigenvalues(d) == [1, 2]


def test_companion_without_roots(f7):
    companion = M(f7, [[0, -1], [1, 0]])
    assert charpoly(companion) == [1, 0, 1]
    assert eigenvalues(companion) == []
    assert eigenvalues(companion, scan_limit=0) == []


def test_charpoly_annihilates(f7):
    m = M(f7, [[1, 2, 0], [3, 4, 5], [0, 6, 1]])
    assert poly_eval_matrix(charpoly(m), m) == Matrix.zeros(f7, 3, 3)


def test_determinant_and_inverse(f7):
    m = M(f7, [[2, 1], [1, 1]])
    assert determinant(m) == 1
    assert m @ inverse(m) == Matrix.identity(f7, 2)
    with pytest.raises(SingularMatrix):
        inverse(M(f7, [[1, 2], [2, 4]]))


def test_rank_and_kernel(f5):
    m = M(f5, [[1, 2, 3], [2, 4, 6]])
    assert rank(m) == 1
    k = kernel(m)
    assert k.dim == 2
    for v in k.basis:
        assert m.apply(v) == (0, 0)


def test_subspace_operations(f5):
    a = Subspace.coordinate(f5, 3, [0, 1])
    b = Subspace.coordinate(f5, 3, [1, 2])
    assert (a + b).is_full
    assert a.intersection(b) == Subspace.coordinate(f5, 3, [1])
    assert annihilator(a) == Subspace.coordinate(f5, 3, [2])
    assert a.contains((3, 4, 0))
    assert not a.contains((0, 0, 1))


def test_spin_without_operators(f5):
    v = (1, 2, 3)
    assert spin(f5, 3, [v], []) == Subspace.span(f5, 3, [v])


def test_spin_rigid_unit_fills_space(rigid2_f5):
    ops = list(rigid2_f5.left_operators) + list(rigid2_f5.right_operators)
    assert spin(rigid2_f5.field, 2, [(1, 0)], ops).is_full


def test_adjoint_of_permutation_is_inverse(f7):
    sigma = perm_matrix(parse_permutation(3, "(1 2 3)"), f7)
    star = adjoint(sigma, Matrix.identity(f7, 3))
    assert star == inverse(sigma)
    assert inverse(star) == sigma


def test_adjoint_of_symmetric_diagonal(f7):
    g = Matrix.diagonal(f7, [2, 3])
    assert adjoint(g, Matrix.identity(f7, 2)) == g


def test_adjoint_twice_with_symmetric_pairing(f7):
    g = M(f7, [[1, 2], [3, 5]])
    pairing = M(f7, [[1, 2], [2, 1]])
    assert adjoint(adjoint(g, pairing), pairing) == g
