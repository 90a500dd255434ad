from itertools import product

import pytest

from app.core.errors import DegreeOutOfRange, SubspaceWrongDegree
from app.core.linalg import Matrix, Subspace, is_invertible
from app.services.algebra_ops import is_automorphism, multiply, basis_vector
from app.services.graded import (
    apply_induced,
    build_A,
    check_prop1,
    graded_basis,
    graded_extension,
    induced_action,
    normalizes_subspace,
)


def _gl2(field):
    for a, b, c, d in product(range(field.order), repeat=4):
        g = Matrix(field, ((a, b), (c, d)))
        if is_invertible(g):
            yield g


@pytest.mark.parametrize("flavor,sizes", [("tensor", [2, 4, 8]), ("symmetric", [2, 3, 4])])
def test_piece_sizes(flavor, sizes):
    assert [graded_basis(2, i, flavor).size for i in (1, 2, 3)] == sizes


def test_symmetric_square_of_diagonal(f7):
    g = Matrix.diagonal(f7, [2, 3])
    assert induced_action(g, 2, "symmetric") == Matrix.diagonal(f7, [4, 6, 2])


def test_induced_action_degree_one_is_g(f5):
    g = Matrix.from_rows(f5, [[1, 2], [3, 4]])
    assert induced_action(g, 1, "tensor") == g


def test_apply_induced_agrees_with_matrix(f5):
    g = Matrix.from_rows(f5, [[1, 2], [0, 3]])
    v = (1, 0, 4, 2)
    assert apply_induced(g, v, 2, "tensor") == induced_action(g, 2, "tensor").apply(v)


def test_induced_action_is_multiplicative(f5):
    g = Matrix.from_rows(f5, [[1, 2], [0, 3]])
    h = Matrix.from_rows(f5, [[2, 0], [1, 1]])
    for flavor in ("tensor", "symmetric"):
        assert induced_action(g @ h, 3, flavor) == induced_action(g, 3, flavor) @ induced_action(h, 3, flavor)


def test_quotient_dimension_symmetric(f5):
    s = Subspace.span(f5, 3, [(1, 1, 1)])
    a = build_A(2, f5, s, 2, "symmetric")
    assert a.dim == 4
    assert [b.name for b in a.blocks] == ["A1", "A2"]


def test_quotient_kills_s(f5):
    # S = <e1 (x) e1>: e1 * e1 vanishes, e1 * e2 survives
    s = Subspace.span(f5, 4, [(1, 0, 0, 0)])
    a = build_A(2, f5, s, 2, "tensor")
    assert a.dim == 5
    e1, e2 = basis_vector(a, 0), basis_vector(a, 1)
    assert all(c == 0 for c in multiply(a, e1, e1))
    assert multiply(a, e1, e2) == basis_vector(a, a.basis_names.index("e1(x)e2"))


def test_full_s_drops_top_block(f5):
    a = build_A(2, f5, Subspace.full(f5, 3), 2, "symmetric")
    assert a.dim == 2
    assert not a.structure


def test_products_above_truncation_vanish(f5):
    a = build_A(2, f5, Subspace.zero(f5, 4), 2, "tensor")
    top = basis_vector(a, 2)
    assert all(c == 0 for c in multiply(a, basis_vector(a, 0), top))


def test_basis_names(f5):
    a = build_A(2, f5, Subspace.zero(f5, 3), 2, "symmetric")
    assert a.basis_names == ("e1", "e2", "e1^2", "e1*e2", "e2^2")


def test_wrong_ambient_is_rejected(f5):
    with pytest.raises(SubspaceWrongDegree):
        build_A(2, f5, Subspace.zero(f5, 3), 2, "tensor")
    with pytest.raises(DegreeOutOfRange):
        build_A(2, f5, Subspace.zero(f5, 2), 1, "tensor")


def test_extension_of_identity(f5):
    s = Subspace.span(f5, 4, [(1, 0, 0, 1)])
    a = build_A(2, f5, s, 2, "tensor")
    assert graded_extension(a, Matrix.identity(f5, 2)).is_identity()


@pytest.mark.parametrize("flavor,s_vec", [("tensor", (0, 1, 4, 0)), ("symmetric", (1, 0, 1))])
def test_extension_is_automorphism_iff_g_normalizes_s(f5, flavor, s_vec):
    s = Subspace.span(f5, len(s_vec), [s_vec])
    a = build_A(2, f5, s, 2, flavor)
    for g in _gl2(f5):
        assert bool(check_prop1(a, g)) == normalizes_subspace(g, s, 2, flavor)


def test_singular_map_is_rejected(f5):
    a = build_A(2, f5, Subspace.zero(f5, 3), 2, "symmetric")
    check = check_prop1(a, Matrix.from_rows(f5, [[1, 1], [1, 1]]))
    assert not check and check.reason == "singular"


def test_extension_is_automorphism_for_zero_s(f7):
    a = build_A(2, f7, Subspace.zero(f7, 4), 2, "tensor")
    g = Matrix.from_rows(f7, [[3, 1], [2, 5]])
    assert is_automorphism(a, graded_extension(a, g))
