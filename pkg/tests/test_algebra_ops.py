import pytest

from app.core.errors import DimensionMismatch, FieldMismatch, NoUniqueLeftIdentity, ZeroVector
from app.core.exactfield import format_raw, parse_raw
from app.core.linalg import Matrix, Subspace, is_invertible
from app.services.algebra_ops import (
    TRACE_KINDS,
    basis_vector,
    direct_sum,
    eigenblock_decomposition,
    export_tensor,
    extend_scalars,
    format_vector,
    ideal_generated_by,
    is_automorphism,
    left_identities,
    mult_operator,
    multiply,
    restrict_to_block,
    stabilizes_entries,
    stabilizes_tensor,
    trace_form,
    unique_left_identity,
)
from app.services.constructions import exterior_extension
from app.workers.kernels import code_to_entries


def test_rigid_structure_tensor(rigid2_f5):
    assert set(export_tensor(rigid2_f5)) == {(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 2), (1, 1, 1, 1)}


def test_multiply_is_bilinear(rigid2_f5):
    x, y = (1, 2), (3, 4)
    # (e + 2 e1)(3 e + 4 e1) = 3e + 4e1 + 6*beta e1 + 8 e1 with beta = 2
    assert multiply(rigid2_f5, x, y) == (3, (4 + 12 + 8) % 5)


def test_mult_operator_sides(rigid2_f5):
    e1 = basis_vector(rigid2_f5, 1)
    right = mult_operator(rigid2_f5, e1, "right")
    assert right.apply((1, 0)) == (0, 1)
    left = mult_operator(rigid2_f5, e1, "left")
    assert left.apply((1, 0)) == (0, 2)
    with pytest.raises(DimensionMismatch):
        mult_operator(rigid2_f5, (1, 0, 0), "left")


def test_unique_left_identity(rigid2_f5, wrapped_rigid_f5):
    assert unique_left_identity(rigid2_f5) == (1, 0)
    assert unique_left_identity(wrapped_rigid_f5) == basis_vector(wrapped_rigid_f5, 0)


def test_left_identity_family_and_empty(e2_f5, zero2_f5):
    # e1 + e2 is the only identity of E_2; the zero algebra has none
    assert unique_left_identity(e2_f5) == (1, 1)
    assert left_identities(zero2_f5).kind == "empty"
    with pytest.raises(NoUniqueLeftIdentity):
        unique_left_identity(zero2_f5)


def test_eigenblocks_of_wrapped_rigid(wrapped_rigid_f5):
    e = unique_left_identity(wrapped_rigid_f5)
    blocks = eigenblock_decomposition(wrapped_rigid_f5, e)
    dims = {b.eigenvalue: b.space.dim for b in blocks}
    alpha = wrapped_rigid_f5.block("R").eigenvalue
    zeta = wrapped_rigid_f5.block("Z").eigenvalue
    assert dims == {zeta: 2, alpha: 2}


def test_identity_is_automorphism(b2_f5):
    assert is_automorphism(b2_f5, Matrix.identity(b2_f5.field, 3))


def test_violating_pair_of_b(b2_f5):
    g = exterior_extension(Matrix.diagonal(b2_f5.field, [1, 2]))
    check = is_automorphism(b2_f5, g)
    assert not check
    assert check.pair == (2, 2)
    assert b2_f5.basis_names[2] == "u1^u2"


def test_extension_of_determinant_one_map(b2_f7):
    assert is_automorphism(b2_f7, exterior_extension(Matrix.diagonal(b2_f7.field, [2, 4])))
    assert is_automorphism(b2_f7, exterior_extension(Matrix.diagonal(b2_f7.field, [2, 3]))).pair == (2, 2)


def test_stabilizes_tensor_agrees(b2_f7):
    f = b2_f7.field
    good = exterior_extension(Matrix.diagonal(f, [2, 4]))
    bad = exterior_extension(Matrix.diagonal(f, [2, 3]))
    assert stabilizes_tensor(b2_f7, good)
    assert not stabilizes_tensor(b2_f7, bad)
    assert not stabilizes_tensor(b2_f7, Matrix.zeros(f, 3, 3))


def all_matrices(f, k):
    for code in range(f.order ** (k * k)):
        yield Matrix(f, code_to_entries(code, f.order, k))


def test_exported_entries_decide_stabilization(rigid2_f5):
    a = rigid2_f5
    f = a.field
    # entries as a consumer of export-tensor sees them
    text = [[i, j, k, format_raw(f, c)] for i, j, k, c in export_tensor(a)]
    entries = [(i, j, k, parse_raw(f, c)) for i, j, k, c in text]
    fixed = 0
    for g in all_matrices(f, 2):
        verdict = stabilizes_entries(f, a.dim, entries, g)
        assert verdict == stabilizes_tensor(a, g) == is_automorphism(a, g).ok
        fixed += verdict
    assert fixed == 1


@pytest.mark.parametrize("name, expected", [("b2_f5", 120), ("b2_f7", 336)])
def test_stabilization_matches_automorphism_on_extensions(request, name, expected):
    a = request.getfixturevalue(name)
    f = a.field
    entries = export_tensor(a)
    fixed = 0
    for g in all_matrices(f, 2):
        if not is_invertible(g):
            continue
        ext = exterior_extension(g)
        verdict = stabilizes_entries(f, a.dim, entries, ext)
        assert verdict == is_automorphism(a, ext).ok
        fixed += verdict
    assert fixed == expected


def test_stabilizes_entries_needs_matching_field(rigid2_f5, f7):
    with pytest.raises(FieldMismatch):
        stabilizes_entries(rigid2_f5.field, 2, export_tensor(rigid2_f5), Matrix.identity(f7, 2))


def test_ideal_generated_by(e2_f5):
    assert ideal_generated_by(e2_f5, (1, 0)) == Subspace.span(e2_f5.field, 2, [(1, 0)])
    with pytest.raises(ZeroVector):
        ideal_generated_by(e2_f5, (0, 0))


def test_trace_forms_of_etale(e2_f5):
    for kind in TRACE_KINDS:
        form = trace_form(e2_f5, kind)
        assert form.gram == Matrix.identity(e2_f5.field, 2)
        assert form.nondegenerate


def test_trace_form_of_zero_algebra(zero2_f5):
    assert not trace_form(zero2_f5, "LL").nondegenerate


def test_direct_sum_and_restriction(rigid2_f5, e2_f5):
    s = direct_sum(rigid2_f5, e2_f5)
    assert s.dim == 4
    assert all(c == 0 for c in multiply(s, basis_vector(s, 0), basis_vector(s, 2)))
    assert restrict_to_block(s, "right").structure == e2_f5.structure


def test_direct_sum_needs_one_field(rigid2_f5, f7):
    from app.services.constructions import split_etale
    with pytest.raises(FieldMismatch):
        direct_sum(rigid2_f5, split_etale(2, f7))


def test_extend_scalars(e2_f5):
    from app.core.exactfield import extension_field
    big = extension_field(5, 2)
    lifted = extend_scalars(e2_f5, big)
    assert lifted.field == big
    assert unique_left_identity(lifted) == (1, 1)


def test_format_vector(rigid2_f5):
    assert format_vector(rigid2_f5, (1, 3)) == "e + 3*e1"
    assert format_vector(rigid2_f5, (0, 0)) == "0"
