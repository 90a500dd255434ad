import pytest

from app.core.errors import (
    BadEigenvalues,
    BadLambda,
    BadScalars,
    FieldTooSmall,
    PairingViolatesOrthogonality,
    TrivialGroup,
    ZeroLambda,
)
from app.core.exactfield import prime_field
from app.core.linalg import Matrix, Subspace
from app.services.algebra_ops import basis_vector, mult_operator, multiply, unique_left_identity
from app.services.constructions import (
    algebra_C,
    algebra_D,
    algebra_E,
    choose_lambda,
    exterior_B,
    exterior_extension,
    invariant_f,
    lambda_for_group,
    rigid_algebra,
    special_linear,
    validate_lambda,
    wrap_simple,
)
from app.services.graded import graded_basis
from app.services.permgroups import parse_group
from app.utils.math import sl_order


def _d_subspace(field, s=2, n=2, r=2):
    basis = graded_basis(s + n, r, "tensor")
    vec = [0] * basis.size
    vec[basis.index[(s,) * r]] = 1
    return Subspace.span(field, basis.size, [vec])


def test_rigid_defaults(rigid2_f5):
    assert rigid2_f5.dim == 2
    assert rigid2_f5.params["beta"] == ["2"]
    assert rigid2_f5.block("unit").role.value == "unit-line"


def test_rigid_needs_room(f3):
    with pytest.raises(FieldTooSmall):
        rigid_algebra(3, f3)


def test_rigid_rejects_bad_beta(f5):
    with pytest.raises(BadEigenvalues):
        rigid_algebra(3, f5, [2, 2])
    with pytest.raises(BadEigenvalues):
        rigid_algebra(2, f5, [1])


def test_exterior_algebra_layout(b2_f5):
    assert b2_f5.basis_names == ("u1", "u2", "u1^u2")
    u1, u2, top = (basis_vector(b2_f5, i) for i in range(3))
    assert multiply(b2_f5, u1, u2) == top
    assert multiply(b2_f5, u2, u1) == (0, 0, 4)
    assert multiply(b2_f5, top, top) == top
    assert multiply(b2_f5, u1, u1) == (0, 0, 0)


def test_exterior_extension_blocks(f7):
    g = Matrix.from_rows(f7, [[1, 2], [3, 4]])
    ext = exterior_extension(g)
    assert ext.submatrix([0, 1], [0, 1]) == g
    assert ext[2, 2] == (1 * 4 - 2 * 3) % 7


def test_c_dimension_and_unit(f5):
    c = algebra_C(rigid_algebra(2, f5), 2)
    assert c.dim == 6
    assert [b.name for b in c.top_blocks] == ["c", "L", "W1", "W2"]
    assert unique_left_identity(c) == basis_vector(c, 0)


def test_c_right_unit_operator(f7):
    c = algebra_C(rigid_algebra(2, f7), 2)
    assert c.params["gamma"] == ["2", "3", "4"]
    right = mult_operator(c, basis_vector(c, 0), "right")
    assert right == Matrix.diagonal(f7, [1, 2, 2, 3, 3, 4])


def test_c_rejects_repeated_gamma(f7):
    with pytest.raises(BadEigenvalues):
        algebra_C(rigid_algebra(2, f7), 2, [2, 2, 3])


def test_c_field_bound(f3):
    with pytest.raises(FieldTooSmall):
        algebra_C(rigid_algebra(2, f3), 2)


def test_d_dimension(f7):
    d = algebra_D(rigid_algebra(2, f7), 2, _d_subspace(f7), 2)
    assert d.dim == 26
    assert d.block("A1.U").linked_to == "C.W1"
    assert unique_left_identity(d) == basis_vector(d, 0)


def test_d_pairing_must_respect_the_split(f7):
    phi = Matrix.identity(f7, 4) + Matrix.from_rows(f7, [[0, 0, 1, 0], [0] * 4, [0] * 4, [0] * 4])
    with pytest.raises(PairingViolatesOrthogonality):
        algebra_D(rigid_algebra(2, f7), 2, _d_subspace(f7), 2, phi=phi)


def test_wrap_defaults(wrapped_rigid_f5):
    assert wrapped_rigid_f5.dim == 5
    assert wrapped_rigid_f5.params["alpha"] == "2"
    assert wrapped_rigid_f5.params["zeta"] == "3"
    assert wrapped_rigid_f5.block("Z").linked_to == "R"


def test_wrap_products(wrapped_rigid_f5):
    w = wrapped_rigid_f5
    e, z1, r0 = basis_vector(w, 0), basis_vector(w, 1), basis_vector(w, 3)
    assert multiply(w, z1, r0) == e
    assert all(c == 0 for c in multiply(w, r0, z1))
    assert multiply(w, z1, e) == tuple(3 * x for x in z1)


def test_wrap_scalar_rules(rigid2_f5, f3):
    with pytest.raises(BadScalars):
        wrap_simple(rigid2_f5, alpha=2, zeta=2)
    with pytest.raises(BadScalars):
        wrap_simple(rigid2_f5, alpha=1, zeta=3)
    with pytest.raises(FieldTooSmall):
        wrap_simple(rigid_algebra(2, f3))


def test_zeta_zero_wrap(f3):
    w = wrap_simple(rigid_algebra(2, f3), variant="zeta_zero")
    assert w.dim == 5
    assert w.params["zeta"] == "0"


def test_e_dimension(f7):
    c2 = parse_group("n=2; gens=(1 2)")
    e = algebra_E(c2, f7)
    assert e.dim == 7
    assert e.params["lambda"] == ["1", "2"]
    assert e.params["lambda_route"] == "ratios"


def test_e_rejects_trivial_group_and_small_fields(f3, f7):
    with pytest.raises(TrivialGroup):
        algebra_E(parse_group("n=2; gens="), f7)
    with pytest.raises(FieldTooSmall, match="mu"):
        algebra_E(parse_group("n=2; gens=(1 2)"), f3)


def test_choose_lambda(f5, f11):
    assert choose_lambda(2, f5) == [1, 2]
    assert choose_lambda(3, f11) == [1, 2, 3]


def test_choose_lambda_fails_over_f3(f3):
    with pytest.raises(FieldTooSmall):
        choose_lambda(2, f3)


def test_lambda_validation(f7, f11):
    c3 = parse_group("n=3; gens=(1 2 3)")
    assert validate_lambda(c3, [1, 2, 5], f11) == "ratios"
    with pytest.raises(ZeroLambda):
        invariant_f(c3, [1, 0, 2], f11)
    with pytest.raises(BadLambda):
        invariant_f(c3, [1, 2], f11)
    s3 = parse_group("n=3; gens=(1 2),(1 2 3)")
    lam, route = lambda_for_group(s3, f7)
    assert route in ("ratios", "normalizer")
    assert len(lam) == 3


@pytest.mark.parametrize("q", [3, 5])
def test_special_linear_order(q):
    assert len(special_linear(2, prime_field(q))) == sl_order(2, q)
