import pytest

from app.core.errors import GroupTooLarge, InvalidPermutation, UsageError, ZeroVector
from app.core.linalg import Matrix
from app.models.permutation import Permutation
from app.services.algebra_ops import is_automorphism
from app.services.constructions import invariant_f, split_etale
from app.services.permgroups import (
    format_group,
    group_from_params,
    group_params,
    line_normalizer,
    parse_group,
    parse_permutation,
    perm_matrix,
    regular_representation,
    symmetric_group,
    vector_stabilizer,
)


@pytest.mark.parametrize("text,order", [
    ("n=3; gens=(1 2 3)", 3),
    ("n=2; gens=(1 2)", 2),
    ("n=3; gens=(1 2),(1 2 3)", 6),
    ("n=4; gens=(1 2)(3 4),(1 3)(2 4)", 4),
    ("n=3; gens=", 1),
])
def test_group_orders(text, order):
    assert parse_group(text).order == order


def test_cyclic_group_elements():
    c3 = parse_group("n=3; gens=(1 2 3)")
    assert sorted(format_group(c3)) == ["()", "(1 2 3)", "(1 3 2)"]
    assert Permutation.identity(3) in c3


def test_cycle_product_left_to_right():
    # (1 2) then (2 3): 1 -> 2 -> 3, 3 -> 2, 2 -> 1
    p = parse_permutation(3, "(1 2)(2 3)")
    assert [p(i) + 1 for i in range(3)] == [3, 1, 2]


def test_one_line_notation():
    assert parse_permutation(3, "[2,3,1]") == parse_permutation(3, "(1 2 3)")


def test_invalid_permutations():
    with pytest.raises(InvalidPermutation):
        parse_permutation(3, "(1 4)")
    with pytest.raises(InvalidPermutation):
        parse_permutation(3, "(1 1 2)")
    with pytest.raises(InvalidPermutation):
        parse_permutation(3, "[1,1,2]")
    with pytest.raises(UsageError):
        parse_group("gens=(1 2)")


@pytest.mark.parametrize("gens", [
    "(1 2 banana",
    "xyz",
    "(1 2),",
    "(1 2) x",
    "(1 2),,(1 2 3)",
    "(1 banana)",
    "[2,1",
])
def test_malformed_generators_are_rejected(gens):
    with pytest.raises(InvalidPermutation):
        parse_group(f"n=3; gens={gens}")


def test_unknown_group_key():
    with pytest.raises(UsageError):
        parse_group("n=3; gens=(1 2); order=6")


def test_adjacent_cycles_form_one_generator():
    spaced = parse_group("n=3; gens=(1 2) (1 2 3)")
    assert spaced == parse_group("n=3; gens=(1 2)(1 2 3)")
    assert spaced.order == 2
    assert len(spaced.generators) == 1
    assert parse_group("n=3; gens=(1 2), (1 2 3)").order == 6


def test_closure_agrees_with_sympy():
    from sympy.combinatorics.named_groups import AlternatingGroup, DihedralGroup

    a4 = parse_group("n=4; gens=(1 2 3),(2 3 4)")
    assert a4.order == AlternatingGroup(4).order() == 12
    d4 = parse_group("n=4; gens=(1 2 3 4),(1 3)")
    assert d4.order == DihedralGroup(4).order() == 8
    assert all(g * h in d4 for g in d4.elements for h in d4.elements)
    assert all(g * g.inverse() == Permutation.identity(4) for g in d4.elements)


def test_composition_applies_the_right_factor_first():
    a = parse_permutation(3, "(1 2)")
    b = parse_permutation(3, "(2 3)")
    assert all((a * b)(i) == a(b(i)) for i in range(3))
    assert str(a * b) == "(1 2 3)"


def test_group_cap():
    with pytest.raises(GroupTooLarge):
        parse_group("n=5; gens=(1 2),(1 2 3 4 5)", cap=100)


def test_group_params_round_trip():
    g = parse_group("n=3; gens=(1 2),(1 2 3)")
    assert group_from_params(group_params(g)) == g


def test_regular_representation_of_z3():
    table = [[0, 1, 2], [1, 2, 0], [2, 0, 1]]
    assert regular_representation(table).order == 3


def test_perm_matrix(f5):
    swap = perm_matrix(parse_permutation(2, "(1 2)"), f5)
    assert swap == Matrix.from_rows(f5, [[0, 1], [1, 0]])
    assert perm_matrix(Permutation.identity(3), f5) == Matrix.identity(f5, 3)


def test_cycle_permutes_split_etale(f7):
    e3 = split_etale(3, f7)
    assert is_automorphism(e3, perm_matrix(parse_permutation(3, "(1 2 3)"), f7))


def test_invariant_line_of_c3(f11):
    c3 = parse_group("n=3; gens=(1 2 3)")
    f = invariant_f(c3, [1, 2, 5], f11)
    assert line_normalizer(3, f11, f, 3) == c3
    assert vector_stabilizer(3, f11, f, 3) == c3


def test_invariant_line_of_s2(f7):
    s2 = parse_group("n=2; gens=(1 2)")
    f = invariant_f(s2, [1, 2], f7)
    assert f == (2, 5, 2)
    assert line_normalizer(2, f7, f, 2) == s2


def test_fully_symmetric_vector_is_normalized_by_everything(f7):
    # e1*e2*e3 in Sym^3 of a 3-dimensional space
    from app.services.graded import graded_basis
    basis = graded_basis(3, 3, "symmetric")
    f = [0] * basis.size
    f[basis.index[(0, 1, 2)]] = 1
    assert line_normalizer(3, f7, f, 3) == symmetric_group(3)


def test_zero_vector_has_no_line(f7):
    with pytest.raises(ZeroVector):
        line_normalizer(2, f7, (0, 0, 0), 2)
