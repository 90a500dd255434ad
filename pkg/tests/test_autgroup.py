import pytest

from app.core.errors import BudgetExceeded, HypothesesNotVerified, Mismatch
from app.core.exactfield import extension_field
from app.core.linalg import Matrix, Subspace
from app.services.algebra_ops import extend_scalars, is_automorphism
from app.services.autgroup import (
    brute_force_automorphisms,
    enumerate_automorphisms,
    expected_set,
    match_expected,
    sample_automorphisms,
    u_preserving_automorphisms,
    verify_block_hypotheses,
)
from app.services.constructions import algebra_C, algebra_D, algebra_E, rigid_algebra, wrap_simple
from app.services.graded import graded_basis
from app.services.permgroups import parse_group
from app.services.pipeline import realize_finite_group


def _matches(a, auts):
    expectation = expected_set(a)
    return match_expected(auts, expectation.elements, expectation.compose, expectation.form)


def test_rigid_brute_force(rigid2_f5):
    auts = brute_force_automorphisms(rigid2_f5)
    assert auts.candidates == 625
    assert auts.order == 1
    assert auts.elements[0].is_identity()


def test_rigid_enumeration_agrees(rigid2_f5):
    auts = enumerate_automorphisms(rigid2_f5)
    assert auts.order == 1 and auts.complete
    assert _matches(rigid2_f5, auts).form == "id"


def test_wrapped_rigid(wrapped_rigid_f5):
    auts = enumerate_automorphisms(wrapped_rigid_f5)
    assert auts.order == 1
    _matches(wrapped_rigid_f5, auts)


def test_u_preserving_maps_of_b_over_f5(b2_f5):
    scan = u_preserving_automorphisms(b2_f5)
    assert scan.accepted.order == 120
    assert len(scan.rejected) == 360
    assert {pair for _, pair in scan.rejected} == {(2, 2)}


def test_u_preserving_maps_of_b_over_f7(b2_f7):
    assert u_preserving_automorphisms(b2_f7).accepted.order == 336


def test_c_group_is_special_linear(f5):
    c = algebra_C(rigid_algebra(2, f5), 2)
    verify_block_hypotheses(c)
    auts = enumerate_automorphisms(c)
    assert auts.order == 120
    _matches(c, auts)


def test_e_group_is_g(f7):
    e = algebra_E(parse_group("n=2; gens=(1 2)"), f7)
    auts = enumerate_automorphisms(e)
    assert auts.order == 2
    _matches(e, auts)


@pytest.mark.parametrize("alpha, zeta, delta", [
    (3, 2, None),
    (4, 2, [[1, 1], [0, 1]]),
    (2, 3, [[0, 1], [1, 0]]),
])
def test_wrapped_rigid_group_ignores_the_scalars(rigid2_f5, alpha, zeta, delta):
    f = rigid2_f5.field
    pairing = None if delta is None else Matrix(f, tuple(tuple(r) for r in delta))
    w = wrap_simple(rigid2_f5, alpha=alpha, zeta=zeta, delta=pairing)
    auts = enumerate_automorphisms(w)
    assert auts.order == 1
    _matches(w, auts)


@pytest.mark.parametrize("lam, mu", [(None, None), ([1, 3], None), ([1, 4], None), ([1, 2], [4, 5, 6])])
def test_e_group_ignores_lambda_and_mu(f7, lam, mu):
    e = algebra_E(parse_group("n=2; gens=(1 2)"), f7, lam=lam, mu=mu)
    auts = enumerate_automorphisms(e)
    assert auts.order == 2
    _matches(e, auts)


def test_rigid_group_survives_base_change(rigid2_f5):
    f25 = extension_field(5, 2)
    auts = enumerate_automorphisms(extend_scalars(rigid2_f5, f25))
    assert auts.order == 1 and auts.complete
    assert auts.elements[0].is_identity()


@pytest.mark.slow
def test_wrapped_rigid_group_survives_base_change(wrapped_rigid_f5):
    f25 = extension_field(5, 2)
    big = extend_scalars(wrapped_rigid_f5, f25)
    auts = enumerate_automorphisms(big)
    assert auts.order == 1
    assert auts.elements[0].is_identity()


def test_realize_c2_over_f7(f7):
    report = realize_finite_group(parse_group("n=2; gens=(1 2)"), f7)
    assert report.ok
    assert report.algebra.dim == 15
    assert report.aut_order == 2
    assert report.simple is True
    assert report.check("simple").details["seed"] == 1
    assert report.matched_form is not None


def test_realize_trivial_group(f5):
    report = realize_finite_group(parse_group("n=2; gens="), f5)
    assert report.algebra.dim == 5
    assert report.aut_order == 1


def test_budget(f5):
    c = algebra_C(rigid_algebra(2, f5), 2)
    with pytest.raises(BudgetExceeded):
        enumerate_automorphisms(c, budget=10)
    assert enumerate_automorphisms(c, budget=10, force=True).order == 120


def test_hypotheses_are_required(zero2_f5, e2_f5):
    with pytest.raises(HypothesesNotVerified):
        enumerate_automorphisms(zero2_f5)
    with pytest.raises(HypothesesNotVerified):
        enumerate_automorphisms(e2_f5.with_blocks([]))


def test_sampling_is_sound(e2_f5):
    auts = sample_automorphisms(e2_f5.with_blocks([]), rounds=50, seed=0)
    assert not auts.complete
    assert auts.contains(Matrix.identity(e2_f5.field, 2))
    assert all(is_automorphism(e2_f5, g) for g in auts.elements)


def test_mismatch_is_reported(wrapped_rigid_f5):
    f = wrapped_rigid_f5.field
    auts = enumerate_automorphisms(wrapped_rigid_f5)
    fake = Matrix.identity(f, 5).scale(2)
    with pytest.raises(Mismatch):
        match_expected(auts, [("id", Matrix.identity(f, 5)), ("double", fake)], lambda x, y: "id", "id")


@pytest.mark.slow
def test_d_group_is_normalizer_in_special_linear(f7):
    basis = graded_basis(4, 2, "tensor")
    vec = [0] * basis.size
    vec[basis.index[(2, 2)]] = 1
    d = algebra_D(rigid_algebra(2, f7), 2, Subspace.span(f7, basis.size, [vec]), 2)
    auts = enumerate_automorphisms(d)
    assert auts.order == 42
    _matches(d, auts)


@pytest.mark.slow
def test_realize_c3_over_f7(f7):
    report = realize_finite_group(parse_group("n=3; gens=(1 2 3)"), f7)
    assert report.ok
    assert report.algebra.dim == 45
    assert report.aut_order == 3
    assert report.inner.params["lambda_route"] == "normalizer"


@pytest.mark.slow
def test_realize_c2_over_f49(f49):
    report = realize_finite_group(parse_group("n=2; gens=(1 2)"), f49)
    assert report.ok
    assert report.algebra.dim == 15
    assert report.aut_order == 2
