import pytest

from app.core.errors import TooLargeForExhaustive, UsageError
from app.core.linalg import Subspace
from app.services.constructions import rigid_algebra, split_etale, wrap_simple
from app.services.simplicity import is_simple, projective_points


def test_projective_points_are_normalized(f3):
    points = list(projective_points(f3, 2))
    assert points == [(1, 0), (1, 1), (1, 2), (0, 1)]


def test_etale_is_not_simple(e2_f5):
    verdict = is_simple(e2_f5, "exhaustive")
    assert verdict.status == "not_simple"
    assert verdict.witness == Subspace.span(e2_f5.field, 2, [(1, 0)])


def test_wrapped_rigid_is_simple(wrapped_rigid_f5):
    verdict = is_simple(wrapped_rigid_f5, "exhaustive")
    assert verdict.status == "simple"
    assert verdict.details["points_checked"] == 781


def test_zeta_zero_wrap_is_simple(f3):
    w = wrap_simple(rigid_algebra(2, f3), variant="zeta_zero")
    verdict = is_simple(w, "exhaustive")
    assert verdict.status == "simple"
    assert verdict.details["points_checked"] == 121


def test_zero_multiplication_is_never_simple(zero2_f5):
    verdict = is_simple(zero2_f5, "norton")
    assert verdict.status == "not_simple"
    assert verdict.details["reason"] == "zero multiplication"


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_norton_never_refutes_a_simple_algebra(wrapped_rigid_f5, seed):
    assert is_simple(wrapped_rigid_f5, "norton", seed).status in ("simple", "inconclusive")


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_norton_never_certifies_a_split_algebra(e2_f5, seed):
    verdict = is_simple(e2_f5, "norton", seed)
    assert verdict.status in ("not_simple", "inconclusive")
    if verdict.status == "not_simple":
        assert 0 < verdict.witness.dim < 2


def test_sampling_finds_an_ideal(f7):
    verdict = is_simple(split_etale(3, f7), "sampled", rounds=5)
    assert verdict.status == "not_simple"


def test_sampling_is_inconclusive_on_simple_algebras(wrapped_rigid_f5):
    assert is_simple(wrapped_rigid_f5, "sampled", rounds=10).status == "inconclusive"


def test_exhaustive_needs_a_finite_field(qq):
    with pytest.raises(TooLargeForExhaustive):
        is_simple(split_etale(2, qq), "exhaustive")


def test_unknown_mode(e2_f5):
    with pytest.raises(UsageError):
        is_simple(e2_f5, "guess")
