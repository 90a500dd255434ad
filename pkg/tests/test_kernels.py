import numpy as np
import pytest

from app.core.errors import BudgetExceeded
from app.core.linalg import Matrix, determinant, is_invertible
from app.services.autgroup import brute_force_automorphisms, enumerate_automorphisms
from app.services.constructions import algebra_C, rigid_algebra, zero_algebra
from app.workers import kernels


def test_code_space():
    assert kernels.code_space(5, 2) == 625
    assert kernels.code_space(49, 3) == 49 ** 9
    with pytest.raises(BudgetExceeded) as err:
        kernels.code_space(49, 4)
    assert err.value.witness["limit"] == kernels.MAX_CODES


def test_decode_refuses_codes_past_int64():
    with pytest.raises(BudgetExceeded):
        kernels.decode_codes(0, 10, 49, 4)


def test_decode_order_matches_code_to_entries():
    mats = kernels.decode_codes(0, 16, 2, 2)
    for code in (0, 1, 6, 15):
        assert tuple(map(tuple, mats[code].tolist())) == kernels.code_to_entries(code, 2, 2)
    assert mats[1].tolist() == [[0, 0], [0, 1]]


@pytest.mark.parametrize("size", [1, 2, 3])
def test_batch_determinants_match_linalg(f49, size):
    rng = np.random.default_rng(size)
    codes = rng.integers(49, size=(25, size, size))
    dets = kernels.det_batch(f49.gf, f49.gf(codes))
    for m, d in zip(codes.tolist(), dets.tolist()):
        assert determinant(Matrix(f49, tuple(map(tuple, m)))) == d


def test_invertible_mask_over_prime_field(f5):
    mats = kernels.decode_codes(0, 625, 5, 2)
    mask = kernels.invertible_mask(f5.gf, f5.gf(mats))
    assert int(mask.sum()) == 480
    assert mask[1] == is_invertible(Matrix(f5, kernels.code_to_entries(1, 5, 2)))


def test_homomorphism_mask(rigid2_f5):
    gf = rigid2_f5.field.gf
    mats = gf([[[1, 0], [0, 1]], [[2, 0], [0, 1]], [[0, 0], [0, 0]]])
    mask = kernels.homomorphism_mask(gf, mats, list(rigid2_f5.structure))
    assert mask.tolist() == [True, False, True]


def test_brute_force_refuses_unindexable_spaces(f49):
    with pytest.raises(BudgetExceeded):
        brute_force_automorphisms(zero_algebra(4, f49), budget=10 ** 30)


def test_force_does_not_bypass_the_index_range(f49):
    c = algebra_C(rigid_algebra(2, f49), 4)
    with pytest.raises(BudgetExceeded) as err:
        enumerate_automorphisms(c, force=True)
    assert err.value.witness["limit"] == kernels.MAX_CODES
