from fractions import Fraction

import pytest

from app.core.errors import (
    BadScalars,
    DivisionByZero,
    FieldMismatch,
    FieldTooSmall,
    MissingModulus,
    NonPrimeCharacteristic,
    ReducibleModulus,
)
from app.core.exactfield import (
    FieldSpec,
    default_modulus,
    distinct_units,
    elements,
    embed_prime_field,
    extension_field,
    format_field,
    format_raw,
    parse_field,
    parse_raw,
    parse_scalar,
    prime_field,
    rationals,
)


def test_prime_and_extension_orders(f7, f49):
    assert f7.order == 7
    assert f49.order == 49
    assert f49.modulus == (1, 0, 1)
    assert str(f49) == "F_7^2"


def test_non_prime_characteristic():
    with pytest.raises(NonPrimeCharacteristic):
        prime_field(4)


def test_reducible_modulus_rejected():
    # x^2 + x + 1 has the root 2 mod 7
    with pytest.raises(ReducibleModulus):
        extension_field(7, 2, [1, 1, 1])


def test_missing_modulus():
    with pytest.raises(MissingModulus):
        FieldSpec(7, 2)


def test_default_modulus_for_f4():
    assert default_modulus(2, 2) == (1, 1, 1)
    f4 = extension_field(2, 2)
    x = 2
    assert f4.mul(x, x) == 3  # x^2 = x + 1


def test_inverse_mod_7(f7):
    assert f7.inv(3) == 5
    assert f7.mul(3, f7.inv(3)) == 1


def test_extension_negation(f49):
    x = parse_raw(f49, "[0,1]")
    assert f49.add(x, f49.mul(6, x)) == 0


def test_rational_division(qq):
    assert qq.div(Fraction(1, 2), Fraction(3, 4)) == Fraction(2, 3)


def test_division_by_zero(f7, qq):
    with pytest.raises(DivisionByZero):
        f7.inv(0)
    with pytest.raises(DivisionByZero):
        qq.div(Fraction(1), Fraction(0))


def test_distinct_units(f3, f7, qq):
    assert [s.raw for s in distinct_units(f7, 3)] == [2, 3, 4]
    assert [s.raw for s in distinct_units(qq, 4)] == [2, 3, 4, 5]
    with pytest.raises(FieldTooSmall):
        distinct_units(f3, 3)


def test_distinct_units_with_exclusions(f7):
    assert [s.raw for s in distinct_units(f7, 2, exclude=[2])] == [3, 4]


def test_canonical_enumeration(f49):
    values = [s.raw for s in elements(f49)]
    assert values == list(range(49))
    assert f49.digits(values[8]) == [1, 1]


@pytest.mark.parametrize("text,order", [("Q", None), ("7", 7), ("7,2,1,0,1", 49), ("2,3", 8)])
def test_parse_field(text, order):
    assert parse_field(text).order == order


def test_format_field_round_trip(f49, f7, qq):
    for f in (f49, f7, qq):
        assert parse_field(format_field(f)) == f


def test_scalar_text_forms(f49, f7, qq):
    assert format_raw(qq, Fraction(-3, 4)) == "-3/4"
    assert parse_raw(qq, "-3/4") == Fraction(-3, 4)
    assert parse_raw(f7, "3/2") == f7.div(3, 2)
    assert format_raw(f49, parse_raw(f49, "[3,5]")) == "[3,5]"
    with pytest.raises(BadScalars):
        parse_raw(f7, "abc")


def test_scalar_operators(f7):
    a = parse_scalar(f7, "3")
    assert a * 5 == 1
    assert (a - 4) == 6
    assert a.inverse() == 5
    assert a ** 6 == 1


def test_scalar_field_mismatch(f5, f7):
    with pytest.raises(FieldMismatch):
        parse_scalar(f7, "1") + parse_scalar(f5, "1")


def test_embed_prime_field(f7, f49, f5):
    assert embed_prime_field(f49, f7, 3) == 3
    with pytest.raises(FieldMismatch):
        embed_prime_field(f49, f5, 3)


def test_rationals_have_no_order():
    q = rationals()
    assert q.order is None
    assert not q.is_finite
