# app/core/exactfield.py
"""Exact scalar fields: the rationals, prime fields and finite extensions.

Internally every field works on *raw* values:

  - prime field F_p: an int residue in [0, p)
  - extension F_{p^k}: an int code ``sum(c_i * p**i)`` of the coefficient
    vector of a polynomial of degree < k in the root of ``modulus``
  - rationals: a ``fractions.Fraction``

Finite fields are backed by ``galois``: its integer representation of
GF(p^k) is the same code, so ``FieldSpec.gf`` turns raw values into
``FieldArray``s for the matrix work in linalg and the batch kernels. Scalar
arithmetic on extension fields reads tables computed by galois.
``Scalar`` wraps a raw value for public use.
The canonical order of a finite field is the order of the integer codes, so
the prime subfield comes first.
"""
from __future__ import annotations

import logging
import operator
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Iterable, Iterator, Sequence

import galois
import numpy as np
from sympy import isprime

from app.core.errors import (
    BadScalars,
    DivisionByZero,
    FieldMismatch,
    FieldTooSmall,
    MissingModulus,
    NonPrimeCharacteristic,
    ReducibleModulus,
)

logger = logging.getLogger(__name__)

_TABLE_LIMIT = 1024


@lru_cache(maxsize=None)
def galois_prime_field(p: int):
    return galois.GF(p)


@lru_cache(maxsize=None)
def galois_field(p: int, k: int = 1, modulus: tuple[int, ...] | None = None):
    """The galois class of F_p or F_p[x]/(modulus); its integer codes are ours."""
    base = galois_prime_field(p)
    if k == 1:
        return base
    return galois.GF(p ** k, irreducible_poly=galois.Poly(list(reversed(modulus)), field=base))


def is_irreducible_mod_p(p: int, coeffs: Sequence[int]) -> bool:
    """Irreducibility of a polynomial over F_p given low-to-high coefficients."""
    poly = galois.Poly(list(reversed([int(c) % p for c in coeffs])), field=galois_prime_field(p))
    if poly.degree < 1:
        return False
    return bool(poly.is_irreducible())


@lru_cache(maxsize=None)
def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """First monic irreducible of degree k over F_p, ordered by the code of its lower coefficients."""
    for tail in range(p ** k):
        coeffs = [(tail // p ** i) % p for i in range(k)] + [1]
        if coeffs[0] == 0:
            continue
        if is_irreducible_mod_p(p, coeffs):
            return tuple(coeffs)
    raise ReducibleModulus(f"no irreducible polynomial of degree {k} over F_{p}")


@dataclass(frozen=True)
class FieldSpec:
    """Descriptor of an exact field. ``characteristic == 0`` means the rationals."""

    characteristic: int
    degree: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        p, k = self.characteristic, self.degree
        if p == 0:
            if k != 1 or self.modulus is not None:
                raise NonPrimeCharacteristic("the rationals have no extension degree or modulus")
            return
        if p < 2 or not isprime(p):
            raise NonPrimeCharacteristic(f"characteristic {p} is not prime", witness={"characteristic": p})
        if k < 1:
            raise MissingModulus(f"extension degree must be positive, got {k}")
        if k == 1:
            if self.modulus is not None:
                object.__setattr__(self, "modulus", None)
            return
        if self.modulus is None:
            raise MissingModulus(f"F_{p}^{k} needs a modulus polynomial")
        mod = tuple(int(c) % p for c in self.modulus)
        if len(mod) != k + 1 or mod[-1] != 1:
            raise ReducibleModulus(f"modulus must be monic of degree {k}", witness={"modulus": list(mod)})
        if not is_irreducible_mod_p(p, mod):
            raise ReducibleModulus(f"modulus {list(mod)} is reducible over F_{p}", witness={"modulus": list(mod)})
        object.__setattr__(self, "modulus", mod)

    # pickling keeps only the descriptor; the galois class and tables are rebuilt lazily
    def __getstate__(self):
        return (self.characteristic, self.degree, self.modulus)

    def __setstate__(self, state):
        object.__setattr__(self, "characteristic", state[0])
        object.__setattr__(self, "degree", state[1])
        object.__setattr__(self, "modulus", state[2])

    # ------------------------------------------------------------------ shape
    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    @property
    def is_prime(self) -> bool:
        return self.characteristic != 0 and self.degree == 1

    @property
    def order(self) -> int | None:
        return None if self.is_rational else self.characteristic ** self.degree

    @property
    def zero(self):
        return Fraction(0) if self.is_rational else 0

    @property
    def one(self):
        return Fraction(1) if self.is_rational else 1

    def __str__(self) -> str:
        if self.is_rational:
            return "Q"
        if self.degree == 1:
            return f"F_{self.characteristic}"
        return f"F_{self.characteristic}^{self.degree}"

    # ------------------------------------------------------ galois backing
    @cached_property
    def gf(self):
        """The galois ``FieldArray`` class of a finite field."""
        if self.is_rational:
            raise FieldMismatch("the rationals have no galois field class")
        return galois_field(self.characteristic, self.degree, self.modulus)

    def to_gf(self, values):
        """Raw codes (any nesting) as a galois array."""
        return self.gf(np.asarray(values, dtype=np.int64))

    def digits(self, code: int) -> list[int]:
        p = self.characteristic
        return [(code // p ** i) % p for i in range(self.degree)]

    def from_digits(self, digits: Iterable[int]) -> int:
        p = self.characteristic
        return sum((int(c) % p) * p ** i for i, c in enumerate(digits))

    @cached_property
    def _tables(self) -> tuple | None:
        """add, neg, mul and inv tables of an extension field read off galois (small q only)."""
        if self.order > _TABLE_LIMIT:
            return None
        x = self.gf.elements
        add = (x[:, None] + x[None, :]).view(np.ndarray).tolist()
        neg = (-x).view(np.ndarray).tolist()
        mul = (x[:, None] * x[None, :]).view(np.ndarray).tolist()
        inv = [0] + (x[1:] ** -1).view(np.ndarray).tolist()
        logger.debug("Arithmetic tables for %s built from galois", self)
        return add, neg, mul, inv

    def _gf_apply(self, op, *codes) -> int:
        gf = self.gf
        return int(op(*(gf(c) for c in codes)))

    # ------------------------------------------------------- raw arithmetic
    def add(self, a, b):
        if self.degree == 1:
            return a + b if self.characteristic == 0 else (a + b) % self.characteristic
        t = self._tables
        return t[0][a][b] if t is not None else self._gf_apply(operator.add, a, b)

    def neg(self, a):
        if self.degree == 1:
            return -a if self.characteristic == 0 else (-a) % self.characteristic
        t = self._tables
        return t[1][a] if t is not None else self._gf_apply(operator.neg, a)

    def sub(self, a, b):
        if self.degree == 1:
            return a - b if self.characteristic == 0 else (a - b) % self.characteristic
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.degree == 1:
            return a * b if self.characteristic == 0 else (a * b) % self.characteristic
        t = self._tables
        return t[2][a][b] if t is not None else self._gf_apply(operator.mul, a, b)

    def inv(self, a):
        if a == 0:
            raise DivisionByZero(f"inverse of zero in {self}")
        if self.characteristic == 0:
            return 1 / Fraction(a)
        if self.degree == 1:
            return pow(a, -1, self.characteristic)
        t = self._tables
        return t[3][a] if t is not None else self._gf_apply(np.reciprocal, a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e: int):
        if e < 0:
            return self.power(self.inv(a), -e)
        if self.is_rational:
            return Fraction(a) ** e
        if self.degree == 1:
            return pow(a, e, self.characteristic)
        return int(self.gf(a) ** e)

    def from_int(self, n: int):
        if self.characteristic == 0:
            return Fraction(n)
        return int(n) % self.characteristic

    def normalize(self, value: Any):
        """Coerce an int, Fraction, Scalar or digit list to a raw value of this field."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"scalar of {value.field} used in {self}")
            return value.raw
        if self.is_rational:
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            if isinstance(value, str):
                return parse_raw(self, value)
            raise BadScalars(f"cannot read {value!r} as a rational")
        if isinstance(value, (list, tuple)):
            if len(value) > self.degree:
                raise BadScalars(f"too many coefficients for {self}: {value!r}")
            return self.from_digits(value) if self.degree > 1 else int(value[0]) % self.characteristic
        if isinstance(value, Fraction):
            return self.div(self.from_int(value.numerator), self.from_int(value.denominator))
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, str):
            return parse_raw(self, value)
        raise BadScalars(f"cannot read {value!r} in {self}")

    # ---------------------------------------------------------- enumeration
    def elements(self) -> Iterator:
        """Canonical enumeration: codes 0..q-1, or 0, 1, 2, ... for the rationals."""
        if self.is_rational:
            n = 0
            while True:
                yield Fraction(n)
                n += 1
        else:
            yield from range(self.order)

    def nonzero(self) -> Iterator:
        return (x for x in self.elements() if x != self.zero)

    def random(self, rng: random.Random):
        if self.is_rational:
            return Fraction(rng.randint(-9, 9))
        return rng.randrange(self.order)

    def scalar(self, value: Any) -> "Scalar":
        return Scalar(self, self.normalize(value))


class Scalar:
    """Public scalar: a raw value bound to its field."""

    __slots__ = ("field", "raw")

    def __init__(self, field: FieldSpec, raw):
        self.field = field
        self.raw = raw

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.raw
        return self.field.normalize(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.raw, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.raw, self._other(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._other(other), self.raw))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.raw, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.raw, self._other(other)))

    def __rtruediv__(self, other):
        return Scalar(self.field, self.field.div(self._other(other), self.raw))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.raw))

    def __pow__(self, e: int):
        return Scalar(self.field, self.field.power(self.raw, e))

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.raw))

    def is_zero(self) -> bool:
        return self.raw == self.field.zero

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.raw == other.raw
        if isinstance(other, (int, Fraction)):
            return self.raw == self.field.normalize(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.raw))

    def __str__(self):
        return format_raw(self.field, self.raw)

    def __repr__(self):
        return f"Scalar({self.field}, {format_raw(self.field, self.raw)})"


# ---------------------------------------------------------------- factories

def rationals() -> FieldSpec:
    return FieldSpec(0)


def prime_field(p: int) -> FieldSpec:
    return FieldSpec(p)


def extension_field(p: int, k: int, modulus: Sequence[int] | None = None) -> FieldSpec:
    if k == 1:
        return FieldSpec(p)
    if modulus is None:
        if p < 2 or not isprime(p):
            raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
        modulus = default_modulus(p, k)
    return FieldSpec(p, k, tuple(modulus))


def parse_field(text: str) -> FieldSpec:
    """Read ``Q`` or ``p[,k[,c0,c1,...]]`` (modulus coefficients low to high)."""
    text = text.strip()
    if text.upper() in ("Q", "QQ", "0"):
        return rationals()
    parts = [t for t in text.replace("[", "").replace("]", "").replace(":", ",").replace(" ", ",").split(",") if t]
    try:
        nums = [int(t) for t in parts]
    except ValueError as exc:
        raise BadScalars(f"cannot read field {text!r}") from exc
    if len(nums) == 1:
        return prime_field(nums[0])
    return extension_field(nums[0], nums[1], nums[2:] or None)


def format_field(field: FieldSpec) -> str:
    if field.is_rational:
        return "Q"
    if field.degree == 1:
        return str(field.characteristic)
    return f"{field.characteristic},{field.degree}," + ",".join(str(c) for c in field.modulus)


# ------------------------------------------------------------ text forms

def format_raw(field: FieldSpec, raw) -> str:
    if field.is_rational:
        raw = Fraction(raw)
        return str(raw.numerator) if raw.denominator == 1 else f"{raw.numerator}/{raw.denominator}"
    if field.degree == 1:
        return str(raw)
    return "[" + ",".join(str(c) for c in field.digits(raw)) + "]"


def parse_raw(field: FieldSpec, text: str):
    text = str(text).strip()
    try:
        if field.is_rational:
            return Fraction(text)
        if text.startswith("["):
            digits = [int(t) for t in text.strip("[]").split(",") if t.strip()]
            if len(digits) > field.degree:
                raise BadScalars(f"too many coefficients for {field}: {text}")
            return field.from_digits(digits) if field.degree > 1 else digits[0] % field.characteristic
        if "/" in text:
            num, den = text.split("/")
            return field.div(field.from_int(int(num)), field.from_int(int(den)))
        return field.from_int(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise BadScalars(f"cannot read scalar {text!r} in {field}") from exc


def parse_scalar(field: FieldSpec, text: str) -> Scalar:
    return Scalar(field, parse_raw(field, text))


def format_scalar(value: Scalar) -> str:
    return format_raw(value.field, value.raw)


# ---------------------------------------------------------------- helpers

def elements(field: FieldSpec) -> Iterator[Scalar]:
    return (Scalar(field, x) for x in field.elements())


def distinct_units(field: FieldSpec, count: int, exclude: Iterable = ()) -> list[Scalar]:
    """First ``count`` elements outside {0, 1} and ``exclude`` in canonical order."""
    banned = {field.zero, field.one} | {field.normalize(x) for x in exclude}
    chosen: list[Scalar] = []
    if count <= 0:
        return chosen
    for x in field.elements():
        if x in banned:
            continue
        chosen.append(Scalar(field, x))
        if len(chosen) == count:
            return chosen
    raise FieldTooSmall(
        f"{field} has fewer than {count} units outside {{0, 1}} and the excluded values",
        witness={"field_order": field.order, "requested": count},
    )


def embed_prime_field(big: FieldSpec, small: FieldSpec, raw):
    """Re-read a raw value of ``small`` inside ``big`` (identity or F_p inside F_{p^k})."""
    if small == big:
        return raw
    if small.is_prime and big.is_finite and big.characteristic == small.characteristic:
        return int(raw)
    raise FieldMismatch(f"{small} does not embed canonically into {big}")
