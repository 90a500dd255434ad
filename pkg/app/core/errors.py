# app/core/errors.py
"""Exception hierarchy shared by every service and the CLI.

Each error has a stable ``code``, a human ``message`` and an optional JSON-able
``witness``. The ``exit_code`` class attribute is what the CLI returns.
"""
from __future__ import annotations

from typing import Any


class AutAlgError(Exception):
    code = "error"
    exit_code = 2

    def __init__(self, message: str = "", witness: Any = None):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.witness = witness

    def envelope(self) -> dict:
        return error_envelope(self)


# Usage / precondition errors (exit 2)

class UsageError(AutAlgError):
    code = "usage"


class NonPrimeCharacteristic(AutAlgError):
    code = "non_prime_characteristic"


class ReducibleModulus(AutAlgError):
    code = "reducible_modulus"


class MissingModulus(AutAlgError):
    code = "missing_modulus"


class FieldMismatch(AutAlgError):
    code = "field_mismatch"


class DivisionByZero(AutAlgError):
    code = "division_by_zero"


class DimensionMismatch(AutAlgError):
    code = "dimension_mismatch"


class SingularMatrix(AutAlgError):
    code = "singular_matrix"


class ZeroVector(AutAlgError):
    code = "zero_vector"


class FieldTooSmall(AutAlgError):
    code = "field_too_small"


class BadEigenvalues(AutAlgError):
    code = "bad_eigenvalues"


class BadScalars(AutAlgError):
    code = "bad_scalars"


class BadLambda(AutAlgError):
    code = "bad_lambda"


class ZeroLambda(AutAlgError):
    code = "zero_lambda"


class TrivialGroup(AutAlgError):
    code = "trivial_group"


class DegeneratePairing(AutAlgError):
    code = "degenerate_pairing"


class PairingViolatesOrthogonality(AutAlgError):
    code = "pairing_violates_orthogonality"


class DegreeOutOfRange(AutAlgError):
    code = "degree_out_of_range"


class SubspaceWrongDegree(AutAlgError):
    code = "subspace_wrong_degree"


class InvalidPermutation(AutAlgError):
    code = "invalid_permutation"


class GroupTooLarge(AutAlgError):
    code = "group_too_large"


class TooLargeForExhaustive(AutAlgError):
    code = "too_large_for_exhaustive"


class BudgetExceeded(AutAlgError):
    code = "budget_exceeded"


class SchemaViolation(AutAlgError):
    code = "schema_violation"

    def __init__(self, message: str = "", location: str | None = None, witness: Any = None):
        super().__init__(message, witness if witness is not None else ({"location": location} if location else None))
        self.location = location


# Property violations (exit 1, witness attached)

class PropertyViolation(AutAlgError):
    code = "property_violation"
    exit_code = 1


class DecompositionFails(PropertyViolation):
    code = "decomposition_fails"


class NoUniqueLeftIdentity(PropertyViolation):
    code = "no_unique_left_identity"


class BlockMetadataMismatch(PropertyViolation):
    code = "block_metadata_mismatch"


class NotGenerated(PropertyViolation):
    code = "not_generated"


class Mismatch(PropertyViolation):
    code = "mismatch"


class HypothesesNotVerified(PropertyViolation):
    code = "hypotheses_not_verified"


def error_envelope(exc: BaseException) -> dict:
    """Render an exception as the JSON error envelope printed by the CLI."""
    if isinstance(exc, AutAlgError):
        return {"error": exc.code, "message": exc.message, "witness": exc.witness}
    return {"error": "internal", "message": str(exc), "witness": None}


def exit_code_for(exc: BaseException) -> int:
    return exc.exit_code if isinstance(exc, AutAlgError) else 2
