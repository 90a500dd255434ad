# app/utils/guard.py
from app.core.errors import AutAlgError


def require(cond: bool, error: type[AutAlgError], message: str, **witness):
    """Raise ``error`` with the given witness unless ``cond`` holds"""
    if not cond:
        raise error(message, witness=witness or None)


def field_at_least(field, bound: int, error: type[AutAlgError], reason: str):
    """Require |F| >= bound for finite fields; the rationals always pass"""
    if field.is_finite and field.order < bound:
        raise error(f"{reason}: need |F| >= {bound}, got |F| = {field.order}",
                    witness={"bound": bound, "field_order": field.order, "constraint": reason})
