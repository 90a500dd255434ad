import json
import logging
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from app.core.errors import AutAlgError, SchemaViolation
from app.core.exactfield import FieldSpec, extension_field, format_raw, parse_raw, prime_field, rationals
from app.core.linalg import Matrix
from app.models.algebra import Algebra, BlockInfo, BlockRole, SubspaceConstraint
from app.schemas.algebra import AlgebraDoc, BlockDoc, ConstraintDoc, FieldDoc, MetaDoc, ParamsDoc

logger = logging.getLogger(__name__)


def canonical_json(payload: Any) -> str:
    """Byte-stable JSON: sorted keys, compact separators, trailing newline."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def field_doc(field: FieldSpec) -> FieldDoc:
    return FieldDoc(characteristic=field.characteristic, degree=field.degree,
                    modulus=list(field.modulus) if field.modulus else None)


def field_from_doc(doc: FieldDoc) -> FieldSpec:
    if doc.characteristic == 0:
        return rationals()
    if doc.degree == 1:
        return prime_field(doc.characteristic)
    return extension_field(doc.characteristic, doc.degree, doc.modulus)


def _matrix_text(m: Matrix) -> list[list[str]]:
    return m.to_text()


def _matrix_from_text(field: FieldSpec, rows: list[list[str]], location: str) -> Matrix:
    if len({len(r) for r in rows}) > 1:
        raise SchemaViolation("ragged matrix", location=location)
    return Matrix(field, tuple(tuple(_scalar(field, x, location) for x in r) for r in rows))


def _scalar(field: FieldSpec, text: str, location: str):
    try:
        return parse_raw(field, text)
    except AutAlgError as exc:
        raise SchemaViolation(exc.message, location=location) from exc


def to_doc(a: Algebra, claims: dict | None = None) -> AlgebraDoc:
    f = a.field
    blocks = [
        BlockDoc(
            name=b.name,
            range=(b.lo, b.hi),
            role=b.role.value,
            eigenvalue=format_raw(f, b.eigenvalue) if b.eigenvalue is not None else None,
            linked_to=b.linked_to,
            pairing=_matrix_text(b.pairing) if b.pairing is not None else None,
            parent=b.parent,
        )
        for b in a.blocks
    ]
    constraints = [ConstraintDoc(block=c.block, degree=c.degree, flavor=c.flavor,
                                 basis=[[format_raw(f, x) for x in v] for v in c.basis])
                   for c in a.constraints]
    return AlgebraDoc(
        field=field_doc(f),
        dim=a.dim,
        basis=list(a.basis_names),
        structure=[(i, j, k, format_raw(f, c)) for i, j, k, c in a.structure],
        blocks=blocks,
        meta=MetaDoc(construction=a.construction, params=a.params, constraints=constraints, claims=claims or {}),
    )


def from_doc(doc: AlgebraDoc) -> Algebra:
    try:
        f = field_from_doc(doc.field)
    except AutAlgError as exc:
        raise SchemaViolation(exc.message, location="field") from exc
    structure = tuple((i, j, k, _scalar(f, c, f"structure[{pos}]")) for pos, (i, j, k, c) in enumerate(doc.structure))
    blocks = []
    for pos, b in enumerate(doc.blocks):
        loc = f"blocks[{pos}]"
        blocks.append(BlockInfo(
            name=b.name,
            lo=b.range_[0],
            hi=b.range_[1],
            role=BlockRole(b.role),
            eigenvalue=_scalar(f, b.eigenvalue, f"{loc}.eigenvalue") if b.eigenvalue is not None else None,
            linked_to=b.linked_to,
            pairing=_matrix_from_text(f, b.pairing, f"{loc}.pairing") if b.pairing is not None else None,
            parent=b.parent,
        ))
    names = {b.name for b in blocks}
    for pos, b in enumerate(blocks):
        for ref in (b.parent, b.linked_to):
            if ref is not None and ref not in names:
                raise SchemaViolation(f"block {b.name} refers to unknown block {ref}", location=f"blocks[{pos}]")
    constraints = []
    for pos, c in enumerate(doc.meta.constraints):
        loc = f"meta.constraints[{pos}]"
        if c.block not in names:
            raise SchemaViolation(f"constraint on unknown block {c.block}", location=loc)
        constraints.append(SubspaceConstraint(c.block, c.degree, c.flavor,
                                              tuple(tuple(_scalar(f, x, loc) for x in v) for v in c.basis)))
    return Algebra(
        field=f,
        dim=doc.dim,
        basis_names=tuple(doc.basis),
        structure=structure,
        blocks=tuple(blocks),
        constraints=tuple(constraints),
        construction=doc.meta.construction,
        params=dict(doc.meta.params),
    )


def _location(err: ValidationError) -> str:
    first = err.errors()[0]
    return ".".join(str(p) for p in first.get("loc", ())) or "$"


def serialize(a: Algebra, claims: dict | None = None) -> str:
    return canonical_json(to_doc(a, claims).model_dump(by_alias=True, exclude_none=True))


def load_doc(text: str) -> AlgebraDoc:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"invalid JSON: {exc.msg}", location=f"line {exc.lineno}") from exc
    try:
        return AlgebraDoc.model_validate(raw)
    except ValidationError as exc:
        raise SchemaViolation(exc.errors()[0]["msg"], location=_location(exc)) from exc


def deserialize(text: str) -> Algebra:
    return from_doc(load_doc(text))


def read_algebra(path: str | Path) -> tuple[Algebra, dict]:
    """Algebra plus the claims recorded next to it."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaViolation(f"cannot read {p}: {exc.strerror}", location=str(p)) from exc
    doc = load_doc(text)
    return from_doc(doc), dict(doc.meta.claims)


def write_algebra(path: str | Path, a: Algebra, claims: dict | None = None) -> str:
    text = serialize(a, claims)
    Path(path).write_text(text, encoding="utf-8")
    logger.info("Wrote algebra of dimension %d to %s", a.dim, path)
    return text


def read_params(path: str | Path) -> ParamsDoc:
    p = Path(path)
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise SchemaViolation(f"cannot read {p}: {exc.strerror}", location=str(p)) from exc
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"invalid JSON: {exc.msg}", location=f"line {exc.lineno}") from exc
    try:
        return ParamsDoc.model_validate(raw)
    except ValidationError as exc:
        raise SchemaViolation(exc.errors()[0]["msg"], location=_location(exc)) from exc


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
