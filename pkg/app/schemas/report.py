from typing import Any

from pydantic import BaseModel, Field


class CheckDoc(BaseModel):
    claim: str
    status: str
    witness: Any = None
    details: dict[str, Any] = Field(default_factory=dict)


class ReportDoc(BaseModel):
    command: str
    ok: bool
    exit_code: int
    construction: str | None = None
    field: str | None = None
    dim: int | None = None
    aut_order: int | None = None
    complete: bool | None = None
    simple: bool | None = None
    matched_form: str | None = None
    checks: list[CheckDoc] = Field(default_factory=list)
    data: dict[str, Any] = Field(default_factory=dict)


class CommandOutcome(BaseModel):
    """Exit code 0 ok, 1 property violation (witness in payload), 2 usage error, 3 inconclusive."""
    exit_code: int
    payload: dict[str, Any]
    text: str = ""
    as_json: bool = False
