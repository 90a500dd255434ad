from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

ROLES = ("unit-line", "generator", "generated", "pairing-linked", "plain")


class FieldDoc(BaseModel):
    """characteristic 0 means the rationals."""
    model_config = ConfigDict(extra="forbid")

    characteristic: int = Field(ge=0)
    degree: int = Field(default=1, ge=1)
    modulus: list[int] | None = None


class BlockDoc(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    name: str = Field(min_length=1)
    range_: tuple[int, int] = Field(alias="range")
    role: Literal["unit-line", "generator", "generated", "pairing-linked", "plain"] = "plain"
    eigenvalue: str | None = None
    linked_to: str | None = None
    pairing: list[list[str]] | None = None
    parent: str | None = None

    @model_validator(mode="after")
    def check_range_and_link(self):
        lo, hi = self.range_
        if not 0 <= lo < hi:
            raise ValueError(f"block range must satisfy 0 <= lo < hi, got [{lo}, {hi})")
        if self.role == "pairing-linked" and (self.linked_to is None or self.pairing is None):
            raise ValueError("pairing-linked blocks need linked_to and pairing")
        return self


class ConstraintDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    block: str
    degree: int = Field(ge=1)
    flavor: Literal["tensor", "symmetric"]
    basis: list[list[str]]


class MetaDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    construction: str = "custom"
    params: dict[str, Any] = Field(default_factory=dict)
    constraints: list[ConstraintDoc] = Field(default_factory=list)
    claims: dict[str, Any] = Field(default_factory=dict)


class AlgebraDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    field: FieldDoc
    dim: int = Field(ge=1)
    basis: list[str]
    structure: list[tuple[int, int, int, str]] = Field(default_factory=list)
    blocks: list[BlockDoc] = Field(default_factory=list)
    meta: MetaDoc = Field(default_factory=MetaDoc)


class ParamsDoc(BaseModel):
    """Parameter file overriding canonical choices; every value is re-validated by the builders."""
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    gamma: list[str] | None = None
    delta: list[str] | None = None
    mu: list[str] | None = None
    lam: list[str] | None = Field(default=None, alias="lambda")
    alpha: str | None = None
    zeta: str | None = None
    Delta: list[list[str]] | None = None
    Phi: list[list[str]] | None = None
    variant: Literal["standard", "zeta_zero"] = "standard"
    beta: list[str] | None = None
    S: list[list[str]] | None = None
