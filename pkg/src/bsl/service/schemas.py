"""Pydantic request/response models for the laboratory service.

The wire formats mirror the JSON descriptors of the core package:
inner functions are discriminated unions on ``kind``, complex numbers are
{"re": .., "im": ..} pairs, angles are radians as doubles.
"""

from __future__ import annotations

from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from ..hardy import DEFAULT_TRUNC


class ComplexPair(BaseModel):
    model_config = ConfigDict(extra="forbid")
    re: float
    im: float = 0.0

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


class BlaschkeModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["blaschke"]
    zeros: list[ComplexPair] = Field(default_factory=list)
    const_angle: float = 0.0


class AtomicModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["atomic"]
    atom_angle: float
    mass: float = Field(default=1.0, gt=0)


class ProductModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["product"]
    factors: "list[InnerModel]"


InnerModel = Annotated[
    Union[BlaschkeModel, AtomicModel, ProductModel], Field(discriminator="kind")
]
ProductModel.model_rebuild()


class ShiftParamsModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    sigma: float = Field(gt=0)
    theta: float


class SubspaceModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["type1", "type2"]
    phi: InnerModel
    theta: Optional[float] = None
    sigma: Optional[float] = Field(default=None, gt=0)


class VectorModel(BaseModel):
    """Element of the truncated space: Taylor coefficients plus scalar slot."""

    model_config = ConfigDict(extra="forbid")
    coeffs: list[ComplexPair] = Field(default_factory=list)
    scalar: ComplexPair = Field(default_factory=lambda: ComplexPair(re=0.0))


class NormRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    params: ShiftParamsModel
    trunc: int = Field(default=128, ge=2, le=4096)


class NormResponse(BaseModel):
    formula: float
    truncated_singular_value: float
    gap: float
    iterations: int
    residual: float


class ClassifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    pair_id: Optional[str] = None
    spec1: SubspaceModel
    spec2: SubspaceModel
    params1: Optional[ShiftParamsModel] = None
    params2: Optional[ShiftParamsModel] = None
    tol_theta: float = Field(default=1e-9, gt=0)
    tol_ratio: float = Field(default=1e-6, gt=0)
    trunc: int = Field(default=DEFAULT_TRUNC, ge=16, le=4096)


class ClassifyResponse(BaseModel):
    pair_id: Optional[str] = None
    equivalent: bool
    reason: str
    ratio_residual: float
    theta_gap: float


class DecayRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    params: ShiftParamsModel
    direction: Literal["forward", "adjoint"] = "forward"
    n_max: int = Field(default=60, ge=1)
    u: Optional[VectorModel] = None  # default is the slot vector (0, 1)
    trunc: int = Field(default=DEFAULT_TRUNC, ge=4, le=4096)


class DecayRow(BaseModel):
    n: int
    measured: float
    bound: float


class DecayResponse(BaseModel):
    rows: list[DecayRow]
    satisfied: bool


class VerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config: dict = Field(default_factory=dict)
    seed: Optional[Union[int, str]] = None
    trunc: Optional[int] = Field(default=None, ge=16, le=4096)


class CheckModel(BaseModel):
    name: str
    expected: float
    computed: float
    tolerance: float
    comparison: str
    passed: bool = Field(alias="pass")
    model_config = ConfigDict(populate_by_name=True)


class VerifyResponse(BaseModel):
    report_version: int
    seed: str
    trunc: int
    all_pass: bool
    checks: list[CheckModel]


class HealthResponse(BaseModel):
    status: str
    version: str
