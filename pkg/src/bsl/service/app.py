"""FastAPI application exposing the laboratory.

Endpoints
---------
GET  /health        liveness and version
POST /norm          operator norm: closed form against truncated singular value
POST /classify      unitary equivalence verdict for a pair of subspaces
POST /decay         normalized power decay report (forward or adjoint)
POST /verify-paper  the full verification battery

Malformed payloads surface as 422 (schema validation); mathematically
invalid ones (domain, precondition, precision failures) surface as 400
with the reason in ``detail``.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..asymptotics import c00_adjoint_decay, c00_forward_decay
from ..battery import DEFAULT_SEED, run_battery
from ..errors import (
    ContractViolation,
    DimensionMismatch,
    DomainError,
    NonvanishingRoot,
    PrecisionLoss,
    TruncationOverflow,
    UndefinedBoundaryValue,
)
from ..hardy import HardyVector
from ..shift import BrownianShiftParams, BrownianVector, operator_norm_diagnostic
from ..subspaces import SubspaceSpec, classify_equivalence
from . import schemas

_CORE_ERRORS = (
    ContractViolation,
    DimensionMismatch,
    DomainError,
    NonvanishingRoot,
    PrecisionLoss,
    TruncationOverflow,
    UndefinedBoundaryValue,
)

app = FastAPI(
    title="brownian-shift-lab",
    version=__version__,
    description="Numerical laboratory for Brownian shift operators on H^2 (+) C",
)


async def _core_error_handler(request: Request, exc: Exception):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


for _cls in _CORE_ERRORS:
    app.add_exception_handler(_cls, _core_error_handler)


def _params(model: schemas.ShiftParamsModel) -> BrownianShiftParams:
    return BrownianShiftParams(model.sigma, model.theta)


def _spec(model: schemas.SubspaceModel, trunc: int) -> SubspaceSpec:
    return SubspaceSpec.from_descriptor(
        model.model_dump(exclude_none=True), trunc=trunc
    )


def _vector(model: schemas.VectorModel | None, trunc: int) -> BrownianVector:
    if model is None:
        return BrownianVector.slot(trunc)
    coeffs = np.zeros(trunc, dtype=np.complex128)
    if len(model.coeffs) > trunc:
        raise TruncationOverflow("vector has more coefficients than the truncation")
    for k, c in enumerate(model.coeffs):
        coeffs[k] = c.to_complex()
    return BrownianVector(HardyVector(coeffs), model.scalar.to_complex())


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/norm", response_model=schemas.NormResponse)
def norm(req: schemas.NormRequest) -> schemas.NormResponse:
    diag = operator_norm_diagnostic(_params(req.params), req.trunc)
    return schemas.NormResponse(
        formula=diag["formula"],
        truncated_singular_value=diag["estimate"],
        gap=diag["gap"],
        iterations=diag["iterations"],
        residual=diag["residual"],
    )


@app.post("/classify", response_model=schemas.ClassifyResponse)
def classify(req: schemas.ClassifyRequest) -> schemas.ClassifyResponse:
    spec1 = _spec(req.spec1, req.trunc)
    spec2 = _spec(req.spec2, req.trunc)
    p1 = _params(req.params1) if req.params1 is not None else None
    p2 = _params(req.params2) if req.params2 is not None else None
    verdict = classify_equivalence(
        spec1, p1, spec2, p2, tol_theta=req.tol_theta, tol_ratio=req.tol_ratio
    )
    return schemas.ClassifyResponse(
        pair_id=req.pair_id,
        equivalent=verdict.equivalent,
        reason=verdict.reason,
        ratio_residual=verdict.ratio_residual,
        theta_gap=verdict.theta_gap,
    )


@app.post("/decay", response_model=schemas.DecayResponse)
def decay(req: schemas.DecayRequest) -> schemas.DecayResponse:
    p = _params(req.params)
    u = _vector(req.u, req.trunc)
    runner = c00_forward_decay if req.direction == "forward" else c00_adjoint_decay
    report = runner(p, u, req.n_max, req.trunc)
    rows = [
        schemas.DecayRow(n=int(n), measured=float(m), bound=float(b))
        for n, m, b in zip(report.n_values, report.measured, report.bound)
    ]
    return schemas.DecayResponse(rows=rows, satisfied=report.satisfied)


@app.post("/verify-paper", response_model=schemas.VerifyResponse)
def verify_paper(req: schemas.VerifyRequest) -> schemas.VerifyResponse:
    seed = req.seed
    if seed is None:
        seed = DEFAULT_SEED
    elif isinstance(seed, str):
        seed = int(seed, 16) if seed.lower().startswith("0x") else int(seed)
    report = run_battery(config=req.config, seed=seed, trunc=req.trunc)
    return schemas.VerifyResponse(
        report_version=report["report_version"],
        seed=report["seed"],
        trunc=report["trunc"],
        all_pass=report["all_pass"],
        checks=[schemas.CheckModel(**c) for c in report["checks"]],
    )
