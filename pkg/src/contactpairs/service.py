"""HTTP surface: the same four operations as the CLI, as JSON endpoints.

POST /v1/validate | /v1/detect | /v1/certify | /v1/associate take an
instance source (builtin name or inline .cps text) plus optional overrides
and return the full report.  Input problems map to 400 with a located
detail; certification verdicts live in the report body, not the status.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, model_validator

from .catalog import UnknownBuiltinError, builtin_names
from .dsl import DslError
from .pipeline import (
    InputError,
    load_instance,
    run_associate,
    run_certify,
    run_detect,
    run_validate,
)

app = FastAPI(
    title="contactpairs",
    description="Exact certification of metric contact pair geometry on Lie algebras.",
    version="0.1.0",
)


class InstanceSource(BaseModel):
    builtin: str | None = None
    text: str | None = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "InstanceSource":
        if (self.builtin is None) == (self.text is None):
            raise ValueError("provide exactly one of 'builtin' or 'text'")
        return self


class VerifyRequest(BaseModel):
    source: InstanceSource
    kappa: str | None = None
    tol: float | None = None


class AssociateRequest(VerifyRequest):
    seed: str = "identity"
    rng_seed: int | None = None


class RunResponse(BaseModel):
    ok: bool
    exit_code: int
    report: dict


def _kappa(value: str | None) -> Fraction | None:
    if value is None:
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise HTTPException(status_code=400, detail=f"kappa {value!r} is not a rational")


def _execute(runner, req: VerifyRequest, **kwargs) -> RunResponse:
    kappa = _kappa(req.kappa)
    try:
        name, spec = load_instance(req.source.builtin, None, req.source.text)
        result = runner(name, spec, kappa=kappa, tol=req.tol, **kwargs)
    except DslError as e:
        raise HTTPException(
            status_code=400,
            detail={"message": str(e), "line": e.line, "column": e.col},
        )
    except (InputError, UnknownBuiltinError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    return RunResponse(ok=result.ok, exit_code=result.exit_code, report=result.report)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.get("/v1/builtins")
def list_builtins() -> dict:
    return {"builtins": builtin_names()}


@app.post("/v1/validate", response_model=RunResponse)
def validate(req: VerifyRequest) -> RunResponse:
    return _execute(run_validate, req)


@app.post("/v1/detect", response_model=RunResponse)
def detect(req: VerifyRequest) -> RunResponse:
    return _execute(run_detect, req)


@app.post("/v1/certify", response_model=RunResponse)
def certify(req: VerifyRequest) -> RunResponse:
    return _execute(run_certify, req)


@app.post("/v1/associate", response_model=RunResponse)
def associate(req: AssociateRequest) -> RunResponse:
    return _execute(run_associate, req, seed=req.seed, rng_seed=req.rng_seed)
