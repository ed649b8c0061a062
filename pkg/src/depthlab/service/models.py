"""Pydantic request/response models for the HTTP API.

Measures travel over the wire as catalog references (kind + dimension);
custom density callables are a library-only feature.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

from .. import measures as meas


class MeasureRef(BaseModel):
    kind: str = Field(description=f"one of {', '.join(meas.CATALOG_KINDS)}")
    dimension: int = Field(ge=1, le=64)


class StreamRef(BaseModel):
    seed: int = Field(0, ge=0)
    stream: int = Field(0, ge=0)


class DensityRequest(BaseModel):
    measure: MeasureRef
    point: list[float]


class ValueResponse(BaseModel):
    value: float


class SampleRequest(BaseModel):
    measure: MeasureRef
    rng: StreamRef = StreamRef()
    count: int = Field(ge=1, le=100_000)


class SampleResponse(BaseModel):
    points: list[list[float]]


class StatsRequest(BaseModel):
    measure: MeasureRef


class StatsResponse(BaseModel):
    mean: list[float]
    covariance: list[list[float]]
    sup_density: float
    isotropic_constant: float


class LogMgfRequest(BaseModel):
    measure: MeasureRef
    u: list[float]
    mode: str = "auto"
    mc_budget: int = Field(100_000, ge=1000, le=1_000_000)
    rng: StreamRef = StreamRef()


class LogMgfResponse(BaseModel):
    value: float
    std_error: float
    reliable: bool


class CramerRequest(BaseModel):
    measure: MeasureRef
    v: list[float]
    tol: float = Field(1e-8, gt=0)
    rng: StreamRef = StreamRef()


class CramerResponse(BaseModel):
    value: float
    maximizer: list[float]
    converged: bool
    iterations: int
    diverged: bool


class BtRadialRequest(BaseModel):
    measure: MeasureRef
    xi: list[float]
    t: float = Field(gt=0)
    tol: float = Field(1e-8, gt=0)
    rng: StreamRef = StreamRef()


class BtRadialResponse(BaseModel):
    radius: float
    unbounded: bool


class SupportRequest(BaseModel):
    measure: MeasureRef
    y: list[float]
    t: float = Field(ge=1)
    one_sided: bool = False
    rng: StreamRef = StreamRef()


class SupportResponse(BaseModel):
    value: float
    std_error: float
    reliable: bool


class KtRadialRequest(BaseModel):
    measure: MeasureRef
    xi: list[float]
    t: float = Field(gt=0)


class TailRequest(BaseModel):
    measure: MeasureRef
    xi: list[float]
    threshold: float
    rng: StreamRef = StreamRef()


class TailResponse(BaseModel):
    value: float
    std_error: float


class DepthRequest(BaseModel):
    measure: MeasureRef
    point: list[float]
    net_size: int = Field(256, ge=1, le=10_000)
    refine_rounds: int = Field(3, ge=0, le=10)
    pool_size: int = Field(100_000, ge=1000, le=1_000_000)
    rng: StreamRef = StreamRef()


class DepthResponse(BaseModel):
    value: float
    kind: str
    best_direction: list[float]
    std_error: float
    tail_evaluations: int


class ExpectedDepthRequest(BaseModel):
    measure: MeasureRef
    n_samples: int = Field(ge=100, le=1_000_000)
    net_size: int = Field(256, ge=1, le=10_000)
    pool_size: int = Field(100_000, ge=1000, le=1_000_000)
    rng: StreamRef = StreamRef()


class EstimateResponse(BaseModel):
    value: float
    std_error: float
    ci_low: float
    ci_high: float
    n_samples: int


class ExperimentRequest(BaseModel):
    config: str = Field(description="experiment config text (key = value format)")
    seed_override: Optional[int] = None
    threads_override: Optional[int] = None


class AssertionModel(BaseModel):
    name: str
    status: str
    value: float
    detail: str = ""


class MetricTableModel(BaseModel):
    name: str
    columns: list[str]
    rows: list[list]
    plot: Optional[dict] = None


class RunRecordModel(BaseModel):
    experiment: str
    config_hash: str
    version: str
    seed: int
    started_at: str
    finished_at: str
    metrics: list[MetricTableModel]
    assertions: list[AssertionModel]
    partial: bool
    all_passed: bool


class VerifyRequest(BaseModel):
    suite: str


class VerifyResponse(BaseModel):
    suite: str
    passed: bool
    assertions: list[AssertionModel]
