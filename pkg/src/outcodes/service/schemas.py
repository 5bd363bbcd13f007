"""Request and response models for the HTTP service.

Datasets travel inline as CSV text and trained models as the flat text
model format, so the service stays stateless and clients own all files.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

SchemeName = Literal["one-to-one", "binary", "reduced-one-hot"]

DEFAULT_SCHEMES: tuple[SchemeName, ...] = ("one-to-one", "binary")


class HealthResponse(BaseModel):
    status: str
    version: str


class TrainRequest(BaseModel):
    csv_text: str
    scheme: SchemeName
    hidden_width: int | None = Field(default=None, ge=0)
    eta: float | None = Field(default=None, gt=0)
    max_iterations: int | None = Field(default=None, ge=1)
    seed: int = 0
    init_half_width: float = Field(default=0.5, ge=0)
    normalize: bool = True


class TrainResponse(BaseModel):
    scheme: SchemeName
    n_features: int
    class_count: int
    hidden_width: int
    output_width: int
    eta: float
    max_iterations: int
    seed: int
    final_error: float
    training_accuracy: float
    model_text: str
    history_text: str
    scaling_text: str | None


class EvalRequest(BaseModel):
    csv_text: str
    model_text: str
    scheme: SchemeName
    scaling_text: str | None = None


class EvalResponse(BaseModel):
    scheme: SchemeName
    sample_count: int
    correct: int
    wrong: int
    rejected: int
    accuracy: float


class ExperimentRequest(BaseModel):
    csv_text: str
    schemes: list[SchemeName] = Field(default_factory=lambda: list(DEFAULT_SCHEMES))
    folds: int = Field(default=5, ge=2)
    repeats: int = Field(default=20, ge=1)
    hidden_width: int | None = Field(default=None, ge=0)
    eta: float | None = Field(default=None, gt=0)
    max_iterations: int | None = Field(default=None, ge=1)
    seed: int = 0
    init_half_width: float = Field(default=0.5, ge=0)
    normalize: bool = True
    jobs: int = Field(default=1, ge=1)


class SchemeReportPayload(BaseModel):
    scheme: SchemeName
    avg_train: float
    best_train: float
    avg_test: float
    best_test: float
    report_text: str
    averaged_curve_text: str
    best_curve_text: str


class ExperimentResponse(BaseModel):
    folds: int
    repeats: int
    seed: int
    sample_count: int
    class_count: int
    n_features: int
    hidden_width: int
    eta: float
    max_iterations: int
    reports: list[SchemeReportPayload]
    comparison_text: str


class GradCheckRequest(BaseModel):
    instances: int = Field(default=100, ge=1)
    seed: int = 0
    step: float = Field(default=1e-5, gt=0)
    tolerance: float = Field(default=1e-5, gt=0)
    corrupt: bool = False


class GradCheckResponse(BaseModel):
    passed: bool
    max_relative_error: float
    instances: int
    worst_instance_index: int
    worst_instance_seed: int
    worst_coordinate: str


class SyntheticRequest(BaseModel):
    kind: Literal["blobs", "quadrant"]
    class_count: int = Field(default=4, ge=2)
    points_per_class: int = Field(default=50, ge=1)
    spread: float = Field(default=0.15, gt=0)
    margin: float = Field(default=0.1, gt=0)
    seed: int = 0


class SyntheticResponse(BaseModel):
    kind: str
    n_features: int
    class_count: int
    sample_count: int
    csv_text: str
