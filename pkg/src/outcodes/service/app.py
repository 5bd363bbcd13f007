"""FastAPI application exposing training, evaluation, experiments,
gradient checking, and synthetic dataset generation.

Domain failures surface as HTTP 400 with a payload of the form
``{"detail": {"kind": ..., "message": ...}}`` where kind is one of
``usage``, ``data``, or ``divergence``; clients map kinds to exit codes.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..data import (
    FeatureScaling,
    dataset_to_csv_text,
    load_csv_text,
    make_blobs_dataset,
    make_quadrant_dataset,
    normalize_minmax,
)
from ..encoding import EncodingScheme, SchemeKind, target_matrix
from ..errors import DataFormatError, DivergenceError
from ..experiment import (
    accuracy,
    comparison_table,
    curve_text,
    decision_counts,
    default_hyperparams,
    report_csv,
    run_cross_validation,
)
from ..network import params_from_text, params_to_text
from ..training import TrainConfig, gradcheck_suite, history_text, init_params, train
from . import schemas


def _error_payload(kind: str, exc: Exception) -> JSONResponse:
    return JSONResponse(
        status_code=400,
        content={"detail": {"kind": kind, "message": str(exc)}},
    )


def _fill_hyperparams(class_count, hidden_width, eta, max_iterations):
    default_hidden, default_eta, default_iters = default_hyperparams(class_count)
    return (
        default_hidden if hidden_width is None else hidden_width,
        default_eta if eta is None else eta,
        default_iters if max_iterations is None else max_iterations,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="outcodes service", version=__version__)

    # DataFormatError is itself a ValueError, but starlette dispatches to
    # the most specific registered handler, so the split below holds.
    @app.exception_handler(DataFormatError)
    async def data_error(request: Request, exc: DataFormatError):
        return _error_payload("data", exc)

    @app.exception_handler(DivergenceError)
    async def divergence_error(request: Request, exc: DivergenceError):
        return _error_payload("divergence", exc)

    @app.exception_handler(ValueError)
    async def value_error(request: Request, exc: ValueError):
        return _error_payload("usage", exc)

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/train", response_model=schemas.TrainResponse)
    def train_endpoint(request: schemas.TrainRequest):
        dataset = load_csv_text(request.csv_text)
        hidden, eta, iterations = _fill_hyperparams(
            dataset.class_count,
            request.hidden_width,
            request.eta,
            request.max_iterations,
        )
        scheme = EncodingScheme(SchemeKind(request.scheme), dataset.class_count)
        scaling_text = None
        if request.normalize:
            dataset, scaling = normalize_minmax(dataset)
            scaling_text = scaling.to_text()
        config = TrainConfig(
            learning_rate=eta,
            max_iterations=iterations,
            seed=request.seed,
            init_half_width=request.init_half_width,
        )
        initial = init_params(
            dataset.n_features, hidden, scheme.width,
            config.seed, config.init_half_width,
        )
        targets = target_matrix(scheme, dataset.labels)
        params, history = train(initial, dataset.features, targets, config)
        return schemas.TrainResponse(
            scheme=request.scheme,
            n_features=dataset.n_features,
            class_count=dataset.class_count,
            hidden_width=hidden,
            output_width=scheme.width,
            eta=eta,
            max_iterations=iterations,
            seed=request.seed,
            final_error=float(history[-1]),
            training_accuracy=accuracy(
                params, dataset.features, dataset.labels, scheme
            ),
            model_text=params_to_text(params),
            history_text=history_text(history),
            scaling_text=scaling_text,
        )

    @app.post("/eval", response_model=schemas.EvalResponse)
    def eval_endpoint(request: schemas.EvalRequest):
        dataset = load_csv_text(request.csv_text)
        params = params_from_text(request.model_text)
        features = dataset.features
        if request.scaling_text is not None:
            features = FeatureScaling.from_text(request.scaling_text).apply(features)
        scheme = EncodingScheme(SchemeKind(request.scheme), dataset.class_count)
        correct, wrong, rejected = decision_counts(
            params, features, dataset.labels, scheme
        )
        total = len(dataset)
        return schemas.EvalResponse(
            scheme=request.scheme,
            sample_count=total,
            correct=correct,
            wrong=wrong,
            rejected=rejected,
            accuracy=correct / total if total else 0.0,
        )

    @app.post("/experiment", response_model=schemas.ExperimentResponse)
    def experiment_endpoint(request: schemas.ExperimentRequest):
        dataset = load_csv_text(request.csv_text)
        hidden, eta, iterations = _fill_hyperparams(
            dataset.class_count,
            request.hidden_width,
            request.eta,
            request.max_iterations,
        )
        config = TrainConfig(
            learning_rate=eta,
            max_iterations=iterations,
            seed=request.seed,
            init_half_width=request.init_half_width,
        )
        seen = []
        for name in request.schemes:
            if name not in seen:
                seen.append(name)
        reports = [
            run_cross_validation(
                dataset,
                SchemeKind(name),
                hidden,
                config,
                fold_count=request.folds,
                repeats=request.repeats,
                normalize=request.normalize,
                jobs=request.jobs,
            )
            for name in seen
        ]
        payloads = [
            schemas.SchemeReportPayload(
                scheme=report.scheme.value,
                avg_train=report.avg_train,
                best_train=report.best_train,
                avg_test=report.avg_test,
                best_test=report.best_test,
                report_text=report_csv(report),
                averaged_curve_text=curve_text(report.averaged_error_curve),
                best_curve_text=curve_text(report.best_error_curve),
            )
            for report in reports
        ]
        return schemas.ExperimentResponse(
            folds=request.folds,
            repeats=request.repeats,
            seed=request.seed,
            sample_count=len(dataset),
            class_count=dataset.class_count,
            n_features=dataset.n_features,
            hidden_width=hidden,
            eta=eta,
            max_iterations=iterations,
            reports=payloads,
            comparison_text=comparison_table(reports),
        )

    @app.post("/gradcheck", response_model=schemas.GradCheckResponse)
    def gradcheck_endpoint(request: schemas.GradCheckRequest):
        report = gradcheck_suite(
            instances=request.instances,
            seed=request.seed,
            step=request.step,
            tolerance=request.tolerance,
            corrupt=request.corrupt,
        )
        return schemas.GradCheckResponse(
            passed=report.passed,
            max_relative_error=report.max_relative_error,
            instances=report.instances,
            worst_instance_index=report.worst_instance_index,
            worst_instance_seed=report.worst_instance_seed,
            worst_coordinate=report.worst_coordinate,
        )

    @app.post("/datasets/synthetic", response_model=schemas.SyntheticResponse)
    def synthetic_endpoint(request: schemas.SyntheticRequest):
        if request.kind == "blobs":
            dataset = make_blobs_dataset(
                request.class_count,
                request.points_per_class,
                request.spread,
                request.seed,
            )
        else:
            dataset = make_quadrant_dataset(
                request.points_per_class, request.margin, request.seed
            )
        return schemas.SyntheticResponse(
            kind=request.kind,
            n_features=dataset.n_features,
            class_count=dataset.class_count,
            sample_count=len(dataset),
            csv_text=dataset_to_csv_text(dataset),
        )

    return app


app = create_app()
