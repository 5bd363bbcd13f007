"""Feedforward sigmoid classifiers with interchangeable output codes.

The library trains small fully-connected networks by full-batch gradient
descent on the half summed-squared-error objective and compares three
output-layer codes (one-to-one, binary, reduced-one-hot) under repeated
stratified cross-validation with 40-20-40 output scoring.  An HTTP
service (:mod:`outcodes.service`) exposes the operations; the ``outcodes``
command line is a thin client of that service.
"""

from .data import (
    Dataset,
    FeatureScaling,
    FoldPlan,
    blob_centers,
    dataset_to_csv_text,
    linearly_separable,
    load_csv,
    load_csv_text,
    make_blobs_dataset,
    make_quadrant_dataset,
    normalize_minmax,
    stratified_kfold,
)
from .encoding import (
    SCHEME_NAMES,
    EncodingScheme,
    SchemeKind,
    Trit,
    output_width,
    quantize,
    target_matrix,
)
from .errors import (
    DataFormatError,
    DimensionError,
    DivergenceError,
    FoldError,
    InvalidClassError,
    ProtocolMismatchError,
)
from .experiment import (
    ExperimentReport,
    RunResult,
    accuracy,
    compare,
    comparison_table,
    default_hyperparams,
    run_cross_validation,
)
from .network import (
    NetworkParams,
    forward,
    forward_batch,
    make_params,
    params_from_text,
    params_to_text,
    sigmoid,
)
from .seeds import mix64
from .training import (
    GradCheckReport,
    GradCheckSuiteReport,
    TrainConfig,
    grad_check,
    gradcheck_suite,
    gradient,
    init_params,
    squared_error,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "DataFormatError",
    "DimensionError",
    "DivergenceError",
    "EncodingScheme",
    "ExperimentReport",
    "FeatureScaling",
    "FoldError",
    "FoldPlan",
    "GradCheckReport",
    "GradCheckSuiteReport",
    "InvalidClassError",
    "NetworkParams",
    "ProtocolMismatchError",
    "RunResult",
    "SCHEME_NAMES",
    "SchemeKind",
    "TrainConfig",
    "Trit",
    "accuracy",
    "blob_centers",
    "compare",
    "comparison_table",
    "dataset_to_csv_text",
    "default_hyperparams",
    "forward",
    "forward_batch",
    "grad_check",
    "gradcheck_suite",
    "gradient",
    "init_params",
    "linearly_separable",
    "load_csv",
    "load_csv_text",
    "make_blobs_dataset",
    "make_params",
    "make_quadrant_dataset",
    "mix64",
    "normalize_minmax",
    "output_width",
    "params_from_text",
    "params_to_text",
    "quantize",
    "run_cross_validation",
    "sigmoid",
    "squared_error",
    "stratified_kfold",
    "target_matrix",
    "train",
]
