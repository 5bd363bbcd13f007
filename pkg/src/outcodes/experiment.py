"""Repeated stratified cross-validation comparing output codes.

The protocol: for each repeat the dataset is split into k near-equal
stratified folds with a fresh seeded shuffle; each fold serves once as
the test set while the other folds train a freshly initialized network.
k = 5 folds repeated 20 times gives one hundred results per code.  Fold
and initialization seeds derive only from the master seed and the
(repeat, fold) pair, never from the output code, so competing codes see
identical splits and hidden-layer initializations.

Scoring uses the 40-20-40 rule via :meth:`EncodingScheme.decode`;
rejected samples count as errors.  Reports aggregate the four statistics
(average and highest accuracy on training and test sets) plus the
pointwise-averaged error curve and the curve of the run with the lowest
final error.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data import Dataset, FeatureScaling, stratified_kfold
from .encoding import EncodingScheme, SchemeKind, output_width, target_matrix
from .errors import DimensionError, ProtocolMismatchError
from .network import NetworkParams, forward_batch
from .seeds import mix64
from .training import TrainConfig, init_params, train

# (hidden width, learning rate, iterations) defaults keyed by class count.
_DEFAULT_HYPERPARAMS = {
    4: (2, 0.06, 100),
    8: (3, 0.1, 500),
    10: (4, 0.08, 100),
    11: (4, 0.1, 200),
    26: (5, 0.08, 500),
}


def default_hyperparams(class_count: int) -> tuple[int, float, int]:
    """Benchmark-keyed defaults: (hidden width, learning rate, iterations).

    Class counts without a benchmark entry fall back to a hidden width of
    max(2, binary output width), learning rate 0.1, 100 iterations.
    """
    try:
        return _DEFAULT_HYPERPARAMS[class_count]
    except KeyError:
        return max(2, output_width(SchemeKind.BINARY, class_count)), 0.1, 100


def accuracy(params: NetworkParams, features, labels, scheme: EncodingScheme) -> float:
    """Fraction of samples whose decoded network output equals the label.

    Wrong classes and rejections both count as incorrect.
    """
    if scheme.width != params.n_outputs:
        raise DimensionError(
            f"scheme width {scheme.width} != network output width "
            f"{params.n_outputs}"
        )
    labels = np.asarray(labels)
    _, outputs = forward_batch(params, features)
    correct = sum(
        1
        for row, label in zip(outputs, labels)
        if scheme.decode(row) == int(label)
    )
    return correct / len(labels) if len(labels) else 0.0


def decision_counts(
    params: NetworkParams, features, labels, scheme: EncodingScheme
) -> tuple[int, int, int]:
    """(correct, wrong class, rejected) counts over a sample set."""
    if scheme.width != params.n_outputs:
        raise DimensionError(
            f"scheme width {scheme.width} != network output width "
            f"{params.n_outputs}"
        )
    labels = np.asarray(labels)
    _, outputs = forward_batch(params, features)
    correct = wrong = rejected = 0
    for row, label in zip(outputs, labels):
        decided = scheme.decode(row)
        if decided is None:
            rejected += 1
        elif decided == int(label):
            correct += 1
        else:
            wrong += 1
    return correct, wrong, rejected


@dataclass(frozen=True)
class RunResult:
    """One (repeat, fold) training run."""

    repeat_index: int
    fold_index: int
    scheme: SchemeKind
    training_accuracy: float
    test_accuracy: float
    error_history: np.ndarray

    @property
    def final_error(self) -> float:
        return float(self.error_history[-1])


@dataclass(frozen=True)
class ExperimentReport:
    """All runs of one code under one protocol, plus the aggregates."""

    scheme: SchemeKind
    fold_count: int
    repeats: int
    sample_count: int
    master_seed: int
    runs: tuple[RunResult, ...]
    avg_train: float
    best_train: float
    avg_test: float
    best_test: float
    averaged_error_curve: np.ndarray
    best_error_curve: np.ndarray


def fold_plan_for_repeat(
    dataset: Dataset, fold_count: int, master_seed: int, repeat_index: int
):
    """The fold plan used by every run of the given repeat (code-agnostic)."""
    return stratified_kfold(dataset, fold_count, mix64(master_seed, repeat_index))


def _run_single(
    dataset: Dataset,
    scheme: EncodingScheme,
    hidden_width: int,
    config: TrainConfig,
    fold_count: int,
    repeat_index: int,
    fold_index: int,
    normalize: bool,
) -> RunResult:
    plan = fold_plan_for_repeat(dataset, fold_count, config.seed, repeat_index)
    train_x, train_labels = dataset.subset(plan.train_indices(fold_index))
    test_x, test_labels = dataset.subset(plan.test_indices(fold_index))
    if normalize:
        scaling = FeatureScaling.fit(train_x)
        train_x = scaling.apply(train_x)
        test_x = scaling.apply(test_x)
    targets = target_matrix(scheme, train_labels)
    initial = init_params(
        dataset.n_features,
        hidden_width,
        scheme.width,
        mix64(config.seed, repeat_index, fold_index),
        config.init_half_width,
    )
    params, history = train(initial, train_x, targets, config)
    return RunResult(
        repeat_index=repeat_index,
        fold_index=fold_index,
        scheme=scheme.kind,
        training_accuracy=accuracy(params, train_x, train_labels, scheme),
        test_accuracy=accuracy(params, test_x, test_labels, scheme),
        error_history=history,
    )


def run_cross_validation(
    dataset: Dataset,
    scheme_kind: SchemeKind | str,
    hidden_width: int,
    config: TrainConfig,
    fold_count: int = 5,
    repeats: int = 20,
    normalize: bool = True,
    jobs: int = 1,
) -> ExperimentReport:
    """Run the full repeated cross-validation protocol for one code.

    Feature scaling, when enabled, is fitted on each run's training folds
    only.  Runs are independent; with jobs > 1 they execute on a thread
    pool and are sorted back to (repeat, fold) order before aggregation,
    so the report does not depend on the degree of parallelism.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    scheme = EncodingScheme(SchemeKind(scheme_kind), dataset.class_count)
    pairs = [
        (repeat_index, fold_index)
        for repeat_index in range(1, repeats + 1)
        for fold_index in range(1, fold_count + 1)
    ]

    def run_one(pair):
        repeat_index, fold_index = pair
        return _run_single(
            dataset, scheme, hidden_width, config,
            fold_count, repeat_index, fold_index, normalize,
        )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            runs = list(pool.map(run_one, pairs))
    else:
        runs = [run_one(pair) for pair in pairs]
    runs.sort(key=lambda run: (run.repeat_index, run.fold_index))

    train_accuracies = np.array([run.training_accuracy for run in runs])
    test_accuracies = np.array([run.test_accuracy for run in runs])
    histories = np.stack([run.error_history for run in runs])
    best_run = int(np.argmin(histories[:, -1]))
    return ExperimentReport(
        scheme=scheme.kind,
        fold_count=fold_count,
        repeats=repeats,
        sample_count=len(dataset),
        master_seed=config.seed,
        runs=tuple(runs),
        avg_train=float(train_accuracies.mean()),
        best_train=float(train_accuracies.max()),
        avg_test=float(test_accuracies.mean()),
        best_test=float(test_accuracies.max()),
        averaged_error_curve=histories.mean(axis=0),
        best_error_curve=histories[best_run].copy(),
    )


def format_percent(fraction: float) -> str:
    """Render a fraction as a percentage with three decimals, e.g. 96.582%."""
    return f"{100.0 * fraction:.3f}%"


_METRIC_ROWS = (
    ("average training accuracy", "avg_train"),
    ("highest training accuracy", "best_train"),
    ("average test accuracy", "avg_test"),
    ("highest test accuracy", "best_test"),
)


def comparison_table(reports) -> str:
    """Four accuracy rows, one column per code, percentages to 3 decimals."""
    reports = list(reports)
    if not reports:
        raise ProtocolMismatchError("need at least one report to tabulate")
    first = reports[0]
    for report in reports[1:]:
        same = (
            report.fold_count == first.fold_count
            and report.repeats == first.repeats
            and report.sample_count == first.sample_count
            and report.master_seed == first.master_seed
        )
        if not same:
            raise ProtocolMismatchError(
                "reports come from different protocols "
                f"({report.scheme.value} vs {first.scheme.value})"
            )
    headers = [f"{report.scheme.value} approach" for report in reports]
    label_width = max(len(label) for label, _ in _METRIC_ROWS)
    column_widths = [max(len(header), 8) for header in headers]
    lines = [
        "  ".join(
            [" " * label_width]
            + [header.ljust(width) for header, width in zip(headers, column_widths)]
        ).rstrip()
    ]
    for label, attribute in _METRIC_ROWS:
        cells = [
            format_percent(getattr(report, attribute)).ljust(width)
            for report, width in zip(reports, column_widths)
        ]
        lines.append("  ".join([label.ljust(label_width)] + cells).rstrip())
    return "\n".join(lines) + "\n"


def compare(report_a: ExperimentReport, report_b: ExperimentReport) -> str:
    """Two-code comparison table (see :func:`comparison_table`)."""
    return comparison_table([report_a, report_b])


def report_csv(report: ExperimentReport) -> str:
    """One row per run plus a footer block with the four aggregates."""
    lines = ["repeat,fold,scheme,train_acc,test_acc,final_E"]
    for run in report.runs:
        lines.append(
            f"{run.repeat_index},{run.fold_index},{run.scheme.value},"
            f"{repr(run.training_accuracy)},{repr(run.test_accuracy)},"
            f"{format(run.final_error, '.17g')}"
        )
    lines.append(f"# folds,{report.fold_count}")
    lines.append(f"# repeats,{report.repeats}")
    lines.append(f"# samples,{report.sample_count}")
    lines.append(f"# seed,{report.master_seed}")
    for _, attribute in _METRIC_ROWS:
        lines.append(f"# {attribute},{repr(getattr(report, attribute))}")
    return "\n".join(lines) + "\n"


def curve_text(curve) -> str:
    """Two-column (iteration, error) rendering of an error curve."""
    values = np.asarray(curve, dtype=np.float64)
    lines = [
        f"{iteration}\t{format(float(value), '.17g')}"
        for iteration, value in enumerate(values)
    ]
    return "\n".join(lines) + "\n"
