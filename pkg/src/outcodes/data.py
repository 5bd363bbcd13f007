"""Datasets: CSV ingestion, min-max scaling, stratified k-fold plans, and
synthetic generators.

CSV layout: comma-separated rows, decimal float features in all columns
except the last, an integer class label in the last column, and an
optional header row (detected when any feature cell of the first row is
not numeric).  File-native label values are remapped to 1..r by ascending
sorted order; the original values are kept on the dataset so reports stay
interpretable.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import linprog

from .errors import DataFormatError, FoldError


@dataclass(frozen=True)
class Dataset:
    """Immutable labeled dataset.

    ``labels`` hold 1-based class indices; ``source_labels[i - 1]`` is the
    file-native value class i was remapped from (or just i for generated
    data).
    """

    features: np.ndarray
    labels: np.ndarray
    class_count: int
    source_labels: tuple[int, ...]

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if features.ndim != 2:
            raise ValueError(f"features must be 2-D, got shape {features.shape}")
        if labels.shape != (features.shape[0],):
            raise ValueError(
                f"labels shape {labels.shape} != ({features.shape[0]},)"
            )
        if not np.all(np.isfinite(features)):
            raise ValueError("features must be finite")
        if self.class_count < 2:
            raise ValueError(f"need at least 2 classes, got {self.class_count}")
        if labels.size and (labels.min() < 1 or labels.max() > self.class_count):
            raise ValueError(f"labels must lie in 1..{self.class_count}")
        counts = np.bincount(labels, minlength=self.class_count + 1)[1:]
        if np.any(counts == 0):
            missing = int(np.flatnonzero(counts == 0)[0]) + 1
            raise ValueError(f"class {missing} has no samples")
        if len(self.source_labels) != self.class_count:
            raise ValueError("source_labels must name every class")
        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "source_labels", tuple(self.source_labels))

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def class_counts(self) -> np.ndarray:
        """Samples per class, index 0 holding class 1."""
        return np.bincount(self.labels, minlength=self.class_count + 1)[1:]

    def subset(self, indices) -> tuple[np.ndarray, np.ndarray]:
        """(features, labels) restricted to the given row indices."""
        indices = np.asarray(indices, dtype=np.int64)
        return self.features[indices], self.labels[indices]


def _looks_like_header(row: list[str]) -> bool:
    for cell in row[:-1]:
        try:
            float(cell)
        except ValueError:
            return True
    return False


def _parse_rows(rows: list[tuple[int, list[str]]]) -> Dataset:
    if not rows:
        raise DataFormatError("no data rows")
    width = len(rows[0][1])
    if width < 2:
        raise DataFormatError(
            f"need at least 2 columns, got {width}", line=rows[0][0]
        )
    features = np.empty((len(rows), width - 1), dtype=np.float64)
    raw_labels = np.empty(len(rows), dtype=np.int64)
    for position, (line, row) in enumerate(rows):
        if len(row) != width:
            raise DataFormatError(
                f"expected {width} columns, got {len(row)}", line=line
            )
        for column, cell in enumerate(row[:-1]):
            try:
                value = float(cell)
            except ValueError:
                raise DataFormatError(
                    f"non-numeric feature {cell!r} in column {column + 1}",
                    line=line,
                ) from None
            if not math.isfinite(value):
                raise DataFormatError(
                    f"non-finite feature {cell!r} in column {column + 1}",
                    line=line,
                )
            features[position, column] = value
        try:
            raw_labels[position] = int(row[-1].strip())
        except ValueError:
            raise DataFormatError(
                f"unparseable label {row[-1]!r}", line=line
            ) from None

    distinct = sorted(set(int(v) for v in raw_labels))
    if len(distinct) < 2:
        raise DataFormatError(f"need at least 2 classes, found {len(distinct)}")
    remap = {value: index + 1 for index, value in enumerate(distinct)}
    labels = np.array([remap[int(v)] for v in raw_labels], dtype=np.int64)
    return Dataset(features, labels, len(distinct), tuple(distinct))


def _read_csv(handle) -> Dataset:
    rows: list[tuple[int, list[str]]] = []
    for line, row in enumerate(csv.reader(handle), start=1):
        if not row or all(cell.strip() == "" for cell in row):
            continue
        rows.append((line, [cell.strip() for cell in row]))
    if rows and _looks_like_header(rows[0][1]):
        rows = rows[1:]
    return _parse_rows(rows)


def load_csv(path) -> Dataset:
    """Load a labeled dataset from a CSV file (label in the last column)."""
    with open(Path(path), newline="") as handle:
        return _read_csv(handle)


def load_csv_text(text: str) -> Dataset:
    """Load a labeled dataset from CSV text (label in the last column)."""
    return _read_csv(io.StringIO(text))


def dataset_to_csv_text(dataset: Dataset) -> str:
    """Render a dataset in the CSV layout :func:`load_csv` reads.

    Labels are written with their source values so a load round-trips.
    """
    lines = []
    for row, label in zip(dataset.features, dataset.labels):
        cells = [repr(float(v)) for v in row]
        cells.append(str(dataset.source_labels[int(label) - 1]))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


SCALING_TAG = "feature-minmax"


@dataclass(frozen=True)
class FeatureScaling:
    """Per-feature affine map onto [0, 1] fitted on training data.

    Applying the table to values outside the fitted range extrapolates
    (no clamping); constant features map to 0.5.
    """

    minimums: np.ndarray
    maximums: np.ndarray

    def __post_init__(self):
        minimums = np.asarray(self.minimums, dtype=np.float64).reshape(-1)
        maximums = np.asarray(self.maximums, dtype=np.float64).reshape(-1)
        if minimums.shape != maximums.shape:
            raise ValueError("minimums and maximums must have equal length")
        minimums.setflags(write=False)
        maximums.setflags(write=False)
        object.__setattr__(self, "minimums", minimums)
        object.__setattr__(self, "maximums", maximums)

    @classmethod
    def fit(cls, features) -> "FeatureScaling":
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2 or features.shape[0] == 0:
            raise ValueError("need a non-empty 2-D feature array")
        return cls(features.min(axis=0), features.max(axis=0))

    def apply(self, features) -> np.ndarray:
        features = np.asarray(features, dtype=np.float64)
        if features.shape[-1] != self.minimums.shape[0]:
            raise ValueError(
                f"expected {self.minimums.shape[0]} features, "
                f"got {features.shape[-1]}"
            )
        span = self.maximums - self.minimums
        constant = span == 0.0
        safe_span = np.where(constant, 1.0, span)
        scaled = (features - self.minimums) / safe_span
        scaled[..., constant] = 0.5
        return scaled

    def to_text(self) -> str:
        lines = [f"{SCALING_TAG} 1"]
        for low, high in zip(self.minimums, self.maximums):
            lines.append(f"{format(low, '.17g')}\t{format(high, '.17g')}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FeatureScaling":
        lines = text.splitlines()
        if not lines or lines[0].split() != [SCALING_TAG, "1"]:
            raise DataFormatError(f"not a {SCALING_TAG} v1 file", line=1)
        lows, highs = [], []
        for number, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise DataFormatError("expected two columns", line=number)
            try:
                lows.append(float(parts[0]))
                highs.append(float(parts[1]))
            except ValueError:
                raise DataFormatError("non-numeric bound", line=number) from None
        return cls(np.array(lows), np.array(highs))


def normalize_minmax(dataset: Dataset) -> tuple[Dataset, FeatureScaling]:
    """Scale every feature onto [0, 1] by its own min and max.

    Returns the scaled dataset and the fitted table, which can be applied
    to held-out rows so test folds see the training-fold scaling.
    """
    scaling = FeatureScaling.fit(dataset.features)
    scaled = Dataset(
        scaling.apply(dataset.features),
        dataset.labels,
        dataset.class_count,
        dataset.source_labels,
    )
    return scaled, scaling


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of every sample to one of k folds (values 1..k)."""

    fold_count: int
    assignments: np.ndarray

    def __post_init__(self):
        assignments = np.asarray(self.assignments, dtype=np.int64)
        if self.fold_count < 2:
            raise FoldError(f"need at least 2 folds, got {self.fold_count}")
        if assignments.size and (
            assignments.min() < 1 or assignments.max() > self.fold_count
        ):
            raise FoldError(f"assignments must lie in 1..{self.fold_count}")
        assignments.setflags(write=False)
        object.__setattr__(self, "assignments", assignments)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)


def stratified_kfold(dataset: Dataset, fold_count: int, seed: int) -> FoldPlan:
    """Deal each class's shuffled samples round-robin across k folds.

    Per class the fold sizes differ by at most one; the dealing start
    rotates between classes so total fold sizes stay near-equal as well.
    """
    if fold_count < 2:
        raise FoldError(f"need at least 2 folds, got {fold_count}")
    if fold_count > len(dataset):
        raise FoldError(
            f"cannot split {len(dataset)} samples into {fold_count} folds"
        )
    rng = np.random.default_rng(seed)
    assignments = np.zeros(len(dataset), dtype=np.int64)
    start = 0
    for class_index in range(1, dataset.class_count + 1):
        members = np.flatnonzero(dataset.labels == class_index)
        members = rng.permutation(members)
        for offset, sample in enumerate(members):
            assignments[sample] = (start + offset) % fold_count + 1
        start = (start + members.size) % fold_count
    return FoldPlan(fold_count, assignments)


# Quadrant index per class, picked so the binary code bits of class i are
# exactly ([y < 0], [x < 0]); each bit is then a coordinate half-plane and
# a two-node no-hidden-layer network can solve the problem.
_QUADRANT_SIGNS = {1: (1.0, 1.0), 2: (-1.0, 1.0), 3: (1.0, -1.0), 4: (-1.0, -1.0)}


def make_quadrant_dataset(
    points_per_class: int, margin: float, seed: int
) -> Dataset:
    """Four classes occupying the four quadrants of [-1, 1]^2.

    Every point keeps distance >= margin from both axes.  The pair of axes
    separates the classes jointly, but no single line separates any one
    class from the other three, which is what defeats a one-to-one output
    layer without hidden nodes.
    """
    if points_per_class < 1:
        raise ValueError(f"points_per_class must be >= 1, got {points_per_class}")
    if not 0 < margin < 1:
        raise ValueError(f"margin must lie in (0, 1), got {margin}")
    rng = np.random.default_rng(seed)
    blocks = []
    labels = []
    for class_index in range(1, 5):
        signs = np.array(_QUADRANT_SIGNS[class_index])
        magnitudes = rng.uniform(margin, 1.0, size=(points_per_class, 2))
        blocks.append(magnitudes * signs)
        labels.extend([class_index] * points_per_class)
    return Dataset(np.vstack(blocks), np.array(labels), 4, (1, 2, 3, 4))


def _gray_sequence(class_count: int) -> list[int]:
    width = (class_count - 1).bit_length()
    codes = (index ^ (index >> 1) for index in range(1 << width))
    return [code for code in codes if code < class_count]


def blob_centers(class_count: int) -> np.ndarray:
    """Cluster centers on the unit circle, row i - 1 holding class i.

    Classes are placed around the circle in Gray-code order (neighboring
    clusters differ in one bit of the binary code of class - 1), so every
    code bit splits the circle into contiguous arcs and each output node
    of either code faces a linearly separable two-group problem.
    """
    centers = np.empty((class_count, 2), dtype=np.float64)
    for position, code in enumerate(_gray_sequence(class_count)):
        angle = 2.0 * math.pi * position / class_count
        centers[code] = (math.cos(angle), math.sin(angle))
    return centers


def make_blobs_dataset(
    class_count: int, points_per_class: int, spread: float, seed: int
) -> Dataset:
    """Gaussian clusters centered on the unit circle, one class per cluster.

    See :func:`blob_centers` for how classes are arranged.
    """
    if class_count < 2:
        raise ValueError(f"need at least 2 classes, got {class_count}")
    if points_per_class < 1:
        raise ValueError(f"points_per_class must be >= 1, got {points_per_class}")
    if not spread > 0:
        raise ValueError(f"spread must be > 0, got {spread}")
    rng = np.random.default_rng(seed)
    centers = blob_centers(class_count)
    blocks = []
    labels = []
    for class_index in range(1, class_count + 1):
        center = centers[class_index - 1]
        blocks.append(center + rng.normal(0.0, spread, size=(points_per_class, 2)))
        labels.extend([class_index] * points_per_class)
    return Dataset(
        np.vstack(blocks),
        np.array(labels),
        class_count,
        tuple(range(1, class_count + 1)),
    )


def linearly_separable(points_a, points_b) -> bool:
    """Whether a single hyperplane strictly separates two point sets.

    Solves the LP feasibility problem  w . a + b >= 1  for every a in A and
    w . x + b <= -1  for every x in B; by rescaling, strict separability is
    equivalent to feasibility.  Independent of the network code, so it can
    certify claims about what gradient descent can or cannot reach.
    """
    points_a = np.asarray(points_a, dtype=np.float64)
    points_b = np.asarray(points_b, dtype=np.float64)
    if points_a.ndim != 2 or points_b.ndim != 2 or not (
        points_a.size and points_b.size
    ):
        raise ValueError("need two non-empty 2-D point arrays")
    if points_a.shape[1] != points_b.shape[1]:
        raise ValueError("point sets must share the feature dimension")
    dimension = points_a.shape[1]
    # Variables: w (dimension entries) then the offset b.
    upper_rows = np.hstack([-points_a, -np.ones((points_a.shape[0], 1))])
    lower_rows = np.hstack([points_b, np.ones((points_b.shape[0], 1))])
    constraints = np.vstack([upper_rows, lower_rows])
    bounds = -np.ones(constraints.shape[0])
    result = linprog(
        c=np.zeros(dimension + 1),
        A_ub=constraints,
        b_ub=bounds,
        bounds=[(None, None)] * (dimension + 1),
        method="highs",
    )
    if result.status not in (0, 2):
        raise RuntimeError(f"separability LP failed: {result.message}")
    return result.status == 0
