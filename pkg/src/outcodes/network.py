"""Sigmoid feedforward network: parameters, forward pass, text serialization.

The network has an input layer of width n, an optional hidden layer of
width m, and an output layer of width p.  Biases are subtracted from the
weighted sums, i.e. a hidden activation is f(v . x - b) with f the
logistic sigmoid, and the gradients in :mod:`outcodes.training`
differentiate with respect to that convention.  Setting m = 0 removes the
hidden layer entirely so the output weights act directly on the inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataFormatError, DimensionError

FORMAT_TAG = "ffnet-params"
FORMAT_VERSION = 1


def sigmoid(t):
    """Logistic function 1 / (1 + exp(-t)) for scalars or arrays.

    Uses the two-branch form (exp of a non-positive argument only) so that
    arguments of any magnitude neither overflow nor produce NaN; extreme
    arguments round to exactly 0.0 or 1.0.
    """
    arr = np.asarray(t, dtype=np.float64)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)
    positive = arr >= 0.0
    out[positive] = 1.0 / (1.0 + np.exp(-arr[positive]))
    shifted = np.exp(arr[~positive])
    out[~positive] = shifted / (1.0 + shifted)
    return float(out[0]) if scalar else out.reshape(np.shape(t))


@dataclass(frozen=True)
class NetworkParams:
    """Immutable weight and bias container.

    Shapes: hidden_weights (m, n), hidden_biases (m,), output_weights
    (p, m), output_biases (p,).  With no hidden layer (m = 0) the hidden
    arrays are empty and output_weights is (p, n).
    """

    hidden_weights: np.ndarray
    hidden_biases: np.ndarray
    output_weights: np.ndarray
    output_biases: np.ndarray

    def __post_init__(self):
        for name in ("hidden_weights", "output_weights"):
            array = np.asarray(getattr(self, name), dtype=np.float64)
            if array.ndim != 2:
                raise DimensionError(f"{name} must be 2-D, got shape {array.shape}")
            object.__setattr__(self, name, array)
        for name in ("hidden_biases", "output_biases"):
            array = np.asarray(getattr(self, name), dtype=np.float64).reshape(-1)
            object.__setattr__(self, name, array)

        m, n = self.hidden_weights.shape
        p = self.output_weights.shape[0]
        if n < 1 and m > 0:
            raise DimensionError("hidden weights need at least one input column")
        if self.hidden_biases.shape != (m,):
            raise DimensionError(
                f"hidden biases shape {self.hidden_biases.shape} != ({m},)"
            )
        if self.output_biases.shape != (p,):
            raise DimensionError(
                f"output biases shape {self.output_biases.shape} != ({p},)"
            )
        expected_columns = m if m > 0 else n
        if self.output_weights.shape[1] != expected_columns:
            raise DimensionError(
                f"output weights shape {self.output_weights.shape} incompatible "
                f"with hidden width {m} / input width {n}"
            )
        for array in (
            self.hidden_weights,
            self.hidden_biases,
            self.output_weights,
            self.output_biases,
        ):
            array.setflags(write=False)

    @property
    def n_inputs(self) -> int:
        if self.n_hidden > 0:
            return self.hidden_weights.shape[1]
        return self.output_weights.shape[1]

    @property
    def n_hidden(self) -> int:
        return self.hidden_weights.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.output_weights.shape[0]


def make_params(hidden_weights, hidden_biases, output_weights, output_biases,
                n_inputs: int | None = None) -> NetworkParams:
    """Build NetworkParams, shaping empty hidden arrays for m = 0 nets."""
    hidden_weights = np.asarray(hidden_weights, dtype=np.float64)
    if hidden_weights.size == 0:
        width = n_inputs if n_inputs is not None else np.asarray(
            output_weights, dtype=np.float64
        ).shape[-1]
        hidden_weights = hidden_weights.reshape(0, width)
    return NetworkParams(
        hidden_weights,
        np.asarray(hidden_biases, dtype=np.float64).reshape(-1),
        output_weights,
        output_biases,
    )


def forward_batch(params: NetworkParams, inputs) -> tuple[np.ndarray, np.ndarray]:
    """Forward pass for a batch of rows.

    Returns (hidden, outputs) with shapes (H, m) and (H, p).  With no
    hidden layer the hidden array is (H, 0) and the output weights read
    the inputs directly.
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim != 2 or inputs.shape[1] != params.n_inputs:
        raise DimensionError(
            f"expected inputs of shape (H, {params.n_inputs}), got {inputs.shape}"
        )
    if params.n_hidden > 0:
        hidden = sigmoid(inputs @ params.hidden_weights.T - params.hidden_biases)
        outputs = sigmoid(hidden @ params.output_weights.T - params.output_biases)
    else:
        hidden = np.zeros((inputs.shape[0], 0), dtype=np.float64)
        outputs = sigmoid(inputs @ params.output_weights.T - params.output_biases)
    return hidden, outputs


def forward(params: NetworkParams, x) -> tuple[np.ndarray, np.ndarray]:
    """Forward pass for a single input vector; returns (hidden, outputs)."""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.shape != (params.n_inputs,):
        raise DimensionError(
            f"expected input of width {params.n_inputs}, got {x.shape}"
        )
    hidden, outputs = forward_batch(params, x[np.newaxis, :])
    return hidden[0], outputs[0]


def params_to_text(params: NetworkParams) -> str:
    """Serialize parameters to the flat text model format.

    Line 1 is the tag and format version, line 2 holds the widths
    ``n m p``, and the following four lines hold hidden weights (row
    major), hidden biases, output weights (row major), and output biases
    as decimal floats printed with 17 significant digits, which round-trip
    exactly.
    """
    lines = [
        f"{FORMAT_TAG} {FORMAT_VERSION}",
        f"{params.n_inputs} {params.n_hidden} {params.n_outputs}",
    ]
    for array in (
        params.hidden_weights,
        params.hidden_biases,
        params.output_weights,
        params.output_biases,
    ):
        lines.append(" ".join(format(v, ".17g") for v in array.ravel()))
    return "\n".join(lines) + "\n"


def params_from_text(text: str) -> NetworkParams:
    """Parse the flat text model format written by :func:`params_to_text`."""
    lines = text.splitlines()
    if not lines or lines[0].split() != [FORMAT_TAG, str(FORMAT_VERSION)]:
        raise DataFormatError(
            f"not a {FORMAT_TAG} v{FORMAT_VERSION} file", line=1
        )
    if len(lines) < 2:
        raise DataFormatError("missing width line", line=2)
    try:
        n, m, p = (int(token) for token in lines[1].split())
    except ValueError:
        raise DataFormatError(f"bad width line {lines[1]!r}", line=2) from None
    if n < 1 or m < 0 or p < 1:
        raise DataFormatError(f"invalid widths ({n}, {m}, {p})", line=2)
    tokens = " ".join(lines[2:]).split()
    counts = (m * n, m, p * (m if m > 0 else n), p)
    if len(tokens) != sum(counts):
        raise DataFormatError(
            f"expected {sum(counts)} parameter values, found {len(tokens)}"
        )
    try:
        values = np.array([float(token) for token in tokens], dtype=np.float64)
    except ValueError:
        raise DataFormatError("non-numeric parameter value") from None
    stops = np.cumsum(counts)
    return make_params(
        values[: stops[0]].reshape(m, n),
        values[stops[0]:stops[1]],
        values[stops[1]:stops[2]].reshape(p, m if m > 0 else n),
        values[stops[2]:stops[3]],
        n_inputs=n,
    )
