"""Squared-error objective, exact backprop gradients, full-batch descent,
and a finite-difference gradient checker.

The objective is half the summed squared residual over all samples and
output nodes.  One training iteration is one full-batch step: parameters
move against the gradient of that total (not averaged) error.  Biases are
trained with the same rule as weights; because activations are
f(w . x - b), the bias partials carry a minus sign.

The gradient checker is the independent oracle for the backprop code: it
compares every analytic partial against a central finite difference of the
objective and reports the worst relative error.  Nothing downstream (the
experiment harness in particular) should be trusted until the seeded check
suite passes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DivergenceError
from .network import NetworkParams, forward_batch, make_params
from .seeds import mix64


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for one gradient-descent run."""

    learning_rate: float
    max_iterations: int
    seed: int = 0
    init_half_width: float = 0.5

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.max_iterations < 1:
            raise ValueError(
                f"max_iterations must be >= 1, got {self.max_iterations}"
            )
        if self.init_half_width < 0:
            raise ValueError(
                f"init_half_width must be >= 0, got {self.init_half_width}"
            )


def _check_batch(params: NetworkParams, inputs, targets):
    inputs = np.asarray(inputs, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if inputs.ndim != 2 or inputs.shape[1] != params.n_inputs:
        raise DimensionError(
            f"expected inputs of shape (H, {params.n_inputs}), got {inputs.shape}"
        )
    if targets.shape != (inputs.shape[0], params.n_outputs):
        raise DimensionError(
            f"expected targets of shape ({inputs.shape[0]}, {params.n_outputs}), "
            f"got {targets.shape}"
        )
    return inputs, targets


def squared_error(params: NetworkParams, inputs, targets) -> float:
    """Half the summed squared difference between targets and outputs."""
    inputs, targets = _check_batch(params, inputs, targets)
    _, outputs = forward_batch(params, inputs)
    return 0.5 * float(np.sum((targets - outputs) ** 2))


def gradient(params: NetworkParams, inputs, targets) -> NetworkParams:
    """Exact partials of :func:`squared_error`, packed in a parameter-shaped
    container and summed over the whole batch."""
    inputs, targets = _check_batch(params, inputs, targets)
    hidden, outputs = forward_batch(params, inputs)

    # d E / d (output pre-activation); the sigmoid derivative is o (1 - o).
    delta_out = (outputs - targets) * outputs * (1.0 - outputs)
    feeding = hidden if params.n_hidden > 0 else inputs
    grad_output_weights = delta_out.T @ feeding
    grad_output_biases = -delta_out.sum(axis=0)

    if params.n_hidden > 0:
        delta_hidden = (delta_out @ params.output_weights) * hidden * (1.0 - hidden)
        grad_hidden_weights = delta_hidden.T @ inputs
        grad_hidden_biases = -delta_hidden.sum(axis=0)
    else:
        grad_hidden_weights = np.zeros_like(params.hidden_weights)
        grad_hidden_biases = np.zeros_like(params.hidden_biases)

    return make_params(
        grad_hidden_weights,
        grad_hidden_biases,
        grad_output_weights,
        grad_output_biases,
        n_inputs=params.n_inputs,
    )


def init_params(
    n_inputs: int,
    n_hidden: int,
    n_outputs: int,
    seed: int,
    init_half_width: float = 0.5,
) -> NetworkParams:
    """Draw every weight and bias uniformly from [-w, +w], seeded.

    Draw order is fixed (hidden weights, hidden biases, output weights,
    output biases) so identical arguments give bit-identical parameters.
    """
    if n_inputs < 1 or n_outputs < 1 or n_hidden < 0:
        raise DimensionError(
            f"invalid layer sizes ({n_inputs}, {n_hidden}, {n_outputs})"
        )
    rng = np.random.default_rng(seed)
    half = float(init_half_width)
    output_columns = n_hidden if n_hidden > 0 else n_inputs
    return make_params(
        rng.uniform(-half, half, size=(n_hidden, n_inputs)),
        rng.uniform(-half, half, size=n_hidden),
        rng.uniform(-half, half, size=(n_outputs, output_columns)),
        rng.uniform(-half, half, size=n_outputs),
        n_inputs=n_inputs,
    )


def train(
    params: NetworkParams,
    inputs,
    targets,
    config: TrainConfig,
) -> tuple[NetworkParams, np.ndarray]:
    """Full-batch gradient descent for config.max_iterations steps.

    Returns the trained parameters and the error history: the objective
    before the first step and after every step, max_iterations + 1 values.
    Raises :class:`DivergenceError` as soon as the objective turns
    non-finite.
    """
    inputs, targets = _check_batch(params, inputs, targets)
    history = np.empty(config.max_iterations + 1, dtype=np.float64)
    rate = config.learning_rate
    # Non-finite values are detected through the error check below, so the
    # intermediate overflow warnings on the way there are just noise.
    with np.errstate(over="ignore", invalid="ignore"):
        history[0] = squared_error(params, inputs, targets)
        if not np.isfinite(history[0]):
            raise DivergenceError(0)
        for iteration in range(1, config.max_iterations + 1):
            grads = gradient(params, inputs, targets)
            params = make_params(
                params.hidden_weights - rate * grads.hidden_weights,
                params.hidden_biases - rate * grads.hidden_biases,
                params.output_weights - rate * grads.output_weights,
                params.output_biases - rate * grads.output_biases,
                n_inputs=params.n_inputs,
            )
            value = squared_error(params, inputs, targets)
            if not np.isfinite(value):
                raise DivergenceError(iteration)
            history[iteration] = value
    return params, history


def history_text(history) -> str:
    """Two-column (iteration, error) text rendering of an error history."""
    lines = [
        f"{iteration}\t{format(float(value), '.17g')}"
        for iteration, value in enumerate(np.asarray(history, dtype=np.float64))
    ]
    return "\n".join(lines) + "\n"


# --- flat parameter vector helpers (gradient checker, fault injection) ----

def flatten_params(params: NetworkParams) -> np.ndarray:
    """Concatenate all parameters: hidden weights (row major), hidden
    biases, output weights (row major), output biases."""
    return np.concatenate(
        [
            params.hidden_weights.ravel(),
            params.hidden_biases,
            params.output_weights.ravel(),
            params.output_biases,
        ]
    )


def unflatten_params(template: NetworkParams, vector: np.ndarray) -> NetworkParams:
    """Rebuild a parameter container with *template*'s shapes from a flat
    vector in :func:`flatten_params` order."""
    sizes = [
        template.hidden_weights.size,
        template.hidden_biases.size,
        template.output_weights.size,
        template.output_biases.size,
    ]
    if vector.shape != (sum(sizes),):
        raise DimensionError(
            f"expected flat vector of length {sum(sizes)}, got {vector.shape}"
        )
    stops = np.cumsum(sizes)
    return make_params(
        vector[: stops[0]].reshape(template.hidden_weights.shape),
        vector[stops[0]:stops[1]],
        vector[stops[1]:stops[2]].reshape(template.output_weights.shape),
        vector[stops[2]:stops[3]],
        n_inputs=template.n_inputs,
    )


def coordinate_name(params: NetworkParams, flat_index: int) -> str:
    """Human-readable name of one flat coordinate, e.g. 'output_weights[1,0]'."""
    blocks = [
        ("hidden_weights", params.hidden_weights.shape),
        ("hidden_biases", params.hidden_biases.shape),
        ("output_weights", params.output_weights.shape),
        ("output_biases", params.output_biases.shape),
    ]
    offset = flat_index
    for name, shape in blocks:
        size = int(np.prod(shape)) if len(shape) else 0
        if offset < size:
            index = np.unravel_index(offset, shape)
            return f"{name}[{','.join(str(i) for i in index)}]"
        offset -= size
    raise IndexError(f"flat index {flat_index} out of range")


@dataclass(frozen=True)
class GradCheckReport:
    """Outcome of one analytic-vs-numeric gradient comparison."""

    passed: bool
    max_relative_error: float
    worst_coordinate: str
    step: float
    tolerance: float


def grad_check(
    params: NetworkParams,
    inputs,
    targets,
    step: float = 1e-5,
    tolerance: float = 1e-5,
    corrupt: bool = False,
) -> GradCheckReport:
    """Compare analytic partials against central finite differences.

    The relative error of each coordinate uses the denominator
    max(|analytic|, |numeric|, 1e-12) so zero-gradient coordinates cannot
    blow up the ratio.  With ``corrupt`` the largest analytic coordinate is
    doubled first (fault-injection path used to prove the check can fail).
    """
    if step <= 0:
        raise ValueError(f"step must be > 0, got {step}")
    inputs, targets = _check_batch(params, inputs, targets)
    analytic = flatten_params(gradient(params, inputs, targets))
    if corrupt and analytic.size:
        analytic = analytic.copy()
        analytic[int(np.argmax(np.abs(analytic)))] *= 2.0

    theta = flatten_params(params)
    numeric = np.empty_like(theta)
    for index in range(theta.size):
        bumped = theta.copy()
        bumped[index] = theta[index] + step
        upper = squared_error(unflatten_params(params, bumped), inputs, targets)
        bumped[index] = theta[index] - step
        lower = squared_error(unflatten_params(params, bumped), inputs, targets)
        numeric[index] = (upper - lower) / (2.0 * step)

    denominator = np.maximum(
        np.maximum(np.abs(analytic), np.abs(numeric)), 1e-12
    )
    relative = np.abs(analytic - numeric) / denominator
    worst = int(np.argmax(relative)) if relative.size else 0
    max_error = float(relative[worst]) if relative.size else 0.0
    return GradCheckReport(
        passed=max_error <= tolerance,
        max_relative_error=max_error,
        worst_coordinate=coordinate_name(params, worst) if relative.size else "",
        step=step,
        tolerance=tolerance,
    )


@dataclass(frozen=True)
class GradCheckSuiteReport:
    """Aggregate outcome of the seeded random-instance check suite."""

    passed: bool
    max_relative_error: float
    instances: int
    worst_instance_index: int
    worst_instance_seed: int
    worst_coordinate: str
    step: float
    tolerance: float


def gradcheck_suite(
    instances: int = 100,
    seed: int = 0,
    step: float = 1e-5,
    tolerance: float = 1e-5,
    corrupt: bool = False,
) -> GradCheckSuiteReport:
    """Run :func:`grad_check` on seeded random instances.

    Instance i derives its own seed via mix64(seed, i) and draws layer
    sizes n, p in 1..5, m in 0..5, and 1..10 samples with inputs in
    [-1, 1] and random 0/1 targets.
    """
    worst = GradCheckReport(True, -1.0, "", step, tolerance)
    worst_index = 0
    worst_seed = 0
    for index in range(instances):
        instance_seed = mix64(seed, index)
        rng = np.random.default_rng(instance_seed)
        n = int(rng.integers(1, 6))
        m = int(rng.integers(0, 6))
        p = int(rng.integers(1, 6))
        count = int(rng.integers(1, 11))
        params = init_params(n, m, p, mix64(instance_seed, 1))
        inputs = rng.uniform(-1.0, 1.0, size=(count, n))
        targets = rng.integers(0, 2, size=(count, p)).astype(np.float64)
        report = grad_check(params, inputs, targets, step, tolerance, corrupt)
        if report.max_relative_error > worst.max_relative_error:
            worst = report
            worst_index = index
            worst_seed = instance_seed
    return GradCheckSuiteReport(
        passed=worst.passed,
        max_relative_error=max(worst.max_relative_error, 0.0),
        instances=instances,
        worst_instance_index=worst_index,
        worst_instance_seed=worst_seed,
        worst_coordinate=worst.worst_coordinate,
        step=step,
        tolerance=tolerance,
    )
