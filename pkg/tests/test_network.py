import math

import numpy as np
import pytest

from outcodes import (
    DataFormatError,
    DimensionError,
    NetworkParams,
    forward,
    forward_batch,
    make_params,
    params_from_text,
    params_to_text,
    sigmoid,
)

# Independent scalar evaluation of the chained example net
# (1-1-1, hidden weight 2, hidden bias 1, output weight 3, input 1):
#   y = 1 / (1 + exp(-1))        = 0.7310585786300049
#   o = 1 / (1 + exp(-3 * y))    = 0.899635013659718
HAND_HIDDEN = 0.7310585786300049
HAND_OUTPUT = 0.899635013659718


def hand_net() -> NetworkParams:
    return make_params([[2.0]], [1.0], [[3.0]], [0.0])


# ---------------------------------------------------------------- sigmoid

def test_sigmoid_midpoint():
    assert sigmoid(0.0) == 0.5


def test_sigmoid_direct_value():
    assert sigmoid(1.0) == pytest.approx(HAND_HIDDEN, abs=1e-15)
    # cross-check against a plain math.exp evaluation
    assert sigmoid(1.0) == pytest.approx(1.0 / (1.0 + math.exp(-1.0)), abs=0.0)


@pytest.mark.parametrize("t", [0.1, 1.0, 3.7, 17.0, 150.0])
def test_sigmoid_symmetry(t):
    assert sigmoid(t) + sigmoid(-t) == pytest.approx(1.0, abs=1e-15)


def test_sigmoid_extreme_arguments_are_stable():
    assert sigmoid(500.0) == pytest.approx(1.0)
    assert 0.0 <= sigmoid(-500.0) < 1e-200
    assert sigmoid(800.0) == 1.0
    assert sigmoid(-800.0) == 0.0  # underflow to zero, no error
    assert np.isfinite(sigmoid(np.array([-1e4, -500.0, 0.0, 500.0, 1e4]))).all()


def test_sigmoid_array_shape_preserved():
    values = sigmoid(np.array([[0.0, 1.0], [-1.0, 2.0]]))
    assert values.shape == (2, 2)
    assert values[0, 0] == 0.5


# ---------------------------------------------------------------- params

def test_params_dimension_checks():
    with pytest.raises(DimensionError):
        NetworkParams(np.zeros((2, 3)), np.zeros(1), np.zeros((2, 2)), np.zeros(2))
    with pytest.raises(DimensionError):
        NetworkParams(np.zeros((2, 3)), np.zeros(2), np.zeros((2, 5)), np.zeros(2))
    with pytest.raises(DimensionError):
        NetworkParams(np.zeros((2, 3)), np.zeros(2), np.zeros((2, 2)), np.zeros(3))


def test_params_are_read_only():
    params = make_params(np.ones((2, 3)), np.zeros(2), np.ones((1, 2)), np.zeros(1))
    with pytest.raises(ValueError):
        params.hidden_weights[0, 0] = 5.0


def test_params_widths_without_hidden_layer():
    params = make_params([], [], np.ones((3, 4)), np.zeros(3), n_inputs=4)
    assert params.n_inputs == 4
    assert params.n_hidden == 0
    assert params.n_outputs == 3


# ---------------------------------------------------------------- forward

def test_forward_all_zero_params_gives_half_everywhere():
    params = make_params(np.zeros((3, 2)), np.zeros(3), np.zeros((4, 3)), np.zeros(4))
    hidden, outputs = forward(params, [0.7, -1.3])
    assert np.all(hidden == 0.5)
    assert np.all(outputs == 0.5)


def test_forward_hand_example():
    hidden, outputs = forward(hand_net(), [1.0])
    assert hidden[0] == pytest.approx(HAND_HIDDEN, abs=1e-15)
    assert outputs[0] == pytest.approx(HAND_OUTPUT, abs=1e-15)


def test_forward_extreme_preactivation_underflows_quietly():
    params = make_params([], [], [[1.0]], [0.0], n_inputs=1)
    _, outputs = forward(params, [-500.0])
    assert outputs[0] < 1e-200


def test_forward_without_hidden_layer_reads_inputs_directly():
    params = make_params([], [], [[1.0, -1.0]], [0.0], n_inputs=2)
    hidden, outputs = forward(params, [2.0, 1.0])
    assert hidden.shape == (0,)
    assert outputs[0] == pytest.approx(sigmoid(1.0))


def test_forward_dimension_mismatch():
    with pytest.raises(DimensionError):
        forward(hand_net(), [1.0, 2.0])
    with pytest.raises(DimensionError):
        forward_batch(hand_net(), np.zeros((3, 2)))


def test_forward_is_deterministic():
    rng = np.random.default_rng(4)
    params = make_params(
        rng.normal(size=(3, 2)), rng.normal(size=3),
        rng.normal(size=(2, 3)), rng.normal(size=2),
    )
    x = rng.normal(size=2)
    first = forward(params, x)
    second = forward(params, x)
    assert np.array_equal(first[0], second[0])
    assert np.array_equal(first[1], second[1])


def test_forward_monotone_along_positive_path():
    params = make_params([[1.5]], [0.0], [[2.0]], [0.0])
    outputs = [forward(params, [x])[1][0] for x in (-1.0, 0.0, 0.5, 2.0)]
    assert all(a < b for a, b in zip(outputs, outputs[1:]))


def test_forward_batch_matches_single():
    # Row-at-a-time and batched matmuls may use different BLAS kernels, so
    # agreement is to rounding, not bit-for-bit.
    rng = np.random.default_rng(11)
    params = make_params(
        rng.normal(size=(4, 3)), rng.normal(size=4),
        rng.normal(size=(2, 4)), rng.normal(size=2),
    )
    inputs = rng.normal(size=(6, 3))
    _, batch_outputs = forward_batch(params, inputs)
    for row, x in zip(batch_outputs, inputs):
        assert np.allclose(row, forward(params, x)[1], rtol=1e-14, atol=1e-15)


def test_activations_stay_in_unit_interval():
    rng = np.random.default_rng(9)
    params = make_params(
        rng.uniform(-30, 30, size=(4, 3)), rng.uniform(-30, 30, size=4),
        rng.uniform(-30, 30, size=(3, 4)), rng.uniform(-30, 30, size=3),
    )
    hidden, outputs = forward_batch(params, rng.uniform(-5, 5, size=(20, 3)))
    for block in (hidden, outputs):
        assert np.all(block >= 0.0) and np.all(block <= 1.0)
        assert np.all(np.isfinite(block))


# ---------------------------------------------------------------- serialization

def _assert_params_equal(a: NetworkParams, b: NetworkParams):
    for field in ("hidden_weights", "hidden_biases", "output_weights", "output_biases"):
        assert np.array_equal(getattr(a, field), getattr(b, field))


def test_serialization_round_trip_is_exact():
    rng = np.random.default_rng(2)
    params = make_params(
        rng.normal(size=(3, 5)) * 1e3, rng.normal(size=3) * 1e-7,
        rng.normal(size=(2, 3)), rng.normal(size=2),
    )
    _assert_params_equal(params, params_from_text(params_to_text(params)))


def test_serialization_round_trip_without_hidden_layer():
    rng = np.random.default_rng(3)
    params = make_params([], [], rng.normal(size=(2, 4)), rng.normal(size=2),
                         n_inputs=4)
    restored = params_from_text(params_to_text(params))
    assert restored.n_hidden == 0
    assert restored.n_inputs == 4
    _assert_params_equal(params, restored)


def test_serialization_header_carries_widths():
    text = params_to_text(hand_net())
    lines = text.splitlines()
    assert lines[0] == "ffnet-params 1"
    assert lines[1] == "1 1 1"


@pytest.mark.parametrize(
    "text",
    [
        "",
        "something-else 1\n1 1 1\n",
        "ffnet-params 1\nnot numbers\n",
        "ffnet-params 1\n1 1 1\n0.5 0.5\n",          # wrong value count
        "ffnet-params 1\n1 1 1\n0.5\n0.5\n0.5\nx\n",  # non-numeric value
    ],
)
def test_deserialization_rejects_malformed_text(text):
    with pytest.raises(DataFormatError):
        params_from_text(text)
