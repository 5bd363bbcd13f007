import numpy as np
import pytest

from outcodes import (
    EncodingScheme,
    InvalidClassError,
    DimensionError,
    SchemeKind,
    Trit,
    output_width,
    quantize,
    target_matrix,
)

ALL_KINDS = list(SchemeKind)


# ---------------------------------------------------------------- widths

@pytest.mark.parametrize(
    "kind,classes,width",
    [
        (SchemeKind.BINARY, 4, 2),
        (SchemeKind.BINARY, 10, 4),
        (SchemeKind.BINARY, 2, 1),
        (SchemeKind.BINARY, 8, 3),
        (SchemeKind.BINARY, 26, 5),
        (SchemeKind.ONE_TO_ONE, 8, 8),
        (SchemeKind.ONE_TO_ONE, 2, 2),
        (SchemeKind.REDUCED_ONE_HOT, 4, 3),
        (SchemeKind.REDUCED_ONE_HOT, 2, 1),
    ],
)
def test_output_width(kind, classes, width):
    assert output_width(kind, classes) == width


def test_output_width_accepts_strings():
    assert output_width("binary", 11) == 4


@pytest.mark.parametrize("bad", [1, 0, -3])
def test_output_width_rejects_small_class_counts(bad):
    with pytest.raises(InvalidClassError):
        output_width(SchemeKind.BINARY, bad)


def test_binary_width_is_minimal():
    for classes in range(2, 65):
        width = output_width(SchemeKind.BINARY, classes)
        assert classes <= 2**width
        assert classes > 2 ** (width - 1)


# ---------------------------------------------------------------- encode

def test_four_class_code_table():
    one_to_one = EncodingScheme(SchemeKind.ONE_TO_ONE, 4)
    binary = EncodingScheme(SchemeKind.BINARY, 4)
    expected = {
        1: ((1, 0, 0, 0), (0, 0)),
        2: ((0, 1, 0, 0), (0, 1)),
        3: ((0, 0, 1, 0), (1, 0)),
        4: ((0, 0, 0, 1), (1, 1)),
    }
    for class_index, (hot, bits) in expected.items():
        assert one_to_one.encode(class_index).tolist() == list(map(float, hot))
        assert binary.encode(class_index).tolist() == list(map(float, bits))


def test_encode_examples():
    assert EncodingScheme(SchemeKind.BINARY, 4).encode(1).tolist() == [0.0, 0.0]
    reduced = EncodingScheme(SchemeKind.REDUCED_ONE_HOT, 4)
    assert reduced.encode(4).tolist() == [0.0, 0.0, 0.0]
    assert reduced.encode(2).tolist() == [0.0, 1.0, 0.0]


def test_encode_rejects_out_of_range_class():
    scheme = EncodingScheme(SchemeKind.BINARY, 4)
    for bad in (0, 5, -1):
        with pytest.raises(InvalidClassError):
            scheme.encode(bad)


def test_scheme_requires_two_classes():
    with pytest.raises(InvalidClassError):
        EncodingScheme(SchemeKind.ONE_TO_ONE, 1)


# ---------------------------------------------------------------- quantizer

@pytest.mark.parametrize(
    "value,expected",
    [
        (0.0, Trit.ZERO),
        (0.35, Trit.ZERO),
        (0.40, Trit.ZERO),
        (0.401, Trit.INDETERMINATE),
        (0.5, Trit.INDETERMINATE),
        (0.599, Trit.INDETERMINATE),
        (0.60, Trit.ONE),
        (0.72, Trit.ONE),
        (1.0, Trit.ONE),
    ],
)
def test_quantize_band_assignment(value, expected):
    assert quantize(value) is expected


def test_quantize_out_of_range_values_fall_into_outer_bands():
    assert quantize(-0.2) is Trit.ZERO
    assert quantize(1.3) is Trit.ONE


# ---------------------------------------------------------------- decode

def test_decode_one_to_one_clean_pattern():
    scheme = EncodingScheme(SchemeKind.ONE_TO_ONE, 4)
    assert scheme.decode([0.9, 0.1, 0.2, 0.3]) == 1


def test_decode_binary_examples():
    scheme = EncodingScheme(SchemeKind.BINARY, 4)
    assert scheme.decode([0.1, 0.9]) == 2
    assert scheme.decode([0.5, 0.9]) is None


def test_decode_binary_code_without_class_is_rejected():
    scheme = EncodingScheme(SchemeKind.BINARY, 10)
    assert scheme.width == 4
    assert scheme.decode([0.9, 0.9, 0.9, 0.9]) is None  # code 15, only 10 classes
    assert scheme.decode([0.9, 0.1, 0.1, 0.9]) == 10    # code 9 -> last class


def test_decode_one_to_one_invalid_patterns_rejected():
    scheme = EncodingScheme(SchemeKind.ONE_TO_ONE, 4)
    assert scheme.decode([0.9, 0.9, 0.1, 0.1]) is None  # two high nodes
    assert scheme.decode([0.1, 0.1, 0.1, 0.1]) is None  # all low


def test_decode_reduced_one_hot():
    scheme = EncodingScheme(SchemeKind.REDUCED_ONE_HOT, 4)
    assert scheme.decode([0.1, 0.1, 0.1]) == 4          # all zeros -> last class
    assert scheme.decode([0.1, 0.9, 0.1]) == 2
    assert scheme.decode([0.9, 0.9, 0.1]) is None


def test_decode_checks_width():
    scheme = EncodingScheme(SchemeKind.BINARY, 4)
    with pytest.raises(DimensionError):
        scheme.decode([0.1, 0.9, 0.1])


# ---------------------------------------------------------------- properties

def test_round_trip_all_schemes_all_class_counts():
    for kind in ALL_KINDS:
        for classes in range(2, 65):
            scheme = EncodingScheme(kind, classes)
            for class_index in range(1, classes + 1):
                target = scheme.encode(class_index)
                assert scheme.decode(target) == class_index


def test_encode_is_injective_and_width_consistent():
    for kind in ALL_KINDS:
        for classes in (2, 3, 4, 7, 16, 33):
            scheme = EncodingScheme(kind, classes)
            seen = set()
            for class_index in range(1, classes + 1):
                target = scheme.encode(class_index)
                assert target.shape == (output_width(kind, classes),)
                assert set(np.unique(target)) <= {0.0, 1.0}
                seen.add(tuple(target.tolist()))
            assert len(seen) == classes


def test_any_indeterminate_component_rejects():
    rng = np.random.default_rng(20)
    for kind in ALL_KINDS:
        scheme = EncodingScheme(kind, 5)
        for _ in range(25):
            outputs = rng.choice([0.05, 0.95], size=scheme.width)
            position = int(rng.integers(scheme.width))
            outputs[position] = rng.uniform(0.401, 0.599)
            assert scheme.decode(outputs) is None


def test_target_matrix_stacks_codes():
    scheme = EncodingScheme(SchemeKind.BINARY, 4)
    matrix = target_matrix(scheme, [1, 3, 4])
    assert matrix.tolist() == [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]
