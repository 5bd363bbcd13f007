"""Output-layer codes for r-class problems and the 40-20-40 output quantizer.

Three codes are supported, named on the command line and in config files
exactly as:

* ``one-to-one``: r output nodes, node i high for class i, all others low.
* ``binary``: q = ceil(log2 r) output nodes holding the bits of i - 1,
  most significant bit first (so four classes map to 00, 01, 10, 11).
* ``reduced-one-hot``: one-to-one with the last node dropped; class r is
  the all-zeros pattern.

Network outputs are read back through Fahlman's 40-20-40 rule: activations
in [0, 0.40] count as bit 0, activations in [0.60, 1] count as bit 1, and
the middle band is indeterminate.  A sample with an indeterminate node, or
whose quantized bits match no valid code word, is rejected; the experiment
harness scores rejections as errors.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidClassError


class SchemeKind(str, enum.Enum):
    """The three output-code families."""

    ONE_TO_ONE = "one-to-one"
    BINARY = "binary"
    REDUCED_ONE_HOT = "reduced-one-hot"


SCHEME_NAMES: tuple[str, ...] = tuple(kind.value for kind in SchemeKind)


class Trit(enum.Enum):
    """Quantized state of a single output node under the 40-20-40 rule."""

    ZERO = 0
    ONE = 1
    INDETERMINATE = 2


def quantize(value: float) -> Trit:
    """Quantize one activation: [0, 0.4] -> ZERO, [0.6, 1] -> ONE, else
    INDETERMINATE.

    The band boundaries 0.40 and 0.60 belong to the determinate bands.
    Values below 0 or above 1 (impossible for sigmoid outputs) fall into
    the nearest outer band.
    """
    if value <= 0.40:
        return Trit.ZERO
    if value >= 0.60:
        return Trit.ONE
    return Trit.INDETERMINATE


def output_width(kind: SchemeKind | str, class_count: int) -> int:
    """Number of output nodes the code *kind* uses for *class_count* classes.

    one-to-one needs one node per class; binary needs the smallest q with
    class_count <= 2**q (a single node for two classes); reduced-one-hot
    drops one node from the one-to-one layout.
    """
    if class_count < 2:
        raise InvalidClassError(f"need at least 2 classes, got {class_count}")
    kind = SchemeKind(kind)
    if kind is SchemeKind.ONE_TO_ONE:
        return class_count
    if kind is SchemeKind.REDUCED_ONE_HOT:
        return class_count - 1
    return (class_count - 1).bit_length()


@dataclass(frozen=True)
class EncodingScheme:
    """An output code bound to a fixed class count."""

    kind: SchemeKind
    class_count: int

    def __post_init__(self):
        object.__setattr__(self, "kind", SchemeKind(self.kind))
        if self.class_count < 2:
            raise InvalidClassError(
                f"need at least 2 classes, got {self.class_count}"
            )

    @property
    def width(self) -> int:
        """Output-layer width of this code."""
        return output_width(self.kind, self.class_count)

    def encode(self, class_index: int) -> np.ndarray:
        """Ideal 0/1 output vector for *class_index* (1-based)."""
        if not 1 <= class_index <= self.class_count:
            raise InvalidClassError(
                f"class index {class_index} outside 1..{self.class_count}"
            )
        width = self.width
        target = np.zeros(width, dtype=np.float64)
        if self.kind is SchemeKind.ONE_TO_ONE:
            target[class_index - 1] = 1.0
        elif self.kind is SchemeKind.REDUCED_ONE_HOT:
            if class_index < self.class_count:
                target[class_index - 1] = 1.0
        else:
            # Bits of class_index - 1, most significant first.
            value = class_index - 1
            for position in range(width):
                target[width - 1 - position] = float((value >> position) & 1)
        return target

    def decode(self, outputs) -> int | None:
        """Map raw output activations to a 1-based class index.

        Every node is quantized with the 40-20-40 rule first; any
        indeterminate node rejects the sample (returns ``None``).  A clean
        bit pattern is then matched against the code words:

        * one-to-one: exactly one high bit selects the class; all-zeros or
          multiple high bits are rejected.
        * binary: the bits are read as a base-2 numeral c, giving class
          c + 1; numerals with no class behind them (c + 1 > class_count)
          are rejected.
        * reduced-one-hot: one high bit selects its class, all-zeros means
          the last class, two or more high bits are rejected.
        """
        outputs = np.asarray(outputs, dtype=np.float64)
        if outputs.shape != (self.width,):
            raise DimensionError(
                f"expected output vector of width {self.width}, "
                f"got shape {outputs.shape}"
            )
        bits = []
        for value in outputs:
            trit = quantize(float(value))
            if trit is Trit.INDETERMINATE:
                return None
            bits.append(trit.value)

        if self.kind is SchemeKind.BINARY:
            code = 0
            for bit in bits:
                code = (code << 1) | bit
            return code + 1 if code + 1 <= self.class_count else None

        high = [index for index, bit in enumerate(bits) if bit == 1]
        if self.kind is SchemeKind.ONE_TO_ONE:
            return high[0] + 1 if len(high) == 1 else None
        if len(high) == 0:
            return self.class_count
        return high[0] + 1 if len(high) == 1 else None


def target_matrix(scheme: EncodingScheme, labels) -> np.ndarray:
    """Stack ideal output vectors for an array of 1-based labels."""
    labels = np.asarray(labels)
    return np.stack([scheme.encode(int(label)) for label in labels])
