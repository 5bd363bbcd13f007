"""Deterministic 64-bit seed derivation.

Experiment runs need many independent generator seeds (one per fold plan,
one per weight initialization) that are all reproducible from a single
master seed.  ``mix64`` chains the splitmix64 finalizer over its integer
arguments, so ``mix64(master, t)`` and ``mix64(master, t, j)`` give
well-separated, platform-independent streams.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _finalize(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix64(*values: int) -> int:
    """Collapse integers into one 64-bit seed; order-sensitive, deterministic.

    Negative inputs are reduced modulo 2**64 first.
    """
    state = 0
    for value in values:
        state = (state + _GOLDEN) & _MASK64
        state = _finalize(state ^ (int(value) & _MASK64))
    return state
