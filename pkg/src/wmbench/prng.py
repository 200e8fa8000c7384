"""Keyed, platform-independent pseudo-noise generation.

Everything here is defined by SplitMix64 (Steele, Lea & Flood, 2014):

    mix64(z):  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
               z = (z ^ (z >> 27)) * 0x94D049BB133111EB
               return z ^ (z >> 31)                       (all mod 2**64)

    derive_seed(master, i) = mix64(master ^ mix64((i + 1) * GOLDEN))
    pn_sequence(seed, n)[j] = +1 if bit 63 of mix64(seed + (j + 1) * GOLDEN) else -1

with GOLDEN = 0x9E3779B97F4A7C15. ``pn_sequence`` is therefore the plain
SplitMix64 output stream for ``seed``, taking the top bit of each output.
Both maps are bijective in the index, so per-bit seeds under one master key
never collide.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def splitmix64_stream(seed: int, length: int) -> np.ndarray:
    """First `length` raw 64-bit outputs of SplitMix64 seeded with `seed`."""
    counter = np.arange(1, length + 1, dtype=np.uint64)
    state = counter * np.uint64(GOLDEN) + np.uint64(seed & MASK64)
    return _mix64_array(state)


def parse_key(text: str | int) -> int:
    """Accept decimal or 0x-prefixed hex; the result must fit in 64 bits."""
    if isinstance(text, int):
        value = text
    else:
        text = text.strip()
        try:
            value = int(text, 16) if text.lower().startswith("0x") else int(text, 10)
        except ValueError:
            raise ValueError(f"invalid key {text!r}: expected decimal or 0x-prefixed hex") from None
    if not 0 <= value <= MASK64:
        raise ValueError(f"key {value} does not fit in an unsigned 64-bit integer")
    return value


def derive_seed(key: int, bit_index: int) -> int:
    if bit_index < 0:
        raise ValueError("bit_index must be non-negative")
    return mix64((key & MASK64) ^ mix64((bit_index + 1) * GOLDEN))


def pn_sequence(seed: int, length: int) -> np.ndarray:
    """Bipolar (+1/-1) float64 sequence from the top bit of each output."""
    if length < 1:
        raise ValueError("PN sequence length must be positive")
    top = splitmix64_stream(seed, length) >> np.uint64(63)
    return top.astype(np.float64) * 2.0 - 1.0


def pn_matrix(seed: int, shape: tuple[int, int]) -> np.ndarray:
    rows, cols = shape
    return pn_sequence(seed, rows * cols).reshape(rows, cols)
