"""Orthonormal 8x8 DCT-II and single-level 2-D Haar DWT.

DCT coefficient positions are quoted 1-based as (row, col) in docs; arrays
are indexed 0-based, so coefficient (5, 2) lives at ``coeffs[4, 1]``.

Haar subband convention (rows run vertically, columns horizontally):

* ``cA`` lowpass in both directions
* ``cH`` vertical lowpass, horizontal highpass
* ``cV`` vertical highpass, horizontal lowpass
* ``cD`` highpass in both directions

For a 2x2 input ``[[a, b], [c, d]]`` this gives ``cA = (a+b+c+d)/2``,
``cH = (a-b+c-d)/2``, ``cV = (a+b-c-d)/2`` and ``cD = (a-b-c+d)/2``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

N = 8
SQRT_HALF = np.sqrt(0.5)


def _dct_matrix(n: int = N) -> np.ndarray:
    k = np.arange(n)[:, None]
    x = np.arange(n)[None, :]
    basis = np.cos(np.pi * (2 * x + 1) * k / (2 * n))
    scale = np.full((n, 1), np.sqrt(2.0 / n))
    scale[0, 0] = np.sqrt(1.0 / n)
    return scale * basis


DCT_MATRIX = _dct_matrix()


def _check_block(block) -> np.ndarray:
    block = np.asarray(block, dtype=np.float64)
    if block.shape != (N, N):
        raise ValueError(f"expected an {N}x{N} block, got shape {block.shape}")
    return block


def dct2_8x8(block) -> np.ndarray:
    """Separable orthonormal 2-D DCT-II of one 8x8 block."""
    return DCT_MATRIX @ _check_block(block) @ DCT_MATRIX.T


def idct2_8x8(coeffs) -> np.ndarray:
    return DCT_MATRIX.T @ _check_block(coeffs) @ DCT_MATRIX


class DwtSubbands(NamedTuple):
    cA: np.ndarray
    cH: np.ndarray
    cV: np.ndarray
    cD: np.ndarray

    @property
    def original_shape(self) -> tuple[int, int]:
        rows, cols = self.cA.shape
        return 2 * rows, 2 * cols


def dwt2_haar(m) -> DwtSubbands:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    rows, cols = m.shape
    if rows % 2 or cols % 2:
        raise ValueError(
            f"Haar DWT needs even dimensions, got {rows}x{cols}; "
            f"crop to {rows - rows % 2}x{cols - cols % 2} first"
        )
    lo = (m[:, 0::2] + m[:, 1::2]) * SQRT_HALF
    hi = (m[:, 0::2] - m[:, 1::2]) * SQRT_HALF
    return DwtSubbands(
        cA=(lo[0::2] + lo[1::2]) * SQRT_HALF,
        cH=(hi[0::2] + hi[1::2]) * SQRT_HALF,
        cV=(lo[0::2] - lo[1::2]) * SQRT_HALF,
        cD=(hi[0::2] - hi[1::2]) * SQRT_HALF,
    )


def idwt2_haar(s: DwtSubbands) -> np.ndarray:
    cA, cH, cV, cD = (np.asarray(b, dtype=np.float64) for b in s)
    if not (cA.shape == cH.shape == cV.shape == cD.shape) or cA.ndim != 2:
        raise ValueError(
            f"subband shapes differ: cA {cA.shape}, cH {cH.shape}, cV {cV.shape}, cD {cD.shape}"
        )
    rows, cols = cA.shape
    lo = np.empty((2 * rows, cols))
    hi = np.empty((2 * rows, cols))
    lo[0::2] = (cA + cV) * SQRT_HALF
    lo[1::2] = (cA - cV) * SQRT_HALF
    hi[0::2] = (cH + cD) * SQRT_HALF
    hi[1::2] = (cH - cD) * SQRT_HALF
    out = np.empty((2 * rows, 2 * cols))
    out[:, 0::2] = (lo + hi) * SQRT_HALF
    out[:, 1::2] = (lo - hi) * SQRT_HALF
    return out
