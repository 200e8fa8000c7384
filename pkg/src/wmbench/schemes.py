"""Embedding and blind extraction for the three watermarking schemes.

Watermarks are 2-D uint8 arrays over {0, 1}, vectorized row-major.

Spread-spectrum convention (shared by the spatial and wavelet schemes):
a 0 bit adds ``k * pn`` for that bit's PN pattern, a 1 bit adds nothing.
The detector correlates every bit's pattern with the received signal and
decodes 0 wherever the correlation exceeds the mean correlation over all
bits, 1 elsewhere. A watermark whose bits are all equal therefore carries
no usable threshold; such marks raise ``DegenerateWatermarkWarning``.

PN seeds: the spatial scheme uses ``derive_seed(key, i)`` for bit ``i``.
The wavelet scheme uses ``derive_seed(key, 2*i)`` for the cH pattern and
``derive_seed(key, 2*i + 1)`` for the cV pattern.

The DCT scheme is keyless. Bit ``i`` lives in the ``i``-th 8x8 block
(row-major) in the relation between coefficients (5, 2) and (4, 3),
1-based: a 1 means (5, 2) > (4, 3), a 0 means (5, 2) < (4, 3), and the
embedder keeps them at least ``k`` apart before re-quantization.
"""

from __future__ import annotations

import enum
import warnings

import numpy as np

from . import prng
from .image import blocks_8x8, check_gray, from_real, to_real
from .metrics import correlation2d
from .transforms import DwtSubbands, dct2_8x8, dwt2_haar, idct2_8x8, idwt2_haar

# 0-based positions of the 1-based mid-band pair (5, 2) and (4, 3)
COEFF_A = (4, 1)
COEFF_B = (3, 2)

# absorbs floating-point residue so exact ties decode as 0
TIE_TOLERANCE = 1e-9

# samples per watermark bit below which the additive schemes get unreliable
MIN_SAMPLES_PER_BIT = 64


class SchemeId(str, enum.Enum):
    SPATIAL = "spatial"
    DCT = "dct"
    DWT = "dwt"

    @classmethod
    def parse(cls, name: str) -> "SchemeId":
        key = name.strip().lower()
        aliases = {
            "spatial-cdma": cls.SPATIAL,
            "spatialcdma": cls.SPATIAL,
            "dct-midband": cls.DCT,
            "dctmidband": cls.DCT,
            "wavelet": cls.DWT,
            "wavelet-cdma": cls.DWT,
            "waveletcdma": cls.DWT,
        }
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown scheme {name!r} (choose from {choices})") from None

    @property
    def keyed(self) -> bool:
        return self is not SchemeId.DCT


DEFAULT_GAINS = {SchemeId.SPATIAL: 8.0, SchemeId.DCT: 25.0, SchemeId.DWT: 4.0}


class DegenerateWatermarkWarning(UserWarning):
    """All watermark bits are equal, so mean-threshold detection is meaningless."""


class CapacityWarning(UserWarning):
    """Too few host samples per watermark bit for reliable additive embedding."""


class CapacityError(ValueError):
    pass


def check_bits(bits) -> np.ndarray:
    arr = np.asarray(bits)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"watermark must be a non-empty 2-D bit matrix, got shape {arr.shape}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("watermark bits must be 0 or 1")
    return arr.astype(np.uint8)


def _check_gain(gain: float) -> float:
    gain = float(gain)
    if not np.isfinite(gain) or gain <= 0:
        raise ValueError(f"gain must be positive and finite, got {gain}")
    return gain


def _warn_if_degenerate(bits: np.ndarray) -> None:
    if bits.min() == bits.max():
        warnings.warn(
            f"watermark bits are all {int(bits.flat[0])}; mean-threshold detection cannot recover it",
            DegenerateWatermarkWarning,
            stacklevel=3,
        )


def _warn_if_over_budget(n_bits: int, n_samples: int) -> None:
    if n_bits * MIN_SAMPLES_PER_BIT > n_samples:
        warnings.warn(
            f"{n_bits} watermark bits over {n_samples} samples is below "
            f"{MIN_SAMPLES_PER_BIT} samples per bit; expect bit errors",
            CapacityWarning,
            stacklevel=3,
        )


def _mean_threshold(correlations: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    bits = np.ones(correlations.size, dtype=np.uint8)
    bits[correlations > correlations.mean()] = 0
    return bits.reshape(shape)


def _check_shape(rows: int, cols: int) -> tuple[int, int]:
    if rows < 1 or cols < 1:
        raise ValueError(f"watermark size must be positive, got {rows}x{cols}")
    return int(rows), int(cols)


# -- spatial CDMA spread spectrum ---------------------------------------------

def embed_spatial(cover, wm, key: int, gain: float = DEFAULT_GAINS[SchemeId.SPATIAL]) -> np.ndarray:
    cover = check_gray(cover)
    bits = check_bits(wm)
    gain = _check_gain(gain)
    _warn_if_degenerate(bits)
    _warn_if_over_budget(bits.size, cover.size)
    work = to_real(cover)
    for i, bit in enumerate(bits.flat):
        if bit == 0:
            work += gain * prng.pn_matrix(prng.derive_seed(key, i), work.shape)
    return from_real(work)


def spatial_correlations(img, key: int, n_bits: int) -> np.ndarray:
    signal = to_real(img)
    return np.array([
        correlation2d(signal, prng.pn_matrix(prng.derive_seed(key, i), signal.shape))
        for i in range(n_bits)
    ])


def extract_spatial(img, key: int, wm_rows: int, wm_cols: int) -> np.ndarray:
    shape = _check_shape(wm_rows, wm_cols)
    return _mean_threshold(spatial_correlations(img, key, shape[0] * shape[1]), shape)


# -- mid-band DCT coefficient comparison --------------------------------------

def dct_capacity(shape: tuple[int, int]) -> int:
    rows, cols = shape
    return (rows // 8) * (cols // 8)


def embed_dct_block(coeffs: np.ndarray, bit: int, gain: float) -> np.ndarray:
    """Force the mid-band pair to encode `bit` with separation at least `gain`."""
    out = coeffs.copy()
    a, b = out[COEFF_A], out[COEFF_B]
    hi, lo = max(a, b), min(a, b)
    a, b = (hi, lo) if bit else (lo, hi)
    gap = abs(a - b)
    if gap < gain:
        push = (gain - gap) / 2.0
        if bit:
            a, b = a + push, b - push
        else:
            a, b = a - push, b + push
    out[COEFF_A], out[COEFF_B] = a, b
    return out


def decode_dct_block(coeffs: np.ndarray) -> int:
    """1 iff (5, 2) > (4, 3); differences within ``TIE_TOLERANCE`` decode as 0."""
    return int(coeffs[COEFF_A] - coeffs[COEFF_B] > TIE_TOLERANCE)


def embed_dct(cover, message, gain: float = DEFAULT_GAINS[SchemeId.DCT]) -> np.ndarray:
    cover = check_gray(cover)
    bits = check_bits(message)
    gain = _check_gain(gain)
    work = to_real(cover)
    blocks = blocks_8x8(work)
    if bits.size > len(blocks):
        raise CapacityError(
            f"message has {bits.size} bits but a {cover.shape[0]}x{cover.shape[1]} "
            f"cover only has {len(blocks)} 8x8 blocks"
        )
    for bit, (_, block) in zip(bits.flat, blocks):
        block[...] = idct2_8x8(embed_dct_block(dct2_8x8(block), int(bit), gain))
    return from_real(work)


def extract_dct(img, n_bits: int, wm_rows: int, wm_cols: int) -> np.ndarray:
    shape = _check_shape(wm_rows, wm_cols)
    if n_bits != shape[0] * shape[1]:
        raise ValueError(f"n_bits={n_bits} does not match watermark size {shape[0]}x{shape[1]}")
    blocks = blocks_8x8(to_real(img))
    if n_bits > len(blocks):
        raise CapacityError(f"asked for {n_bits} bits but the image only has {len(blocks)} 8x8 blocks")
    bits = [decode_dct_block(dct2_8x8(block)) for _, block in blocks[:n_bits]]
    return np.array(bits, dtype=np.uint8).reshape(shape)


# -- wavelet CDMA spread spectrum ---------------------------------------------

def dwt_patterns(key: int, index: int, shape: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """The (cH, cV) PN patterns for watermark bit `index`."""
    return (
        prng.pn_matrix(prng.derive_seed(key, 2 * index), shape),
        prng.pn_matrix(prng.derive_seed(key, 2 * index + 1), shape),
    )


def dwt_marked_real(cover, bits: np.ndarray, key: int, gain: float) -> np.ndarray:
    """Watermarked image before re-quantization."""
    bands = dwt2_haar(to_real(cover))
    cH, cV = bands.cH.copy(), bands.cV.copy()
    for i, bit in enumerate(bits.flat):
        if bit == 0:
            pn_h, pn_v = dwt_patterns(key, i, cH.shape)
            cH += gain * pn_h
            cV += gain * pn_v
    return idwt2_haar(DwtSubbands(bands.cA, cH, cV, bands.cD))


def embed_dwt(cover, wm, key: int, gain: float = DEFAULT_GAINS[SchemeId.DWT]) -> np.ndarray:
    cover = check_gray(cover)
    bits = check_bits(wm)
    gain = _check_gain(gain)
    _warn_if_degenerate(bits)
    marked = dwt_marked_real(cover, bits, key, gain)
    _warn_if_over_budget(bits.size, cover.size // 2)
    return from_real(marked)


def dwt_correlations(img, key: int, n_bits: int) -> np.ndarray:
    bands = dwt2_haar(to_real(img))
    out = np.empty(n_bits)
    for i in range(n_bits):
        pn_h, pn_v = dwt_patterns(key, i, bands.cH.shape)
        out[i] = (correlation2d(bands.cH, pn_h) + correlation2d(bands.cV, pn_v)) / 2.0
    return out


def extract_dwt(img, key: int, wm_rows: int, wm_cols: int) -> np.ndarray:
    shape = _check_shape(wm_rows, wm_cols)
    return _mean_threshold(dwt_correlations(img, key, shape[0] * shape[1]), shape)


# -- dispatch -----------------------------------------------------------------

def embed(scheme: SchemeId | str, cover, wm, key: int = 0, gain: float | None = None) -> np.ndarray:
    scheme = SchemeId.parse(scheme) if isinstance(scheme, str) else scheme
    gain = DEFAULT_GAINS[scheme] if gain is None else gain
    if scheme is SchemeId.SPATIAL:
        return embed_spatial(cover, wm, key, gain)
    if scheme is SchemeId.DCT:
        return embed_dct(cover, wm, gain)
    return embed_dwt(cover, wm, key, gain)


def extract(scheme: SchemeId | str, img, key: int, shape: tuple[int, int]) -> np.ndarray:
    scheme = SchemeId.parse(scheme) if isinstance(scheme, str) else scheme
    rows, cols = shape
    if scheme is SchemeId.SPATIAL:
        return extract_spatial(img, key, rows, cols)
    if scheme is SchemeId.DCT:
        return extract_dct(img, rows * cols, rows, cols)
    return extract_dwt(img, key, rows, cols)
