"""Image-quality and detection-quality metrics.

PSNR uses a fixed 8-bit peak of 255 and returns ``math.inf`` for identical
images. Correlation uses population statistics.
"""

from __future__ import annotations

import math

import numpy as np

PEAK = 255.0


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def mse(a, b) -> float:
    a, b = _pair(a, b)
    return float(np.mean((a - b) ** 2))


def rmse(a, b) -> float:
    return math.sqrt(mse(a, b))


def mae(a, b) -> float:
    a, b = _pair(a, b)
    return float(np.mean(np.abs(a - b)))


def psnr(a, b) -> float:
    err = mse(a, b)
    if err == 0:
        return math.inf
    return 10.0 * math.log10(PEAK * PEAK / err)


def correlation2d(a, b) -> float:
    """Pearson correlation over all cells of two equally shaped matrices."""
    a, b = _pair(a, b)
    da = a - a.mean()
    db = b - b.mean()
    sa = math.sqrt(float(np.mean(da * da)))
    sb = math.sqrt(float(np.mean(db * db)))
    if sa == 0 or sb == 0:
        raise ValueError("correlation is undefined for a constant input")
    r = float(np.mean(da * db)) / (sa * sb)
    return max(-1.0, min(1.0, r))


def ber(expected, actual) -> float:
    expected = np.asarray(expected)
    actual = np.asarray(actual)
    if expected.shape != actual.shape:
        raise ValueError(f"dimension mismatch: {expected.shape} vs {actual.shape}")
    return float(np.count_nonzero(expected != actual)) / expected.size
