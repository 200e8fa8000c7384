"""Grayscale rasters, re-quantization and portable graymap I/O.

Images are plain 2-D ``numpy.uint8`` arrays (rows x cols); working buffers
are ``float64`` arrays of the same shape. Vectorization is row-major
everywhere.
"""

from __future__ import annotations

import numpy as np

BLOCK = 8


class PgmError(ValueError):
    """Malformed or unsupported graymap data."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


def check_gray(img) -> np.ndarray:
    """Return `img` as a validated 2-D uint8 array."""
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D grayscale image, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer) or arr.min() < 0 or arr.max() > 255:
            raise ValueError("grayscale pixels must be integers in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def _is_space(byte: int) -> bool:
    return byte in b" \t\n\r\v\f"


def _read_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Skip whitespace and comments, then read one header token."""
    n = len(data)
    while pos < n:
        if _is_space(data[pos]):
            pos += 1
        elif data[pos] == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    start = pos
    while pos < n and not _is_space(data[pos]) and data[pos] != ord("#"):
        pos += 1
    if start == pos:
        raise PgmError("unexpected end of header", start)
    return data[start:pos], pos


def _read_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    token, end = _read_token(data, pos)
    if not token.isdigit():
        raise PgmError(f"invalid {what} {token!r}", end - len(token))
    return int(token), end


def load_pgm(data: bytes) -> np.ndarray:
    """Decode a P5 (binary) or P2 (ASCII) graymap with maxval 255."""
    magic, pos = _read_token(data, 0)
    if magic not in (b"P5", b"P2"):
        raise PgmError(f"unknown magic {magic!r}", 0)
    width, pos = _read_int(data, pos, "width")
    height, pos = _read_int(data, pos, "height")
    if width < 1 or height < 1:
        raise PgmError("image dimensions must be positive", pos)
    token, pos = _read_token(data, pos)
    if not token.isdigit():
        raise PgmError(f"invalid maxval {token!r}", pos - len(token))
    maxval = int(token)
    if maxval != 255:
        raise PgmError(f"unsupported maxval {maxval}", pos - len(token))
    count = width * height

    if magic == b"P5":
        if pos >= len(data) or not _is_space(data[pos]):
            raise PgmError("missing whitespace after maxval", pos)
        pos += 1
        raster = data[pos:pos + count]
        if len(raster) < count:
            raise PgmError(f"truncated pixel data: need {count} bytes, have {len(raster)}", pos + len(raster))
        pixels = np.frombuffer(raster, dtype=np.uint8)
    else:
        values = []
        for _ in range(count):
            try:
                value, pos = _read_int(data, pos, "pixel")
            except PgmError as exc:
                raise PgmError(f"truncated pixel data: read {len(values)} of {count} samples", exc.offset) from None
            if value > 255:
                raise PgmError(f"pixel value {value} exceeds maxval", pos)
            values.append(value)
        pixels = np.array(values, dtype=np.uint8)
    return pixels.reshape(height, width).copy()


def save_pgm(img) -> bytes:
    """Encode as canonical P5: ``P5\\n<w> <h>\\n255\\n`` followed by raw bytes."""
    arr = check_gray(img)
    height, width = arr.shape
    return f"P5\n{width} {height}\n255\n".encode("ascii") + np.ascontiguousarray(arr).tobytes()


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return load_pgm(fh.read())


def write_pgm(path, img) -> None:
    with open(path, "wb") as fh:
        fh.write(save_pgm(img))


def to_real(img) -> np.ndarray:
    return check_gray(img).astype(np.float64)


def round_half_away(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def from_real(m) -> np.ndarray:
    """Round half away from zero, then clamp into [0, 255]."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or infinite values")
    return np.clip(round_half_away(m), 0, 255).astype(np.uint8)


def blocks_8x8(m: np.ndarray) -> list[tuple[tuple[int, int], np.ndarray]]:
    """Row-major list of ``((block_row, block_col), view)`` over 8x8 tiles.

    The views alias `m`, so writing into one changes exactly its 64 cells.
    """
    rows, cols = m.shape
    if rows % BLOCK or cols % BLOCK:
        raise ValueError(
            f"image dimensions {rows}x{cols} are not multiples of {BLOCK}; "
            f"crop to {rows - rows % BLOCK}x{cols - cols % BLOCK} first"
        )
    return [
        ((br, bc), m[br * BLOCK:(br + 1) * BLOCK, bc * BLOCK:(bc + 1) * BLOCK])
        for br in range(rows // BLOCK)
        for bc in range(cols // BLOCK)
    ]
