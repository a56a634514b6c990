"""File formats: binary 8-bit PGM (P5) for images and masks, and
single-channel 32-bit PFM (Pf) for real-valued fields.

PFM payloads follow the usual convention: rows stored bottom-up, a
negative scale marking little-endian floats. All writes are atomic
(temp file in the target directory, then rename).
"""

from __future__ import annotations

import contextlib
import os
import tempfile
from pathlib import Path

import numpy as np

from .fields import as_field, as_mask

MASK_THRESHOLD = 128  # PGM value >= this reads as foreground


def atomic_write_bytes(path, payload: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        c = data[pos:pos + 1]
        if c == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos:pos + 1].isspace():
        pos += 1
    if start == pos:
        raise ValueError("truncated header")
    return data[start:pos], pos


def read_pgm(path) -> np.ndarray:
    """8-bit binary PGM as a uint8 (H, W) array."""
    data = Path(path).read_bytes()
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary (P5) PGM file")
    pos = 2
    fields = []
    try:
        for _ in range(3):
            token, pos = _next_token(data, pos)
            fields.append(int(token))
    except ValueError as exc:
        raise ValueError(f"{path}: bad PGM header ({exc})") from exc
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise ValueError(f"{path}: bad PGM dimensions {width}x{height}")
    if not 0 < maxval <= 255:
        raise ValueError(f"{path}: only 8-bit PGM supported (maxval {maxval})")
    pos += 1  # single whitespace byte after maxval
    pixels = np.frombuffer(data[pos:pos + width * height], dtype=np.uint8)
    if pixels.size != width * height:
        raise ValueError(f"{path}: truncated PGM pixel data")
    return pixels.reshape(height, width).copy()


def write_pgm(path, image) -> None:
    img = np.asarray(image)
    if img.ndim != 2:
        raise ValueError("PGM image must be 2-d")
    img = np.clip(img, 0, 255).astype(np.uint8)
    height, width = img.shape
    header = b"P5\n%d %d\n255\n" % (width, height)
    atomic_write_bytes(path, header + img.tobytes())


def read_mask_pgm(path) -> np.ndarray:
    return read_pgm(path) >= MASK_THRESHOLD


def write_mask_pgm(path, mask) -> None:
    write_pgm(path, np.where(as_mask(mask), 255, 0))


def read_pfm(path) -> np.ndarray:
    """Single-channel PFM as a float64 (H, W) array."""
    data = Path(path).read_bytes()
    if data.startswith(b"PF"):
        raise ValueError(f"{path}: 3-channel PFM is not supported")
    if not data.startswith(b"Pf"):
        raise ValueError(f"{path}: not a single-channel (Pf) PFM file")
    pos = 2
    try:
        w_tok, pos = _next_token(data, pos)
        h_tok, pos = _next_token(data, pos)
        s_tok, pos = _next_token(data, pos)
        width, height, scale = int(w_tok), int(h_tok), float(s_tok)
    except ValueError as exc:
        raise ValueError(f"{path}: bad PFM header ({exc})") from exc
    if width < 1 or height < 1:
        raise ValueError(f"{path}: bad PFM dimensions {width}x{height}")
    pos += 1  # single whitespace byte after the scale
    dtype = "<f4" if scale < 0 else ">f4"
    if len(data) - pos < 4 * width * height:
        raise ValueError(f"{path}: truncated PFM pixel data")
    values = np.frombuffer(data[pos:pos + 4 * width * height], dtype=dtype)
    field = np.flipud(values.reshape(height, width)).astype(np.float64)
    if not np.isfinite(field).all():
        raise ValueError(f"{path}: PFM contains non-finite values")
    return field


def write_pfm(path, field) -> None:
    f = as_field(field)
    height, width = f.shape
    header = b"Pf\n%d %d\n-1.0\n" % (width, height)
    payload = np.flipud(f).astype("<f4").tobytes()
    atomic_write_bytes(path, header + payload)
