"""Minimal PGM (P2 ASCII / P5 binary) reader and writer, maxval <= 255."""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _read_tokens(data: bytes, count: int):
    """First `count` whitespace-separated tokens, '#' comments skipped.
    Returns (tokens, offset just past the single whitespace after the last)."""
    tokens = []
    i = 0
    while len(tokens) < count:
        if i >= len(data):
            raise ValueError("truncated PGM header")
        c = data[i:i + 1]
        if c == b"#":
            while i < len(data) and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j:j + 1].isspace() \
                    and data[j:j + 1] != b"#":
                j += 1
            tokens.append(data[i:j])
            i = j
    return tokens, i


def read_pgm(path) -> np.ndarray:
    """Read a P2 or P5 PGM into a uint8 array."""
    data = Path(path).read_bytes()
    (magic, w, h, maxval), i = _read_tokens(data, 4)
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"{path}: not a PGM (magic {magic!r})")
    w, h, maxval = int(w), int(h), int(maxval)
    if maxval <= 0 or maxval > 255:
        raise ValueError(f"{path}: unsupported maxval {maxval}")
    if magic == b"P5":
        i += 1  # exactly one whitespace byte after maxval
        raster = data[i:i + w * h]
        if len(raster) < w * h:
            raise ValueError(f"{path}: truncated raster")
        img = np.frombuffer(raster, dtype=np.uint8, count=w * h)
    else:
        values = data[i:].split()
        if len(values) < w * h:
            raise ValueError(f"{path}: truncated raster")
        img = np.array([int(v) for v in values[:w * h]], dtype=np.uint8)
    return img.reshape(h, w)


def write_pgm(path, img, binary: bool = True, maxval: int = 255) -> None:
    """Write a 2-D array as PGM, clipping and rounding to [0, maxval]."""
    a = np.asarray(img, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("image must be 2-D")
    if not 0 < maxval <= 255:
        raise ValueError(f"unsupported maxval {maxval}")
    q = np.clip(np.rint(a), 0, maxval).astype(np.uint8)
    h, w = q.shape
    if binary:
        header = f"P5\n{w} {h}\n{maxval}\n".encode()
        Path(path).write_bytes(header + q.tobytes())
    else:
        lines = "\n".join(" ".join(str(v) for v in row) for row in q)
        Path(path).write_text(f"P2\n{w} {h}\n{maxval}\n{lines}\n")
