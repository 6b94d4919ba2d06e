"""Binary grid files and PGM import/export.

Grid binary format (``.drcgrid``): 8-byte magic ``DRCGRID1``, three 32-bit
little-endian unsigned dims (h, w, c), then h*w*c 64-bit little-endian
IEEE-754 values in row-major order.

PGM (P5, maxval 255) covers 1-channel visualization. Byte values map
linearly [0, 255] <-> [0, 1] <-> [-1, 1]; the model domain [-1, 1] is
clipped into range on export.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .grid import Grid

__all__ = ["GRID_MAGIC", "read_grid", "write_grid", "read_pgm", "write_pgm"]

GRID_MAGIC = b"DRCGRID1"
_HEADER = struct.Struct("<8sIII")


def write_grid(path: str | Path, grid: Grid) -> None:
    h, w, c = grid.shape
    payload = np.ascontiguousarray(grid.data, dtype="<f8").tobytes()
    Path(path).write_bytes(_HEADER.pack(GRID_MAGIC, h, w, c) + payload)


def read_grid(path: str | Path) -> Grid:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated grid file")
    magic, h, w, c = _HEADER.unpack_from(raw)
    if magic != GRID_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    expected = _HEADER.size + 8 * h * w * c
    if len(raw) != expected:
        raise ValueError(f"{path}: expected {expected} bytes, got {len(raw)}")
    data = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size).reshape(h, w, c)
    return Grid(data.astype(np.float64))


def write_pgm(path: str | Path, grid: Grid) -> None:
    if grid.channels != 1:
        raise ValueError("PGM export requires a 1-channel grid")
    storage = np.clip((grid.data[:, :, 0] + 1.0) / 2.0, 0.0, 1.0)
    bytes_ = np.round(storage * 255.0).astype(np.uint8)
    header = f"P5\n{grid.width} {grid.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + bytes_.tobytes())


def read_pgm(path: str | Path) -> Grid:
    raw = Path(path).read_bytes()
    fields: list[bytes] = []
    pos = 0
    # header = magic, width, height, maxval; '#' comments allowed between fields
    while len(fields) < 4 and pos < len(raw):
        if raw[pos : pos + 1].isspace():
            pos += 1
        elif raw[pos : pos + 1] == b"#":
            pos = raw.index(b"\n", pos) + 1
        else:
            end = pos
            while end < len(raw) and not raw[end : end + 1].isspace():
                end += 1
            fields.append(raw[pos:end])
            pos = end
    if len(fields) < 4 or fields[0] != b"P5":
        raise ValueError(f"{path}: not a binary PGM file")
    w, h, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    if maxval != 255:
        raise ValueError(f"{path}: only maxval 255 supported, got {maxval}")
    pos += 1  # single whitespace after maxval
    pixels = np.frombuffer(raw, dtype=np.uint8, count=h * w, offset=pos)
    if pixels.size != h * w:
        raise ValueError(f"{path}: truncated pixel data")
    model = pixels.reshape(h, w, 1).astype(np.float64) / 255.0 * 2.0 - 1.0
    return Grid(model)
