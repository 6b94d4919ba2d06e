"""Dense image grids, seeded randomness, and elementwise distances.

A :class:`Grid` is the universal carrier for everything pixel-shaped in the
pipeline: clean images, noised states, degraded images, restorations,
saliency maps. Values are float64 in row-major ``(row, col, channel)`` order
and live in the model domain ``[-1, 1]``; conversion to the ``[0, 1]``
storage domain happens only at I/O boundaries (see :mod:`drc.gridio`).

Randomness is counter-based (Philox) and keyed by ``(seed, stream)``, so a
given stream produces the same draws no matter how many grids were drawn on
other streams or on how many worker threads.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid",
    "SeededRng",
    "derive_seed",
    "gaussian_grid",
    "linf_distance",
    "pixel_l1",
    "pixel_mse",
]

_MAX_UINT64 = 2**64 - 1


@dataclass(frozen=True)
class Grid:
    """An immutable H x W x C float64 grid with all-finite entries."""

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(self.data, dtype=np.float64)
        if arr.ndim != 3:
            raise ValueError(f"grid data must be 3-D (h, w, c), got shape {arr.shape}")
        h, w, c = arr.shape
        if h < 1 or w < 1:
            raise ValueError(f"grid dimensions must be positive, got {h}x{w}")
        if c not in (1, 3):
            raise ValueError(f"grid must have 1 or 3 channels, got {c}")
        if not np.isfinite(arr).all():
            raise ValueError("grid contains non-finite values")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape

    @classmethod
    def zeros(cls, h: int, w: int, c: int = 1) -> Grid:
        return cls(np.zeros((h, w, c)))

    @classmethod
    def full(cls, h: int, w: int, c: int = 1, value: float = 0.0) -> Grid:
        return cls(np.full((h, w, c), float(value)))

    def allclose(self, other: Grid, atol: float = 0.0) -> bool:
        return self.shape == other.shape and bool(
            np.allclose(self.data, other.data, rtol=0.0, atol=atol)
        )


def _require_same_shape(a: Grid, b: Grid) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")


def derive_seed(base: int, *parts: int) -> int:
    """Derive a child seed from a base seed and integer context parts.

    Hash-based so distinct (sample, task, purpose) tuples never collide in
    practice; stable across platforms and runs.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(struct.pack("<Q", base & _MAX_UINT64))
    for p in parts:
        h.update(struct.pack("<q", int(p)))
    return int.from_bytes(h.digest(), "little")


@dataclass
class SeededRng:
    """A Philox-keyed random stream identified by ``(seed, stream)``.

    Streams with different ids are statistically independent, and the draw
    sequence of one stream is unaffected by draws on any other, which keeps
    per-sample results identical under any parallel scheduling.
    """

    seed: int
    stream: int = 0
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.seed <= _MAX_UINT64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not 0 <= self.stream <= _MAX_UINT64:
            raise ValueError(f"stream must be a 64-bit unsigned integer, got {self.stream}")
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def normal(self, shape: tuple[int, ...]) -> np.ndarray:
        return self._gen.standard_normal(shape)

    def integers(self, low: int, high: int, size: int | None = None):
        return self._gen.integers(low, high, size=size)

    def uniform(self, low: float, high: float, size=None):
        return self._gen.uniform(low, high, size=size)


def gaussian_grid(rng: SeededRng, h: int, w: int, c: int = 1) -> Grid:
    """Draw an i.i.d. standard-normal grid from the given stream."""
    if h < 1 or w < 1 or c < 1:
        raise ValueError(f"dimensions must be >= 1, got ({h}, {w}, {c})")
    return Grid(rng.normal((h, w, c)))


def linf_distance(a: Grid, b: Grid) -> float:
    """Maximum absolute elementwise difference."""
    _require_same_shape(a, b)
    return float(np.max(np.abs(a.data - b.data)))


def pixel_l1(a: Grid, b: Grid) -> float:
    """Mean absolute difference over all elements."""
    _require_same_shape(a, b)
    return float(np.mean(np.abs(a.data - b.data)))


def pixel_mse(a: Grid, b: Grid) -> float:
    """Mean squared difference over all elements."""
    _require_same_shape(a, b)
    return float(np.mean((a.data - b.data) ** 2))
