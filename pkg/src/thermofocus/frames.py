"""Thermal frame and focus-stack data model.

Frames hold 16-bit radiometric counts in row-major order. Coordinates are
``(x, y) = (column, row)`` with the origin at the top-left pixel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import FrameSizeError, PixelRangeError, StackError

MAX_COUNT = 65535


@dataclass(frozen=True, eq=False)
class ThermalFrame:
    """Immutable 2-D grid of radiometric counts.

    ``pixels`` is a read-only ``uint16`` array of shape ``(height, width)``.
    Build frames with :func:`frame_from_values` or :meth:`from_array`.
    """

    width: int
    height: int
    pixels: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise FrameSizeError(f"frame dimensions must be positive, got {self.width}x{self.height}")
        if self.pixels.shape != (self.height, self.width):
            raise FrameSizeError(
                f"pixel grid has shape {self.pixels.shape}, expected {(self.height, self.width)}"
            )
        if self.pixels.dtype != np.uint16:
            raise PixelRangeError(f"pixels must be uint16, got {self.pixels.dtype}")
        self.pixels.flags.writeable = False

    @classmethod
    def from_array(cls, array) -> "ThermalFrame":
        """Wrap a 2-D integer array (copied) as a frame, checking the count range."""
        arr = np.asarray(array)
        if arr.ndim != 2:
            raise FrameSizeError(f"expected a 2-D array, got {arr.ndim} dimensions")
        if arr.size and not np.issubdtype(arr.dtype, np.integer):
            if not np.all(np.equal(np.mod(arr, 1), 0)):
                raise PixelRangeError("pixel values must be integers")
        if arr.size and (arr.min() < 0 or arr.max() > MAX_COUNT):
            raise PixelRangeError(f"pixel values must lie in [0, {MAX_COUNT}]")
        h, w = arr.shape
        return cls(w, h, arr.astype(np.uint16, copy=True))

    def pixel(self, x: int, y: int) -> int:
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise IndexError(f"pixel ({x}, {y}) outside {self.width}x{self.height} frame")
        return int(self.pixels[y, x])

    def values(self) -> list[int]:
        """Row-major pixel sequence."""
        return self.pixels.ravel().tolist()

    def __eq__(self, other):
        if not isinstance(other, ThermalFrame):
            return NotImplemented
        return (self.width, self.height) == (other.width, other.height) and np.array_equal(
            self.pixels, other.pixels
        )

    def __hash__(self):
        return hash((self.width, self.height, self.pixels.tobytes()))


def frame_from_values(width: int, height: int, values: Sequence[int]) -> ThermalFrame:
    """Build a frame from a row-major sequence of ``width * height`` counts."""
    if width <= 0 or height <= 0:
        raise FrameSizeError(f"frame dimensions must be positive, got {width}x{height}")
    seq = list(values)
    if len(seq) != width * height:
        raise FrameSizeError(f"got {len(seq)} values for a {width}x{height} frame")
    for v in seq:
        if int(v) != v:
            raise PixelRangeError(f"pixel value {v!r} is not an integer")
        if not 0 <= v <= MAX_COUNT:
            raise PixelRangeError(f"pixel value {v} outside [0, {MAX_COUNT}]")
    arr = np.array(seq, dtype=np.int64).reshape(height, width).astype(np.uint16)
    return ThermalFrame(width, height, arr)


def normalize_frame(frame: ThermalFrame) -> ThermalFrame:
    """Stretch counts linearly so the minimum maps to 0 and the maximum to 65535.

    Rounding is half-up and done in integer arithmetic. A constant frame maps
    to all zeros.
    """
    p = frame.pixels.astype(np.int64)
    lo, hi = int(p.min()), int(p.max())
    span = hi - lo
    if span == 0:
        return ThermalFrame(frame.width, frame.height, np.zeros_like(frame.pixels))
    # floor(v * M / span + 1/2) == (2 v M + span) // (2 span)
    out = (2 * (p - lo) * MAX_COUNT + span) // (2 * span)
    return ThermalFrame(frame.width, frame.height, out.astype(np.uint16))


@dataclass(frozen=True)
class FocusStack:
    """Frames of one scene taken at increasing lens ring positions."""

    frames: tuple[ThermalFrame, ...]
    positions_mm: tuple[float, ...]
    ambient_c: float = 20.0
    object_temp_c: float | None = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        object.__setattr__(self, "positions_mm", tuple(float(p) for p in self.positions_mm))
        if not self.frames:
            raise StackError("a focus stack needs at least one frame")
        if len(self.frames) != len(self.positions_mm):
            raise StackError(
                f"{len(self.frames)} frames but {len(self.positions_mm)} positions"
            )
        if any(b <= a for a, b in zip(self.positions_mm, self.positions_mm[1:])):
            raise StackError("positions_mm must be strictly increasing")
        w, h = self.frames[0].width, self.frames[0].height
        for k, f in enumerate(self.frames):
            if (f.width, f.height) != (w, h):
                raise FrameSizeError(
                    f"frame {k} is {f.width}x{f.height}, stack frames are {w}x{h}"
                )

    def __len__(self):
        return len(self.frames)

    @property
    def shape(self) -> tuple[int, int]:
        """(height, width) shared by every frame."""
        return self.frames[0].height, self.frames[0].width

    def as_array(self) -> np.ndarray:
        """Stack the frames into a ``(n, height, width)`` uint16 array."""
        return np.stack([f.pixels for f in self.frames])
