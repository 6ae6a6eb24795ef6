"""Modified Laplacian / sum-modified Laplacian focus measures and focus curves."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BoundsError, EmptyCurveError, FrameSizeError, StackError
from .frames import FocusStack, ThermalFrame, normalize_frame

WHOLE_FRAME = None
"""Window value meaning "sum over every valid pixel of the frame"."""

PEAK_EPS = 1e-12


@dataclass(frozen=True)
class SmlParams:
    """Knobs of the sum-modified Laplacian.

    step
        Pixel spacing of the second differences (>= 1).
    threshold_t
        ML terms below this value are discarded from the sum (>= 0).
    window_w
        Half-width of the summation window, or ``WHOLE_FRAME``.
    """

    step: int = 1
    threshold_t: float = 0.0
    window_w: int | None = WHOLE_FRAME

    def __post_init__(self):
        if int(self.step) != self.step or self.step < 1:
            raise ValueError(f"step must be an integer >= 1, got {self.step!r}")
        if not (self.threshold_t >= 0) or math.isinf(self.threshold_t):
            raise ValueError(f"threshold_t must be a finite value >= 0, got {self.threshold_t!r}")
        if self.window_w is not None and (int(self.window_w) != self.window_w or self.window_w < 0):
            raise ValueError(f"window_w must be an integer >= 0 or WHOLE_FRAME, got {self.window_w!r}")


@dataclass(frozen=True)
class FocusCurve:
    positions_mm: tuple[float, ...]
    values: tuple[float, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "positions_mm", tuple(float(p) for p in self.positions_mm))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.positions_mm) != len(self.values):
            raise StackError(
                f"{len(self.positions_mm)} positions but {len(self.values)} values"
            )
        if any(b <= a for a, b in zip(self.positions_mm, self.positions_mm[1:])):
            raise StackError("curve positions must be strictly increasing")
        if any(not (v >= 0) for v in self.values):
            raise StackError("focus-measure values must be non-negative")

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class CurveStats:
    peak_value: float
    peak_position_mm: float
    peak_index: int
    median_value: float
    peak_to_median: float
    fwhm_mm: float | None


class BestFocus(NamedTuple):
    index: int
    position_mm: float


def _as_counts(frame) -> np.ndarray:
    if isinstance(frame, ThermalFrame):
        return frame.pixels.astype(np.int64)
    return np.asarray(frame, dtype=np.int64)


def ml_grid(frame, step: int = 1) -> np.ndarray:
    """Modified Laplacian at every valid site, as an int64 array.

    Entry ``[r, c]`` of the result is the ML of pixel ``(x, y) = (c + step,
    r + step)``; pixels closer than ``step`` to the border have no value.
    """
    img = _as_counts(frame)
    h, w = img.shape
    if h < 2 * step + 1 or w < 2 * step + 1:
        raise FrameSizeError(
            f"a {w}x{h} frame has no interior pixels for step={step}"
        )
    s = step
    c = img[s:h - s, s:w - s]
    dx = 2 * c - img[s:h - s, 0:w - 2 * s] - img[s:h - s, 2 * s:w]
    dy = 2 * c - img[0:h - 2 * s, s:w - s] - img[2 * s:h, s:w - s]
    return np.abs(dx) + np.abs(dy)


def modified_laplacian(frame: ThermalFrame, x: int, y: int, step: int = 1) -> float:
    """|2I(x,y) - I(x-s,y) - I(x+s,y)| + |2I(x,y) - I(x,y-s) - I(x,y+s)|."""
    if step < 1:
        raise ValueError("step must be >= 1")
    if not (step <= x <= frame.width - 1 - step and step <= y <= frame.height - 1 - step):
        raise BoundsError(
            f"({x}, {y}) lacks neighbours at step {step} in a {frame.width}x{frame.height} frame"
        )
    p = frame.pixels
    i = int(p[y, x])
    gx = abs(2 * i - int(p[y, x - step]) - int(p[y, x + step]))
    gy = abs(2 * i - int(p[y - step, x]) - int(p[y + step, x]))
    return float(gx + gy)


def _thresholded(ml: np.ndarray, threshold_t: float) -> np.ndarray:
    return np.where(ml >= threshold_t, ml, 0)


def sml_global_exact(frame, params: SmlParams = SmlParams()) -> int:
    """Whole-frame thresholded ML sum as an exact Python integer."""
    ml = ml_grid(frame, params.step)
    return int(_thresholded(ml, params.threshold_t).sum(dtype=np.int64))


def sml_global(frame, params: SmlParams = SmlParams()) -> float:
    """Sum of ML over every valid pixel, keeping only terms ``>= threshold_t``.

    The window setting of ``params`` is ignored; this is the one-scalar-per-image
    form used for focus curves.
    """
    return float(sml_global_exact(frame, params))


def sml_map(frame, params: SmlParams) -> np.ndarray:
    """Windowed SML at every pixel.

    Returns a float array shaped like the frame. Pixels whose
    ``(2W+1) x (2W+1)`` window does not fit inside the valid ML region hold
    ``nan``.
    """
    if params.window_w is WHOLE_FRAME:
        raise ValueError("sml_map needs a finite window_w; use sml_global for the whole frame")
    img = _as_counts(frame)
    h, w = img.shape
    s, W = params.step, int(params.window_w)
    if h < 2 * (s + W) + 1 or w < 2 * (s + W) + 1:
        raise FrameSizeError(
            f"a {w}x{h} frame is too small for step={s}, window_w={W}"
        )
    ml = _thresholded(ml_grid(img, s), params.threshold_t)
    # summed-area table with a zero row/column in front
    sat = np.zeros((ml.shape[0] + 1, ml.shape[1] + 1), dtype=np.int64)
    sat[1:, 1:] = ml.cumsum(0).cumsum(1)
    k = 2 * W + 1
    box = sat[k:, k:] - sat[:-k, k:] - sat[k:, :-k] + sat[:-k, :-k]
    out = np.full((h, w), np.nan)
    off = s + W
    out[off:h - off, off:w - off] = box
    return out


def focus_curve(stack: FocusStack, params: SmlParams = SmlParams(), max_workers: int | None = None) -> FocusCurve:
    """SML of every normalized frame of ``stack``, in stack order."""

    def measure(frame):
        return sml_global(normalize_frame(frame), params)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            values = list(pool.map(measure, stack.frames))
    else:
        values = [measure(f) for f in stack.frames]
    return FocusCurve(stack.positions_mm, values, stack.label)


def best_focus(curve: FocusCurve) -> BestFocus:
    """Index and position of the curve maximum; ties go to the smaller position."""
    if len(curve) == 0:
        raise EmptyCurveError("cannot locate the peak of an empty curve")
    k = int(np.argmax(curve.values))  # first occurrence, positions are increasing
    return BestFocus(k, curve.positions_mm[k])


def _half_crossing(pos: Sequence[float], vals: Sequence[float], k: int, half: float, direction: int):
    i = k
    while 0 <= i + direction < len(vals):
        j = i + direction
        if vals[j] < half:
            # interpolate between j (below) and i (at or above)
            t = (half - vals[j]) / (vals[i] - vals[j])
            return pos[j] + t * (pos[i] - pos[j])
        i = j
    return None


def curve_stats(curve: FocusCurve) -> CurveStats:
    """Peak, median, peak-to-median ratio and interpolated FWHM of a curve.

    ``fwhm_mm`` is None unless the half-peak level is crossed on both sides
    of the peak.
    """
    k, pos = best_focus(curve)
    vals = curve.values
    peak = vals[k]
    median = float(np.median(vals))
    half = peak / 2.0
    left = _half_crossing(curve.positions_mm, vals, k, half, -1)
    right = _half_crossing(curve.positions_mm, vals, k, half, +1)
    fwhm = right - left if left is not None and right is not None else None
    return CurveStats(
        peak_value=peak,
        peak_position_mm=pos,
        peak_index=k,
        median_value=median,
        peak_to_median=peak / max(median, PEAK_EPS),
        fwhm_mm=fwhm,
    )
