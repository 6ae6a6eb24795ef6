"""Input checks shared by the estimator wrappers."""

from __future__ import annotations

import numpy as np

from .errors import FrameSizeError, PixelRangeError, StackError
from .frames import MAX_COUNT, FocusStack, ThermalFrame


def check_frame_array(X, min_size: int = 1) -> np.ndarray:
    """Coerce frames to an int64 array of shape ``(n_frames, height, width)``.

    Accepts a :class:`FocusStack`, a sequence of :class:`ThermalFrame`, a
    single 2-D image or a 3-D array. Values must be integral counts in
    [0, 65535].
    """
    if isinstance(X, FocusStack):
        return X.as_array().astype(np.int64)
    if isinstance(X, ThermalFrame):
        X = [X]
    if isinstance(X, (list, tuple)) and X and isinstance(X[0], ThermalFrame):
        shapes = {f.pixels.shape for f in X}
        if len(shapes) != 1:
            raise FrameSizeError(f"frames have differing shapes {sorted(shapes)}")
        return np.stack([f.pixels for f in X]).astype(np.int64)
    arr = np.asarray(X)
    if arr.ndim == 2:
        arr = arr[np.newaxis]
    if arr.ndim != 3:
        raise FrameSizeError(f"expected (n_frames, height, width), got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise FrameSizeError("no frames given")
    if arr.shape[1] < min_size or arr.shape[2] < min_size:
        raise FrameSizeError(
            f"frames of {arr.shape[2]}x{arr.shape[1]} are smaller than {min_size}x{min_size}"
        )
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.isfinite(arr)) or not np.all(arr == np.round(arr)):
            raise PixelRangeError("pixel values must be integral counts")
    if arr.min() < 0 or arr.max() > MAX_COUNT:
        raise PixelRangeError(f"pixel values must lie in [0, {MAX_COUNT}]")
    return arr.astype(np.int64)


def check_positions(positions, n_frames: int) -> np.ndarray:
    if positions is None:
        return np.arange(1, n_frames + 1, dtype=float)
    pos = np.asarray(positions, dtype=float).ravel()
    if pos.shape[0] != n_frames:
        raise StackError(f"{pos.shape[0]} positions for {n_frames} frames")
    if np.any(np.diff(pos) <= 0):
        raise StackError("positions must be strictly increasing")
    return pos
