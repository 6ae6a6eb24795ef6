"""scikit-learn compatible wrappers around the SML focus measure.

Frames go in as ``X`` with shape ``(n_frames, height, width)``; lens
positions, where needed, go in as ``y``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .frames import ThermalFrame, normalize_frame
from .measures import (
    WHOLE_FRAME,
    FocusCurve,
    SmlParams,
    best_focus,
    curve_stats,
    sml_global,
    sml_map,
)
from .validation import check_frame_array, check_positions


def _prepare(frame: np.ndarray, normalize: bool):
    f = ThermalFrame.from_array(frame)
    return normalize_frame(f) if normalize else f


class SumModifiedLaplacian(TransformerMixin, BaseEstimator):
    """Map each frame to its whole-frame SML, giving an ``(n_frames, 1)`` feature.

    Parameters
    ----------
    step : int, default=1
        Spacing of the second differences.
    threshold : float, default=0.0
        Discard ML terms below this value.
    normalize : bool, default=True
        Stretch each frame to the full 16-bit range before measuring.
    """

    def __init__(self, step=1, threshold=0.0, normalize=True):
        self.step = step
        self.threshold = threshold
        self.normalize = normalize

    def _params(self):
        return SmlParams(step=self.step, threshold_t=self.threshold)

    def fit(self, X, y=None):
        params = self._params()
        X = check_frame_array(X, min_size=2 * params.step + 1)
        self.params_ = params
        self.frame_shape_ = X.shape[1:]
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        X = check_frame_array(X, min_size=2 * self.params_.step + 1)
        return np.array(
            [[sml_global(_prepare(f, self.normalize), self.params_)] for f in X]
        )


class SMLMap(TransformerMixin, BaseEstimator):
    """Per-pixel windowed SML; undefined border pixels are ``nan``."""

    def __init__(self, step=1, threshold=0.0, window=1, normalize=False):
        self.step = step
        self.threshold = threshold
        self.window = window
        self.normalize = normalize

    def fit(self, X, y=None):
        if self.window is WHOLE_FRAME:
            raise ValueError("SMLMap needs an integer window; use SumModifiedLaplacian instead")
        params = SmlParams(self.step, self.threshold, self.window)
        check_frame_array(X, min_size=2 * (params.step + params.window_w) + 1)
        self.params_ = params
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        X = check_frame_array(X)
        return np.stack([sml_map(_prepare(f, self.normalize), self.params_) for f in X])


class BestFocusSelector(BaseEstimator):
    """Pick the sharpest frame of a focus sweep.

    ``fit(X, y)`` takes the sweep frames and their lens positions (defaults
    to 1..n) and stores the focus curve and its statistics. ``predict``
    returns the best-focus position of every sweep passed to it.

    Attributes
    ----------
    curve_ : FocusCurve
    stats_ : CurveStats
    best_index_ : int
        0-based index of the sharpest frame.
    best_position_ : float
    """

    def __init__(self, step=1, threshold=0.0, normalize=True):
        self.step = step
        self.threshold = threshold
        self.normalize = normalize

    def _curve(self, X, y):
        sml = SumModifiedLaplacian(self.step, self.threshold, self.normalize).fit(X)
        values = sml.transform(X)[:, 0]
        positions = check_positions(y, values.shape[0])
        return FocusCurve(positions, values)

    def fit(self, X, y=None):
        self.curve_ = self._curve(X, y)
        self.stats_ = curve_stats(self.curve_)
        self.best_index_, self.best_position_ = best_focus(self.curve_)
        return self

    def predict(self, X, y=None):
        """Best-focus position for the sweep ``X`` (positions ``y``)."""
        check_is_fitted(self, "curve_")
        return best_focus(self._curve(X, y)).position_mm

