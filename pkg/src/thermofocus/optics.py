"""Closed-form infrared optics: Wien peak, Airy disc, thin lens, defocus, DOF, dispersion.

Lengths are in meters unless a name says otherwise (``*_mm``, ``*_um``,
``*_nm``). :class:`CameraSpec` keeps the datasheet units of the imager.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, NoRealImageError

WIEN_B = 2.897771955e-3  # m*K, CODATA
KELVIN_OFFSET = 273.15
AIRY_FACTOR = 2.44


@dataclass(frozen=True)
class CameraSpec:
    """Uncooled LWIR imager with a fixed-aperture germanium lens."""

    focal_mm: float = 15.0
    f_number: float = 0.95
    ifov_mrad: float = 1.7
    width_px: int = 160
    height_px: int = 120
    netd_mk: float = 100.0
    band_low_um: float = 8.0
    band_high_um: float = 14.0
    closest_focus_mm: float = 100.0

    def __post_init__(self):
        for name in ("focal_mm", "f_number", "ifov_mrad", "width_px", "height_px",
                     "netd_mk", "band_low_um", "band_high_um", "closest_focus_mm"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.band_low_um >= self.band_high_um:
            raise DomainError("band_low_um must be below band_high_um")
        if self.closest_focus_mm <= self.focal_mm:
            raise DomainError("closest_focus_mm must exceed the focal length")

    @property
    def focal_m(self) -> float:
        return self.focal_mm * 1e-3

    @property
    def aperture_m(self) -> float:
        """Entrance pupil diameter f / N."""
        return self.focal_m / self.f_number


@dataclass(frozen=True)
class DispersionModel:
    """Two-term Cauchy index ``n(lambda) = a + b / lambda_um**2``."""

    a: float = 4.0
    b_um2: float = 1.0

    def __post_init__(self):
        if not self.a > 1:
            raise DomainError("Cauchy base index a must exceed 1")
        if not self.b_um2 >= 0:
            raise DomainError("Cauchy coefficient b_um2 must be non-negative")

    def index(self, wavelength_m: float) -> float:
        if not wavelength_m > 0:
            raise DomainError("wavelength must be positive")
        lam_um = wavelength_m * 1e6
        return self.a + self.b_um2 / lam_um ** 2


class DepthOfField(NamedTuple):
    near: float
    far: float  # math.inf beyond the hyperfocal distance
    hyperfocal: float


def celsius_to_kelvin(temp_c: float) -> float:
    temp_k = temp_c + KELVIN_OFFSET
    if not temp_k > 0:
        raise DomainError(f"{temp_c} degC is at or below absolute zero")
    return temp_k


def wien_peak_wavelength(temp_k: float) -> float:
    """Blackbody peak emission wavelength in meters."""
    if not temp_k > 0:
        raise DomainError(f"temperature must be positive kelvin, got {temp_k}")
    return WIEN_B / temp_k


def wien_span(temp1_c: float, temp2_c: float) -> float:
    """Distance in nanometers between the Wien peaks of two Celsius temperatures."""
    lam1 = wien_peak_wavelength(celsius_to_kelvin(temp1_c))
    lam2 = wien_peak_wavelength(celsius_to_kelvin(temp2_c))
    return abs(lam1 - lam2) * 1e9


def airy_diameter(wavelength_m: float, image_dist_m: float, aperture_diam_m: float) -> float:
    """Airy disc diameter ``2.44 * lambda * d / D``."""
    if wavelength_m < 0:
        raise DomainError("wavelength must be non-negative")
    if not image_dist_m > 0 or not aperture_diam_m > 0:
        raise DomainError("image distance and aperture diameter must be positive")
    return AIRY_FACTOR * wavelength_m * image_dist_m / aperture_diam_m


def pixel_pitch(spec: CameraSpec) -> float:
    """Detector pitch in millimeters (IFOV times focal length)."""
    return spec.ifov_mrad * 1e-3 * spec.focal_mm


def thin_lens_image_distance(focal_m: float, object_dist_m: float) -> float:
    if not focal_m > 0:
        raise DomainError("focal length must be positive")
    if math.isinf(object_dist_m) and object_dist_m > 0:
        return focal_m
    if not object_dist_m > focal_m:
        raise NoRealImageError(
            f"object at {object_dist_m} m is inside the focal length {focal_m} m"
        )
    return 1.0 / (1.0 / focal_m - 1.0 / object_dist_m)


def defocus_blur_diameter(spec: CameraSpec, sensor_dist_m: float, object_dist_m: float) -> float:
    """Geometric blur-circle diameter on a sensor placed at ``sensor_dist_m``."""
    if sensor_dist_m < spec.focal_m:
        raise DomainError("sensor cannot sit inside the focal length")
    d_star = thin_lens_image_distance(spec.focal_m, object_dist_m)
    return spec.aperture_m * abs(sensor_dist_m - d_star) / d_star


def hyperfocal_distance(spec: CameraSpec, coc_m: float) -> float:
    if not coc_m > 0:
        raise DomainError("circle of confusion must be positive")
    f = spec.focal_m
    return f * f / (spec.f_number * coc_m) + f


def depth_of_field(spec: CameraSpec, coc_m: float, object_dist_m: float) -> DepthOfField:
    f = spec.focal_m
    if not object_dist_m > f:
        raise NoRealImageError("object must lie beyond the focal length")
    H = hyperfocal_distance(spec, coc_m)
    s = object_dist_m
    if math.isinf(s):
        return DepthOfField(H - f, math.inf, H)
    near = s * (H - f) / (H + s - 2 * f)
    far = s * (H - f) / (H - s) if s < H else math.inf
    return DepthOfField(near, far, H)


def chromatic_focal_shift(
    model: DispersionModel, focal_ref_m: float, wavelength_ref_m: float, wavelength_m: float
) -> float:
    """Focal length at ``wavelength_m`` given the focal length at a reference wavelength.

    Uses the lensmaker scaling f ~ 1 / (n - 1).
    """
    n_ref = model.index(wavelength_ref_m)
    n = model.index(wavelength_m)
    if n <= 1 or n_ref <= 1:
        raise DomainError("refractive index must exceed 1")
    return focal_ref_m * (n_ref - 1.0) / (n - 1.0)
