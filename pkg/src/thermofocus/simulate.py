"""Synthetic thermal focus sweeps of a heated object in front of an ambient background.

Each object is rendered as its own layer of excess radiance over the
background, blurred by a Gaussian whose width combines lens defocus, the
diffraction floor and a temperature-dependent glare term, then composited
and quantized with a gain shared by every frame of an experiment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.ndimage import convolve1d

from .errors import DomainError, FrameSizeError
from .frames import MAX_COUNT, FocusStack, ThermalFrame
from .optics import (
    CameraSpec,
    airy_diameter,
    celsius_to_kelvin,
    defocus_blur_diameter,
    pixel_pitch,
    thin_lens_image_distance,
)

DIFFRACTION_WAVELENGTH_M = 10e-6
TEXTURE_PERIOD_PX = 4
TEXTURE_DEPTH = 0.1
KERNEL_TRUNCATE = 3.0


@dataclass(frozen=True)
class SceneObject:
    """A flat, uniformly heated object with a checker texture on its face.

    ``size_px`` is a radius for disks and ``(half_width, half_height)`` for
    rectangles.
    """

    shape: str = "disk"
    center_px: tuple[float, float] = (80.0, 60.0)
    size_px: float | tuple[float, float] = 24.0
    temp_c: float = 40.0
    distance_mm: float = 500.0
    texture_amp: float = 1.0

    def __post_init__(self):
        if self.shape not in ("disk", "rect"):
            raise ValueError(f"unknown shape {self.shape!r}; expected 'disk' or 'rect'")
        sizes = (self.size_px,) if self.shape == "disk" else tuple(self.size_px)
        if len(sizes) != (1 if self.shape == "disk" else 2) or any(not s > 0 for s in sizes):
            raise ValueError(f"invalid size {self.size_px!r} for a {self.shape}")
        if not 0 <= self.texture_amp <= 1:
            raise ValueError("texture_amp must lie in [0, 1]")
        celsius_to_kelvin(self.temp_c)

    def mask(self, width: int, height: int) -> np.ndarray:
        """Boolean footprint, testing pixel centers."""
        yy, xx = np.mgrid[0:height, 0:width]
        cx, cy = self.center_px
        if self.shape == "disk":
            return (xx - cx) ** 2 + (yy - cy) ** 2 <= self.size_px ** 2
        hw, hh = self.size_px
        return (np.abs(xx - cx) <= hw) & (np.abs(yy - cy) <= hh)


@dataclass(frozen=True)
class SceneSpec:
    objects: tuple[SceneObject, ...] = ()
    ambient_c: float = 20.0
    width_px: int = 160
    height_px: int = 120

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        if self.width_px <= 0 or self.height_px <= 0:
            raise FrameSizeError("scene dimensions must be positive")
        celsius_to_kelvin(self.ambient_c)

    def with_temperature(self, temp_c: float) -> "SceneSpec":
        """Copy of the scene with every object set to ``temp_c``."""
        return replace(self, objects=tuple(replace(o, temp_c=temp_c) for o in self.objects))


def default_scene(temp_c: float = 40.0, distance_mm: float = 500.0) -> SceneSpec:
    """Single textured bulb-sized disk centred in a 160x120 frame."""
    return SceneSpec(objects=(SceneObject(temp_c=temp_c, distance_mm=distance_mm),))


@dataclass(frozen=True)
class SweepSpec:
    """Manual focus sweep: ring positions 1..n in 1 mm steps.

    Ring position ``p`` moves the sensor linearly from the focal length
    (infinity focus) at ``p = 1`` to the image distance of the closest
    focusing distance at ``p = n_positions``.
    """

    n_positions: int = 96
    glare_sigma_per_k: float = 0.05
    glare_floor_sigma: float = 0.3
    rng_seed: int = 0
    noise: bool = False

    def __post_init__(self):
        if self.n_positions < 2:
            raise ValueError("a sweep needs at least two positions")
        if self.glare_sigma_per_k < 0 or self.glare_floor_sigma < 0:
            raise ValueError("glare coefficients must be non-negative")

    @property
    def ring_positions_mm(self) -> tuple[float, ...]:
        return tuple(float(p) for p in range(1, self.n_positions + 1))

    def sensor_dist_mm(self, camera: CameraSpec, position_index: int | float) -> float:
        near = camera.focal_mm
        far = thin_lens_image_distance(camera.focal_mm, camera.closest_focus_mm)
        return near + (position_index - 1) * (far - near) / (self.n_positions - 1)

    def glare_sigma(self, temp_c: float, ambient_c: float) -> float:
        return self.glare_floor_sigma + self.glare_sigma_per_k * abs(temp_c - ambient_c)


@dataclass(frozen=True)
class ExperimentSpec:
    temps_c: tuple[float, ...] = tuple(np.linspace(40.0, 80.0, 8).tolist())
    scene: SceneSpec = field(default_factory=default_scene)
    sweep: SweepSpec = field(default_factory=SweepSpec)
    camera: CameraSpec = field(default_factory=CameraSpec)

    def __post_init__(self):
        object.__setattr__(self, "temps_c", tuple(float(t) for t in self.temps_c))
        if not self.temps_c:
            raise ValueError("an experiment needs at least one temperature")
        for t in self.temps_c:
            if not t > self.scene.ambient_c:
                raise ValueError(f"object temperature {t} degC is not above ambient")


def radiance_value(temp_c: float) -> float:
    """T**4 radiance proxy in arbitrary units (1e-9 K^-4)."""
    return celsius_to_kelvin(temp_c) ** 4 * 1e-9


def gaussian_kernel1d(sigma: float) -> np.ndarray:
    """Unit-sum Gaussian taps truncated at 3 sigma; sigma 0 gives the identity."""
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    radius = int(math.ceil(KERNEL_TRUNCATE * sigma))
    if radius == 0:
        return np.ones(1)
    x = np.arange(-radius, radius + 1, dtype=float)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def gaussian_blur(image, sigma: float) -> np.ndarray:
    """Separable Gaussian blur with edge replication at the borders."""
    img = np.asarray(image, dtype=float)
    k = gaussian_kernel1d(sigma)
    if k.size == 1:
        return img.copy()
    out = convolve1d(img, k, axis=0, mode="nearest")
    return convolve1d(out, k, axis=1, mode="nearest")


def checker(width: int, height: int, period: int = TEXTURE_PERIOD_PX) -> np.ndarray:
    """0/1 checkerboard with squares of ``period`` pixels, anchored at the origin."""
    yy, xx = np.mgrid[0:height, 0:width]
    return ((xx // period + yy // period) % 2).astype(float)


def object_layer(obj: SceneObject, ambient_c: float, width: int, height: int) -> np.ndarray:
    """Unblurred excess radiance of one object over the background."""
    excess = radiance_value(obj.temp_c) - radiance_value(ambient_c)
    tex = 1.0 + TEXTURE_DEPTH * obj.texture_amp * checker(width, height)
    return obj.mask(width, height) * excess * tex


def peak_radiance(scene: SceneSpec) -> float:
    """Brightest radiance any frame of ``scene`` can reach before blurring."""
    amb = radiance_value(scene.ambient_c)
    excess = [
        (radiance_value(o.temp_c) - amb) * (1.0 + TEXTURE_DEPTH * o.texture_amp)
        for o in scene.objects
    ]
    return amb + max([0.0, *excess])


def blur_sigmas(obj: SceneObject, scene: SceneSpec, camera: CameraSpec, sweep: SweepSpec,
                position_index: int) -> tuple[float, float, float]:
    """(defocus, glare, diffraction) Gaussian sigmas in pixels."""
    pitch_m = pixel_pitch(camera) * 1e-3
    sensor_m = sweep.sensor_dist_mm(camera, position_index) * 1e-3
    defocus = defocus_blur_diameter(camera, sensor_m, obj.distance_mm * 1e-3) / (2 * pitch_m)
    glare = sweep.glare_sigma(obj.temp_c, scene.ambient_c)
    diff = airy_diameter(DIFFRACTION_WAVELENGTH_M, sensor_m, camera.aperture_m) / (2 * pitch_m)
    return defocus, glare, diff


def total_sigma(obj, scene, camera, sweep, position_index) -> float:
    return math.hypot(*blur_sigmas(obj, scene, camera, sweep, position_index))


def _check_index(sweep: SweepSpec, position_index: int):
    if not 1 <= position_index <= sweep.n_positions:
        raise IndexError(
            f"position index {position_index} outside 1..{sweep.n_positions}"
        )


def _quantize(radiance: np.ndarray, gain_radiance: float) -> np.ndarray:
    counts = np.floor(radiance / gain_radiance * MAX_COUNT + 0.5)
    return np.clip(counts, 0, MAX_COUNT).astype(np.uint16)


def _noise(scene: SceneSpec, camera: CameraSpec, sweep: SweepSpec, position_index: int,
           gain_radiance: float) -> np.ndarray:
    # one NETD expressed in counts at the ambient operating point
    t_amb = celsius_to_kelvin(scene.ambient_c)
    amp = 4 * t_amb ** 3 * 1e-9 * camera.netd_mk * 1e-3 / gain_radiance * MAX_COUNT
    temp_key = int(round(max((o.temp_c for o in scene.objects), default=scene.ambient_c) * 1000))
    rng = np.random.default_rng([sweep.rng_seed, position_index, temp_key])
    return rng.uniform(-amp, amp, size=(scene.height_px, scene.width_px)) * gain_radiance / MAX_COUNT


def render_frame(scene: SceneSpec, camera: CameraSpec, sweep: SweepSpec, position_index: int,
                 gain_radiance: float | None = None, *, _layers=None) -> ThermalFrame:
    """Render the frame seen at ring position ``position_index`` (1-based).

    ``gain_radiance`` is the radiance mapped to full scale; by default the
    peak radiance of this scene. Pass one shared value to make frames of
    different scenes comparable.
    """
    _check_index(sweep, position_index)
    if gain_radiance is None:
        gain_radiance = peak_radiance(scene)
    if not gain_radiance > 0:
        raise DomainError("gain radiance must be positive")
    w, h = scene.width_px, scene.height_px
    layers = _layers if _layers is not None else [
        object_layer(o, scene.ambient_c, w, h) for o in scene.objects
    ]
    total = np.full((h, w), radiance_value(scene.ambient_c))
    for obj, layer in zip(scene.objects, layers):
        total += gaussian_blur(layer, total_sigma(obj, scene, camera, sweep, position_index))
    if sweep.noise:
        total += _noise(scene, camera, sweep, position_index, gain_radiance)
    return ThermalFrame(w, h, _quantize(total, gain_radiance))


def _stack_label(scene: SceneSpec) -> str:
    if not scene.objects:
        return "empty"
    return f"{scene.objects[0].temp_c:g}C"


def generate_stack(scene: SceneSpec, camera: CameraSpec = CameraSpec(), sweep: SweepSpec = SweepSpec(),
                   gain_radiance: float | None = None) -> FocusStack:
    """Render every ring position of the sweep, in order."""
    if gain_radiance is None:
        gain_radiance = peak_radiance(scene)
    layers = [object_layer(o, scene.ambient_c, scene.width_px, scene.height_px) for o in scene.objects]
    frames = [
        render_frame(scene, camera, sweep, p, gain_radiance, _layers=layers)
        for p in range(1, sweep.n_positions + 1)
    ]
    return FocusStack(
        frames,
        sweep.ring_positions_mm,
        ambient_c=scene.ambient_c,
        object_temp_c=scene.objects[0].temp_c if scene.objects else None,
        label=_stack_label(scene),
    )


def experiment_gain(spec: ExperimentSpec) -> float:
    return max(peak_radiance(spec.scene.with_temperature(t)) for t in spec.temps_c)


def generate_experiment(spec: ExperimentSpec = ExperimentSpec()) -> list[FocusStack]:
    """One focus stack per object temperature, all quantized with the same gain."""
    gain = experiment_gain(spec)
    return [
        generate_stack(spec.scene.with_temperature(t), spec.camera, spec.sweep, gain)
        for t in spec.temps_c
    ]


def ground_truth_focus(camera: CameraSpec, sweep: SweepSpec, object_distance_mm: float) -> int:
    """1-based ring index whose sensor distance is nearest the in-focus image distance."""
    if object_distance_mm < camera.closest_focus_mm:
        raise DomainError(
            f"object at {object_distance_mm} mm is closer than the closest focus "
            f"{camera.closest_focus_mm} mm"
        )
    d_star = thin_lens_image_distance(camera.focal_mm, object_distance_mm)
    errors = [abs(sweep.sensor_dist_mm(camera, p) - d_star) for p in range(1, sweep.n_positions + 1)]
    return int(np.argmin(errors)) + 1


def sweep_sigmas(scene: SceneSpec, camera: CameraSpec, sweep: SweepSpec,
                 positions: Sequence[int] | None = None) -> np.ndarray:
    """Total blur sigma of the first object at each ring position."""
    obj = scene.objects[0]
    positions = positions or range(1, sweep.n_positions + 1)
    return np.array([total_sigma(obj, scene, camera, sweep, p) for p in positions])
