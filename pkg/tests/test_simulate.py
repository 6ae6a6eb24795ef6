import math

import numpy as np
import pytest

from oracles import argmin_scan
from thermofocus.errors import DomainError
from thermofocus.measures import best_focus, curve_stats, sml_global
from thermofocus.frames import normalize_frame
from thermofocus.optics import CameraSpec, defocus_blur_diameter, pixel_pitch, thin_lens_image_distance
from thermofocus.simulate import (
    ExperimentSpec,
    SceneObject,
    SceneSpec,
    SweepSpec,
    blur_sigmas,
    default_scene,
    gaussian_blur,
    gaussian_kernel1d,
    generate_experiment,
    generate_stack,
    ground_truth_focus,
    radiance_value,
    render_frame,
)

CAM = CameraSpec()
SWEEP = SweepSpec()


def test_radiance():
    assert radiance_value(20) == pytest.approx(293.15 ** 4 * 1e-9, rel=1e-12)
    assert radiance_value(20) == pytest.approx(7.385, abs=1e-3)
    assert radiance_value(80) > radiance_value(40)
    assert radiance_value(-273.15 + 1e-6) < 1e-30
    with pytest.raises(DomainError):
        radiance_value(-274)


def test_kernel_unit_sum_and_truncation():
    assert gaussian_kernel1d(0).tolist() == [1.0]
    k = gaussian_kernel1d(2.0)
    assert k.size == 2 * 6 + 1
    assert k.sum() == pytest.approx(1.0, rel=1e-15)
    assert np.allclose(k, k[::-1])


def test_blur_keeps_flat_image_flat():
    img = np.full((20, 30), 7.5)
    assert np.allclose(gaussian_blur(img, 3.0), 7.5)


def test_blur_conserves_interior_energy():
    img = np.zeros((61, 61))
    img[30, 30] = 1.0
    assert gaussian_blur(img, 2.5).sum() == pytest.approx(1.0, rel=1e-12)


def test_empty_scene_is_uniform():
    f = render_frame(SceneSpec(), CAM, SWEEP, 10)
    assert np.unique(f.pixels).size == 1


def test_ambient_object_invisible():
    empty = render_frame(SceneSpec(), CAM, SWEEP, 10, gain_radiance=20.0)
    ghost = SceneSpec(objects=(SceneObject(temp_c=20.0, texture_amp=0.0),))
    assert render_frame(ghost, CAM, SWEEP, 10, gain_radiance=20.0) == empty


def test_position_index_range():
    with pytest.raises(IndexError):
        render_frame(default_scene(), CAM, SWEEP, 0)
    with pytest.raises(IndexError):
        render_frame(default_scene(), CAM, SWEEP, 97)


def test_focused_frame_sharper_than_defocused():
    scene = default_scene(40.0)
    p = ground_truth_focus(CAM, SWEEP, 500.0)
    sharp = sml_global(normalize_frame(render_frame(scene, CAM, SWEEP, p)))
    soft = sml_global(normalize_frame(render_frame(scene, CAM, SWEEP, p + 20)))
    assert sharp > soft


def test_stack_shape_and_metadata():
    s = generate_stack(default_scene(55.0), CAM, SweepSpec(n_positions=2))
    assert len(s) == 2
    assert s.positions_mm == (1.0, 2.0)
    assert s.object_temp_c == 55.0 and s.ambient_c == 20.0


def test_stack_determinism():
    sweep = SweepSpec(n_positions=5, noise=True, rng_seed=7)
    a = generate_stack(default_scene(), CAM, sweep)
    b = generate_stack(default_scene(), CAM, sweep)
    assert all(x.pixels.tobytes() == y.pixels.tobytes() for x, y in zip(a.frames, b.frames))
    c = generate_stack(default_scene(), CAM, SweepSpec(n_positions=5, noise=True, rng_seed=8))
    assert any(x != y for x, y in zip(a.frames, c.frames))


def test_noise_off_by_default():
    quiet = generate_stack(default_scene(), CAM, SweepSpec(n_positions=3))
    seeded = generate_stack(default_scene(), CAM, SweepSpec(n_positions=3, rng_seed=99))
    assert quiet.frames == seeded.frames


def test_default_experiment_size(default_experiment):
    assert len(default_experiment) == 8
    assert sum(len(s) for s in default_experiment) == 768
    assert all(s.shape == (120, 160) for s in default_experiment)
    assert [s.object_temp_c for s in default_experiment] == pytest.approx(np.linspace(40, 80, 8))


def test_single_temperature_experiment():
    spec = ExperimentSpec(temps_c=[40], sweep=SweepSpec(n_positions=3))
    assert len(generate_experiment(spec)) == 1


def test_experiment_rejects_cold_objects():
    with pytest.raises(ValueError):
        ExperimentSpec(temps_c=[15])


# -- ground truth oracle

def test_ground_truth_endpoints():
    assert ground_truth_focus(CAM, SWEEP, 100.0) == 96
    assert ground_truth_focus(CAM, SWEEP, math.inf) == 1
    with pytest.raises(DomainError):
        ground_truth_focus(CAM, SWEEP, 90.0)


@pytest.mark.parametrize("distance", [150.0, 333.0, 500.0, 1234.5, 8000.0])
def test_ground_truth_matches_scan(distance):
    d_star = thin_lens_image_distance(15.0, distance)
    sensor = [15.0 + (p - 1) * (100 / 85 * 15 - 15) / 95 for p in range(1, 97)]
    expected = argmin_scan([abs(s - d_star) for s in sensor]) + 1
    assert ground_truth_focus(CAM, SWEEP, distance) == expected


def test_sensor_map_endpoints():
    assert SWEEP.sensor_dist_mm(CAM, 1) == 15.0
    assert SWEEP.sensor_dist_mm(CAM, 96) == pytest.approx(17.647, abs=1e-3)
    step_um = (SWEEP.sensor_dist_mm(CAM, 2) - SWEEP.sensor_dist_mm(CAM, 1)) * 1e3
    assert step_um == pytest.approx(27.9, abs=0.05)


def test_defocus_sigma_mirror():
    obj = default_scene().objects[0]
    scene = default_scene()
    p = ground_truth_focus(CAM, SWEEP, obj.distance_mm)
    d_star = thin_lens_image_distance(CAM.focal_m, obj.distance_mm * 1e-3)
    pitch_m = pixel_pitch(CAM) * 1e-3
    for k in (1, 5, 12):
        sensor = SWEEP.sensor_dist_mm(CAM, p + k) * 1e-3
        mirrored = 2 * d_star - sensor
        sigma = blur_sigmas(obj, scene, CAM, SWEEP, p + k)[0]
        assert sigma == pytest.approx(defocus_blur_diameter(CAM, sensor, obj.distance_mm * 1e-3) / (2 * pitch_m))
        assert sigma == pytest.approx(
            defocus_blur_diameter(CAM, mirrored, obj.distance_mm * 1e-3) / (2 * pitch_m), rel=1e-9
        )


# -- behaviour of the default experiment

def test_40c_best_focus_near_truth(default_curves):
    truth = ground_truth_focus(CAM, SWEEP, 500.0)
    assert abs(best_focus(default_curves[0]).index + 1 - truth) <= 1


def test_peak_hotter_is_lower(default_curves):
    assert curve_stats(default_curves[0]).peak_value > curve_stats(default_curves[-1]).peak_value


def test_curves_are_unimodal(default_curves):
    for c in default_curves:
        v = np.asarray(c.values)
        k = int(np.argmax(v))
        local_max = [i for i in range(1, len(v) - 1) if v[i] >= v[i - 1] and v[i] >= v[i + 1] and i != k]
        ends = [i for i in (0, len(v) - 1) if i != k]
        assert all(v[i] <= 0.8 * v[k] for i in local_max + ends), c.label


def test_hotter_curves_are_wider(default_curves):
    widths = [curve_stats(c).fwhm_mm for c in default_curves]
    assert all(a < b for a, b in zip(widths, widths[1:]))
