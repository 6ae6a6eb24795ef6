"""Exit criteria for the package; each test prints one PASS/FAIL line."""

import filecmp
import time

import numpy as np

from oracles import checkerboard, sml_brute
from thermofocus.cli import main
from thermofocus.frames import ThermalFrame, frame_from_values
from thermofocus.io import (
    ManifestEntry,
    StackManifest,
    read_curve_csv,
    read_manifest,
    read_pgm,
    write_curve_csv,
    write_manifest,
    write_pgm,
)
from thermofocus.measures import FocusCurve, SmlParams, best_focus, curve_stats, focus_curve, modified_laplacian, sml_global
from thermofocus.optics import (
    CameraSpec,
    DispersionModel,
    airy_diameter,
    chromatic_focal_shift,
    hyperfocal_distance,
    pixel_pitch,
    thin_lens_image_distance,
)
from thermofocus.simulate import ExperimentSpec, SweepSpec, gaussian_blur, generate_experiment, ground_truth_focus


def report(n, ok, detail=""):
    print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def _kv(out):
    return dict(line.split("=", 1) for line in out.strip().splitlines())


def test_criterion_1_wien_span(capsys):
    code = main(["optics", "span", "--t1-c", "40", "--t2-c", "80"])
    span = float(_kv(capsys.readouterr().out)["span_nm"])
    report(1, code == 0 and abs(span - 1048) <= 1, f"span_nm={span}")


def test_criterion_2_sml_oracle_equivalence():
    rng = np.random.default_rng(20240601)
    # low-contrast half so T=50 actually discards terms, full-range half for overflow safety
    frames = np.concatenate([rng.integers(0, 256, size=(500, 16, 16)), rng.integers(0, 65536, size=(500, 16, 16))])
    t0 = time.perf_counter()
    mismatches = 0
    for img in frames:
        f = ThermalFrame.from_array(img)
        rows = img.tolist()
        for step in (1, 2):
            for t in (0, 50):
                if sml_global(f, SmlParams(step, t)) != sml_brute(rows, step, t):
                    mismatches += 1
    elapsed = time.perf_counter() - t0
    report(2, mismatches == 0 and elapsed < 5.0, f"4000 comparisons, {mismatches} mismatches, {elapsed:.2f}s")


def test_criterion_3_hand_computed():
    vals = [0] * 25
    vals[12] = 100
    f = frame_from_values(5, 5, vals)
    got = (modified_laplacian(f, 2, 2, 1), sml_global(f, SmlParams(1, 0)), sml_global(f, SmlParams(1, 150)))
    report(3, got == (400, 800, 400), f"ML, SML(T=0), SML(T=150) = {got}")


def test_criterion_4_blur_monotonicity():
    board = np.array(checkerboard(160, 120, 8))
    t0 = time.perf_counter()
    vals = [sml_global(ThermalFrame.from_array(np.rint(gaussian_blur(board, s)).astype(int))) for s in (0, 1, 2, 4)]
    elapsed = time.perf_counter() - t0
    ok = all(a > b for a, b in zip(vals, vals[1:])) and elapsed < 1.0
    report(4, ok, f"SML at sigma 0,1,2,4 = {vals}, {elapsed:.3f}s")


def test_criterion_5_temperature_flattens_peaks():
    t0 = time.perf_counter()
    stacks = generate_experiment(ExperimentSpec())
    curves = [focus_curve(s) for s in stacks]
    elapsed = time.perf_counter() - t0
    n_frames = sum(len(s) for s in stacks)
    peaks = [curve_stats(c).peak_value for c in curves]
    idx = [best_focus(c).index for c in curves]
    decreasing = all(a > b for a, b in zip(peaks, peaks[1:]))
    stable = max(idx) - min(idx) <= 2
    ok = n_frames == 768 and decreasing and stable and elapsed < 60
    report(5, ok, f"{n_frames} frames, peaks={[round(p) for p in peaks]}, best={idx}, {elapsed:.1f}s")


def test_criterion_6_glare_off_control():
    sweep = SweepSpec(glare_sigma_per_k=0.0, glare_floor_sigma=0.0)
    curves = [focus_curve(s) for s in generate_experiment(ExperimentSpec(sweep=sweep))]
    peaks = np.array([curve_stats(c).peak_value for c in curves])
    spread = (peaks.max() - peaks.min()) / peaks.max()
    report(6, spread <= 0.05, f"relative peak spread {spread:.2e}")


def test_criterion_7_optics_oracles():
    cam = CameraSpec()
    checks = {
        "airy_um": abs(airy_diameter(10e-6, 0.015, 0.015 / 0.95) * 1e6 - 23.18) <= 0.01,
        "pitch_um": round(pixel_pitch(cam) * 1e3, 12) == 25.5,
        "thin_lens_mm": abs(thin_lens_image_distance(0.015, 0.100) * 1e3 - 17.647) <= 0.001,
        "hyperfocal_mm": abs(hyperfocal_distance(cam, 25.5e-6) * 1e3 - 9303) <= 1,
    }
    lam = np.arange(8.0, 14.0 + 1e-9, 0.5) * 1e-6
    f = [chromatic_focal_shift(DispersionModel(4.0, 1.0), 0.015, 8e-6, x) for x in lam]
    checks["shift_increasing"] = all(a < b for a, b in zip(f, f[1:]))
    report(7, all(checks.values()), str(checks))


def test_criterion_8_round_trips(tmp_path, capsys):
    rng = np.random.default_rng(7)
    pgm_ok = True
    for k in range(100):
        h, w = rng.integers(1, 64, size=2)
        f = ThermalFrame.from_array(rng.integers(0, 65536, size=(h, w)))
        write_pgm(f, tmp_path / "f.pgm")
        g = read_pgm(tmp_path / "f.pgm")
        pgm_ok &= g.pixels.tobytes() == f.pixels.tobytes() and g.pixels.shape == f.pixels.shape

    m = StackManifest("40C", 20.0, 40.0, 500.0, [ManifestEntry(k, k + 0.5, f"x/{k}.pgm") for k in range(1, 97)])
    write_manifest(m, tmp_path / "m.json")
    manifest_ok = read_manifest(tmp_path / "m.json") == m

    c = FocusCurve(np.arange(1, 97), rng.uniform(0, 1e8, 96))
    write_curve_csv(c, tmp_path / "c.csv")
    back = read_curve_csv(tmp_path / "c.csv")
    csv_ok = back.positions_mm == c.positions_mm and all(
        abs(a - b) <= 1e-9 * abs(b) for a, b in zip(back.values, c.values)
    )

    runs = []
    for name in ("a", "b"):
        assert main(["gen", "--seed", "3", "--out", str(tmp_path / name)]) == 0
        runs.append(tmp_path / name)
    capsys.readouterr()
    files_a = sorted(p.relative_to(runs[0]) for p in runs[0].rglob("*") if p.is_file())
    files_b = sorted(p.relative_to(runs[1]) for p in runs[1].rglob("*") if p.is_file())
    gen_ok = files_a == files_b and all(filecmp.cmp(runs[0] / p, runs[1] / p, shallow=False) for p in files_a)
    counts = (len([p for p in files_a if p.suffix == ".pgm"]), len([p for p in files_a if p.suffix == ".json"]))
    gen_ok &= counts == (768, 8)
    report(8, pgm_ok and manifest_ok and csv_ok and gen_ok,
           f"pgm={pgm_ok} manifest={manifest_ok} csv={csv_ok} gen={gen_ok} files={counts}")


def test_criterion_9_end_to_end_cli(tmp_path, capsys):
    out = tmp_path / "gen"
    assert main(["gen", "--out", str(out)]) == 0
    manifest = next(p for p in out.glob("*.json") if read_manifest(p).object_temp_c == 40.0)
    assert main(["measure", "--stack", str(manifest), "--out", str(tmp_path / "40C.csv")]) == 0
    capsys.readouterr()
    assert main(["best", "--curve", str(tmp_path / "40C.csv")]) == 0
    index, position = capsys.readouterr().out.split()
    truth = ground_truth_focus(CameraSpec(), SweepSpec(), 500.0)
    report(9, abs(int(index) - truth) <= 1, f"best={index} ({position} mm), ground truth={truth}")
