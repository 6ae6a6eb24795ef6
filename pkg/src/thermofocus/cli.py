"""Command-line entry point: ``thermofocus <subcommand> ...``.

Exit status is 0 on success, 1 on usage errors and 2 on data or format
errors. Numeric results are printed as ``name=value`` lines.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import optics
from .errors import ThermofocusError
from .io import load_stack, read_curve_csv, render_report_svg, save_stack, write_curve_csv
from .measures import SmlParams, best_focus, curve_stats, focus_curve
from .simulate import ExperimentSpec, SweepSpec, default_scene, generate_experiment

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n\n{self.format_help()}")


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "inf"
    return f"{v:.6g}"


def _emit(**values):
    for name, v in values.items():
        print(f"{name}={_fmt(v) if isinstance(v, float) else v}")


def _temps(text: str) -> list[float]:
    try:
        temps = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None
    if not temps:
        raise argparse.ArgumentTypeError("at least one temperature is required")
    return temps


# ---------------------------------------------------------------- subcommands

def cmd_gen(args):
    if args.positions < 2:
        raise UsageError("--positions must be at least 2")
    scene = default_scene(distance_mm=args.object_distance_mm)
    sweep = SweepSpec(
        n_positions=args.positions,
        glare_sigma_per_k=args.glare_per_k,
        glare_floor_sigma=args.glare_floor,
        rng_seed=args.seed,
        noise=args.noise,
    )
    spec = ExperimentSpec(temps_c=args.temps, scene=scene, sweep=sweep)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for stack in generate_experiment(spec):
        path = save_stack(stack, out, args.object_distance_mm)
        log.info("wrote %s (%d frames)", path, len(stack))
        print(path)
    return EXIT_OK


def cmd_measure(args):
    stack = load_stack(args.stack)
    params = SmlParams(step=args.step, threshold_t=args.threshold)
    curve = focus_curve(stack, params)
    write_curve_csv(curve, args.out)
    return EXIT_OK


def cmd_best(args):
    curve = read_curve_csv(args.curve)
    index, position = best_focus(curve)
    print(f"{index + 1} {position:g}")
    return EXIT_OK


def cmd_stats(args):
    st = curve_stats(read_curve_csv(args.curve))
    _emit(
        peak_value=st.peak_value,
        peak_position_mm=st.peak_position_mm,
        peak_index=st.peak_index + 1,
        median_value=st.median_value,
        peak_to_median=st.peak_to_median,
        fwhm_mm=st.fwhm_mm if st.fwhm_mm is not None else "none",
    )
    return EXIT_OK


def cmd_report(args):
    curves = [read_curve_csv(p) for p in args.curves]
    render_report_svg(curves, args.out)
    return EXIT_OK


def cmd_optics(args):
    kind = args.optics_cmd
    if kind == "wien":
        if (args.temp_k is None) == (args.temp_c is None):
            raise UsageError("give exactly one of --temp-k or --temp-c")
        temp_k = args.temp_k if args.temp_k is not None else optics.celsius_to_kelvin(args.temp_c)
        _emit(peak_wavelength_um=optics.wien_peak_wavelength(temp_k) * 1e6)
    elif kind == "span":
        _emit(span_nm=optics.wien_span(args.t1_c, args.t2_c))
    elif kind == "airy":
        aperture = args.aperture_mm
        if aperture is None:
            aperture = args.focal_mm / args.f_number
        image_dist = args.image_dist_mm if args.image_dist_mm is not None else args.focal_mm
        d = optics.airy_diameter(args.wavelength_um * 1e-6, image_dist * 1e-3, aperture * 1e-3)
        _emit(airy_diameter_um=d * 1e6)
    elif kind == "pitch":
        spec = optics.CameraSpec(focal_mm=args.focal_mm, ifov_mrad=args.ifov_mrad)
        _emit(pitch_um=optics.pixel_pitch(spec) * 1e3)
    elif kind == "dof":
        spec = optics.CameraSpec(focal_mm=args.focal_mm, f_number=args.f_number,
                                 ifov_mrad=args.ifov_mrad)
        coc_um = args.coc_um if args.coc_um is not None else optics.pixel_pitch(spec) * 1e3
        dof = optics.depth_of_field(spec, coc_um * 1e-6, args.object_dist_mm * 1e-3)
        _emit(near_mm=dof.near * 1e3, far_mm=dof.far * 1e3, hyperfocal_mm=dof.hyperfocal * 1e3)
    elif kind == "shift":
        model = optics.DispersionModel(a=args.a, b_um2=args.b_um2)
        f = optics.chromatic_focal_shift(
            model, args.focal_ref_mm * 1e-3, args.wavelength_ref_um * 1e-6, args.wavelength_um * 1e-6
        )
        _emit(focal_mm=f * 1e3)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="thermofocus", description="SML focus measures, optics calculators and thermal focus-sweep simulation.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="simulate focus sweeps and write PGM frames + manifests")
    g.add_argument("--out", required=True, help="output directory")
    g.add_argument("--temps", type=_temps, default=list(ExperimentSpec.temps_c),
                   help="comma-separated object temperatures in degC (default: 8 values 40..80)")
    g.add_argument("--positions", type=int, default=96, help="lens ring positions (default 96)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--object-distance-mm", type=float, default=500.0)
    g.add_argument("--glare-per-k", type=float, default=0.05, help="glare sigma px per kelvin")
    g.add_argument("--glare-floor", type=float, default=0.3, help="glare sigma floor in px")
    g.add_argument("--noise", action="store_true", help="add seeded NETD-scale sensor noise")
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("measure", help="SML focus curve of a stack")
    m.add_argument("--stack", required=True, help="stack manifest (JSON)")
    m.add_argument("--step", type=int, default=1)
    m.add_argument("--threshold", type=float, default=0.0)
    m.add_argument("--out", required=True, help="output CSV")
    m.set_defaults(func=cmd_measure)

    b = sub.add_parser("best", help="print '<index> <position_mm>' of the curve peak (index 1-based)")
    b.add_argument("--curve", required=True)
    b.set_defaults(func=cmd_best)

    s = sub.add_parser("stats", help="peak, median, peak-to-median and FWHM of a curve")
    s.add_argument("--curve", required=True)
    s.set_defaults(func=cmd_stats)

    r = sub.add_parser("report", help="overlay curves in an SVG plot")
    r.add_argument("--curves", nargs="+", required=True)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_report)

    o = sub.add_parser("optics", help="closed-form optics calculators")
    osub = o.add_subparsers(dest="optics_cmd", required=True, parser_class=_Parser)
    w = osub.add_parser("wien", help="Wien peak wavelength")
    w.add_argument("--temp-k", type=float)
    w.add_argument("--temp-c", type=float)
    sp = osub.add_parser("span", help="distance between two Wien peaks")
    sp.add_argument("--t1-c", type=float, required=True)
    sp.add_argument("--t2-c", type=float, required=True)
    a = osub.add_parser("airy", help="Airy disc diameter 2.44 lambda d / D")
    a.add_argument("--wavelength-um", type=float, required=True)
    a.add_argument("--image-dist-mm", type=float, help="default: focal length")
    a.add_argument("--aperture-mm", type=float, help="default: focal / f-number")
    a.add_argument("--focal-mm", type=float, default=15.0)
    a.add_argument("--f-number", type=float, default=0.95)
    pt = osub.add_parser("pitch", help="pixel pitch from IFOV and focal length")
    pt.add_argument("--ifov-mrad", type=float, default=1.7)
    pt.add_argument("--focal-mm", type=float, default=15.0)
    d = osub.add_parser("dof", help="near/far depth-of-field limits and hyperfocal distance")
    d.add_argument("--object-dist-mm", type=float, required=True)
    d.add_argument("--coc-um", type=float, help="circle of confusion (default: pixel pitch)")
    d.add_argument("--focal-mm", type=float, default=15.0)
    d.add_argument("--f-number", type=float, default=0.95)
    d.add_argument("--ifov-mrad", type=float, default=1.7)
    sh = osub.add_parser("shift", help="chromatic focal length at another wavelength")
    sh.add_argument("--wavelength-um", type=float, required=True)
    sh.add_argument("--a", type=float, default=4.0, help="Cauchy base index")
    sh.add_argument("--b-um2", type=float, default=1.0, help="Cauchy coefficient in um^2")
    sh.add_argument("--focal-ref-mm", type=float, default=15.0)
    sh.add_argument("--wavelength-ref-um", type=float, default=8.0)
    for sp_ in (w, sp, a, pt, d, sh):
        sp_.set_defaults(func=cmd_optics)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ThermofocusError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
