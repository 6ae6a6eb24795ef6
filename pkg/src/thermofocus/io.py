"""On-disk formats: 16-bit PGM frames, JSON stack manifests, CSV curves, SVG reports."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .errors import EmptyCurveError, FormatError
from .frames import MAX_COUNT, FocusStack, ThermalFrame
from .measures import FocusCurve

MANIFEST_VERSION = 1
CSV_HEADER = ["position_mm", "value"]


# ---------------------------------------------------------------- PGM

def write_pgm(frame: ThermalFrame, path) -> None:
    """Binary P5 with maxval 65535, big-endian samples."""
    header = f"P5\n{frame.width} {frame.height}\n{MAX_COUNT}\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(frame.pixels.astype(">u2").tobytes())


def _pgm_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping ``#`` comments."""
    tokens, i, n = [], 0, len(data)
    while len(tokens) < count:
        while i < n and data[i:i + 1].isspace():
            i += 1
        if i >= n:
            raise FormatError("header: unexpected end of file")
        if data[i:i + 1] == b"#":
            while i < n and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        start = i
        while i < n and not data[i:i + 1].isspace() and data[i:i + 1] != b"#":
            i += 1
        tokens.append(data[start:i])
    # exactly one whitespace byte separates the header from the raster
    if i >= n or not data[i:i + 1].isspace():
        raise FormatError("header: missing whitespace before pixel data")
    return tokens, i + 1


def read_pgm(path) -> ThermalFrame:
    data = Path(path).read_bytes()
    (magic, width, height, maxval), offset = _pgm_tokens(data, 4)
    if magic != b"P5":
        raise FormatError(f"magic: expected P5, got {magic!r}")
    try:
        w, h, mv = int(width), int(height), int(maxval)
    except ValueError as exc:
        raise FormatError(f"header: non-numeric field ({exc})") from None
    if w <= 0 or h <= 0:
        raise FormatError(f"width/height: must be positive, got {w}x{h}")
    if mv != MAX_COUNT:
        raise FormatError(f"maxval: expected {MAX_COUNT}, got {mv}")
    body = data[offset:]
    if len(body) < 2 * w * h:
        raise FormatError(f"data: truncated, need {2 * w * h} bytes, found {len(body)}")
    pixels = np.frombuffer(body, dtype=">u2", count=w * h).reshape(h, w).astype(np.uint16)
    return ThermalFrame(w, h, pixels)


# ---------------------------------------------------------------- manifests

@dataclass
class ManifestEntry:
    index: int
    position_mm: float
    file: str


@dataclass
class StackManifest:
    label: str
    ambient_c: float
    object_temp_c: float
    object_distance_mm: float
    entries: list[ManifestEntry] = field(default_factory=list)
    version: int = MANIFEST_VERSION

    def validate(self):
        if self.version != MANIFEST_VERSION:
            raise FormatError(f"version: unsupported manifest version {self.version}")
        if not self.entries:
            raise FormatError("entries: manifest lists no frames")
        for k, e in enumerate(self.entries, start=1):
            if e.index != k:
                raise FormatError(f"entries: non-consecutive index {e.index} at position {k}")
        pos = [e.position_mm for e in self.entries]
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise FormatError("entries: positions must be strictly increasing")


_MANIFEST_FIELDS = ("version", "label", "ambient_c", "object_temp_c", "object_distance_mm", "entries")
_ENTRY_FIELDS = ("index", "position_mm", "file")


def write_manifest(manifest: StackManifest, path) -> None:
    manifest.validate()
    doc = {k: asdict(manifest)[k] for k in _MANIFEST_FIELDS}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def read_manifest(path) -> StackManifest:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"manifest: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise FormatError("manifest: top level must be an object")
    for key in _MANIFEST_FIELDS:
        if key not in doc:
            raise FormatError(f"missing field {key!r}")
    entries = []
    for raw in doc["entries"]:
        for key in _ENTRY_FIELDS:
            if key not in raw:
                raise FormatError(f"missing field {key!r} in entry")
        entries.append(ManifestEntry(int(raw["index"]), float(raw["position_mm"]), str(raw["file"])))
    m = StackManifest(
        label=str(doc["label"]),
        ambient_c=float(doc["ambient_c"]),
        object_temp_c=float(doc["object_temp_c"]),
        object_distance_mm=float(doc["object_distance_mm"]),
        entries=entries,
        version=int(doc["version"]),
    )
    m.validate()
    return m


def load_stack(path) -> FocusStack:
    """Read a manifest and every frame it references (paths relative to the manifest)."""
    m = read_manifest(path)
    root = Path(path).parent
    frames = []
    for e in m.entries:
        fp = root / e.file
        if not fp.is_file():
            raise FormatError(f"missing frame file {e.file!r} (entry {e.index})")
        frames.append(read_pgm(fp))
    return FocusStack(
        frames,
        [e.position_mm for e in m.entries],
        ambient_c=m.ambient_c,
        object_temp_c=m.object_temp_c,
        label=m.label,
    )


def save_stack(stack: FocusStack, directory, object_distance_mm: float, stem: str | None = None) -> Path:
    """Write a stack's frames under ``directory/<stem>/`` plus ``directory/<stem>.json``."""
    directory = Path(directory)
    stem = stem or f"stack_{stack.label or 'unlabelled'}"
    frame_dir = directory / stem
    frame_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for k, (frame, pos) in enumerate(zip(stack.frames, stack.positions_mm), start=1):
        rel = f"{stem}/frame_{k:03d}.pgm"
        write_pgm(frame, directory / rel)
        entries.append(ManifestEntry(k, pos, rel))
    manifest = StackManifest(
        label=stack.label,
        ambient_c=stack.ambient_c,
        object_temp_c=stack.object_temp_c if stack.object_temp_c is not None else stack.ambient_c,
        object_distance_mm=object_distance_mm,
        entries=entries,
    )
    path = directory / f"{stem}.json"
    write_manifest(manifest, path)
    return path


# ---------------------------------------------------------------- CSV curves

def _decimal(v: float) -> str:
    # shortest round-tripping digits, never in exponent form
    return np.format_float_positional(float(v), unique=True, trim="0")


def write_curve_csv(curve: FocusCurve, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for p, v in zip(curve.positions_mm, curve.values):
            writer.writerow([_decimal(p), _decimal(v)])


def read_curve_csv(path, label: str | None = None) -> FocusCurve:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != CSV_HEADER:
        raise FormatError(f"header: expected {','.join(CSV_HEADER)!r}")
    pos, vals = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise FormatError(f"line {lineno}: expected 2 cells, got {len(row)}")
        try:
            p, v = float(row[0]), float(row[1])
        except ValueError:
            raise FormatError(f"line {lineno}: non-numeric cell {row!r}") from None
        if pos and p <= pos[-1]:
            raise FormatError(f"line {lineno}: non-increasing position {p}")
        pos.append(p)
        vals.append(v)
    if label is None:
        label = Path(path).stem
    try:
        return FocusCurve(pos, vals, label)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


# ---------------------------------------------------------------- SVG report

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf")
CANVAS_W, CANVAS_H = 800, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 90, 160, 30, 70


def _span(lo: float, hi: float) -> tuple[float, float]:
    if hi > lo:
        return lo, hi
    pad = abs(lo) * 0.05 or 1.0
    return lo - pad, hi + pad


def _fmt(v: float) -> str:
    return f"{v:.4g}"


def render_report_svg(curves: Sequence[FocusCurve], path) -> None:
    """Overlay focus curves on one 800x600 SVG plot with a legend."""
    curves = list(curves)
    if not curves or any(len(c) == 0 for c in curves):
        raise EmptyCurveError("report needs at least one non-empty curve")
    xs = [p for c in curves for p in c.positions_mm]
    ys = [v for c in curves for v in c.values]
    x0, x1 = _span(min(xs), max(xs))
    y0, y1 = _span(min(ys), max(ys))
    pw = CANVAS_W - MARGIN_L - MARGIN_R
    ph = CANVAS_H - MARGIN_T - MARGIN_B

    def sx(x):
        return MARGIN_L + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return MARGIN_T + ph - (y - y0) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS_W}" '
        f'height="{CANVAS_H}" viewBox="0 0 {CANVAS_W} {CANVAS_H}">',
        f'<rect x="0" y="0" width="{CANVAS_W}" height="{CANVAS_H}" fill="white"/>',
        f'<g id="axes" stroke="black" stroke-width="1">'
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T + ph}" x2="{MARGIN_L + pw}" y2="{MARGIN_T + ph}"/>'
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" y2="{MARGIN_T + ph}"/></g>',
    ]
    ticks = ['<g id="ticks" font-family="sans-serif" font-size="11">']
    for t in np.linspace(0, 1, 6):
        xv, yv = x0 + t * (x1 - x0), y0 + t * (y1 - y0)
        X, Y = sx(xv), sy(yv)
        ticks.append(f'<line x1="{X:.2f}" y1="{MARGIN_T + ph}" x2="{X:.2f}" y2="{MARGIN_T + ph + 5}" stroke="black"/>')
        ticks.append(f'<text x="{X:.2f}" y="{MARGIN_T + ph + 18}" text-anchor="middle">{_fmt(xv)}</text>')
        ticks.append(f'<line x1="{MARGIN_L - 5}" y1="{Y:.2f}" x2="{MARGIN_L}" y2="{Y:.2f}" stroke="black"/>')
        ticks.append(f'<text x="{MARGIN_L - 8}" y="{Y + 4:.2f}" text-anchor="end">{_fmt(yv)}</text>')
    ticks.append("</g>")
    out.extend(ticks)
    out.append(
        f'<text x="{MARGIN_L + pw / 2}" y="{CANVAS_H - 20}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">lens position (mm)</text>'
    )
    out.append(
        f'<text x="20" y="{MARGIN_T + ph / 2}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14" transform="rotate(-90 20 {MARGIN_T + ph / 2})">SML</text>'
    )
    out.append('<g id="curves" fill="none" stroke-width="1.5">')
    for k, c in enumerate(curves):
        pts = " ".join(f"{sx(p):.2f},{sy(v):.2f}" for p, v in zip(c.positions_mm, c.values))
        out.append(f'<polyline stroke="{PALETTE[k % len(PALETTE)]}" points="{pts}"/>')
    out.append("</g>")
    out.append('<g id="legend" font-family="sans-serif" font-size="12">')
    lx = MARGIN_L + pw + 20
    for k, c in enumerate(curves):
        ly = MARGIN_T + 10 + 20 * k
        color = PALETTE[k % len(PALETTE)]
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 32}" y="{ly + 4}">{escape(c.label or f"curve {k + 1}")}</text>')
    out.append("</g>")
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")
