"""Synthetic scanned Braille pages with exact ground truth.

Pages are drawn dark-on-light like a flatbed scan of embossed paper: a
textured bright background with soft-edged discs slightly darker than the
paper.  Dots are placed on an ideal lattice, rotated about the image center
and optionally jittered, dropped, or buried in noise.  Everything random is
drawn from one seeded generator, so a spec renders to the same bytes every
time.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from .dots import BraillePoint
from .errors import UnmappableGraphemeError
from .geometry import BrailleStructure
from .image import GrayImage
from .translate import BLANK, DOT_POSITIONS, MappingTable, default_table, format_code, parse_code


@dataclass(frozen=True)
class SynthSpec:
    text: str = ""
    table: Optional[MappingTable] = field(default=None, compare=False, repr=False)
    dot_diameter: float = 10.0
    dot_pitch: float = 16.0
    cell_advance: float = 40.0
    line_advance: float = 64.0
    margin: float = 40.0
    rotation: float = 0.0
    noise_salt_pepper: float = 0.0
    noise_gaussian_sigma: float = 0.0
    dot_contrast: float = 40.0
    dot_jitter: float = 0.0
    dot_dropout: float = 0.0
    seed: int = 0
    paper_level: float = 235.0
    paper_texture: float = 2.0
    lines_capacity: int = 0
    chars_capacity: int = 0

    def __post_init__(self):
        if self.dot_diameter <= 0:
            raise ValueError("dot_diameter must be positive")
        if self.dot_pitch <= self.dot_diameter:
            raise ValueError("dot_pitch must exceed dot_diameter")
        if self.cell_advance < self.dot_pitch + self.dot_diameter + 1:
            raise ValueError("cell_advance must be >= dot_pitch + dot_diameter + 1")
        if self.line_advance < 2 * self.dot_pitch + self.dot_diameter + 1:
            raise ValueError("line_advance must be >= 2 * dot_pitch + dot_diameter + 1")
        for name in ("noise_salt_pepper", "dot_dropout"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.margin < 0 or self.dot_jitter < 0 or self.noise_gaussian_sigma < 0:
            raise ValueError("margin, dot_jitter and noise_gaussian_sigma must be >= 0")

    def mapping(self) -> MappingTable:
        return self.table if self.table is not None else default_table()


class GroundTruth(NamedTuple):
    spec: SynthSpec
    dots: List[Tuple[float, float]]
    dropped: List[Tuple[float, float]]
    intended: List[List[str]]
    codes: List[List[str]]
    structure: Optional[BrailleStructure]
    noise_mask: Optional[np.ndarray] = None

    @property
    def shape(self):
        return len(self.codes), max((len(r) for r in self.codes), default=0)

    def padded_codes(self):
        """Rendered codes as a full rectangle; short lines padded with blanks."""
        lines, cols = self.shape
        return [row + [BLANK] * (cols - len(row)) for row in self.codes]

    def points(self):
        return [BraillePoint(x, y, self.spec.dot_diameter) for x, y in self.dots]


def encode_text(text: str, table: MappingTable) -> List[List[str]]:
    """Codes per cell for every text line; spaces are blank cells."""
    out = []
    for lineno, line in enumerate(text.split("\n")):
        row = []
        for cell in table.split_cells(line):
            if cell == " ":
                row.append(BLANK)
                continue
            code = table.code_for(cell)
            if code is None:
                raise UnmappableGraphemeError(
                    f"no Braille code for {cell!r} (U+{ord(cell[0]):04X}) on line {lineno + 1}")
            row.append(code)
        out.append(row)
    if text == "":
        return []
    return out


def page_size(spec: SynthSpec, lines: int, cols: int):
    lines = max(lines, spec.lines_capacity, 1)
    cols = max(cols, spec.chars_capacity, 1)
    d, p = spec.dot_diameter, spec.dot_pitch
    width = int(math.ceil(2 * spec.margin + (cols - 1) * spec.cell_advance + p + d))
    height = int(math.ceil(2 * spec.margin + (lines - 1) * spec.line_advance + 2 * p + d))
    return width, height


def _rotate(x, y, center, degrees):
    t = math.radians(degrees)
    c, s = math.cos(t), math.sin(t)
    dx, dy = x - center[0], y - center[1]
    return center[0] + dx * c - dy * s, center[1] + dx * s + dy * c


def render(spec: SynthSpec):
    """Draw the page for ``spec``; returns ``(GrayImage, GroundTruth)``."""
    table = spec.mapping()
    intended = encode_text(spec.text, table)
    n_lines = len(intended)
    n_cols = max((len(r) for r in intended), default=0)
    width, height = page_size(spec, n_lines, n_cols)
    center = ((width - 1) / 2, (height - 1) / 2)
    d, p = spec.dot_diameter, spec.dot_pitch
    ox = oy = spec.margin + d / 2

    rng = np.random.default_rng(spec.seed)
    canvas = spec.paper_level + rng.normal(0.0, spec.paper_texture, (height, width)) \
        if spec.paper_texture > 0 else np.full((height, width), float(spec.paper_level))

    slots = []
    for line, row in enumerate(intended):
        for col, code in enumerate(row):
            for dot, bit in enumerate(parse_code(code)):
                if bit:
                    c, r = DOT_POSITIONS[dot]
                    x = ox + col * spec.cell_advance + c * p
                    y = oy + line * spec.line_advance + r * p
                    slots.append((line, col, dot, _rotate(x, y, center, spec.rotation)))
    n = len(slots)
    jitter = rng.uniform(-spec.dot_jitter, spec.dot_jitter, (n, 2)) if spec.dot_jitter > 0 else np.zeros((n, 2))
    drop = rng.random(n) < spec.dot_dropout if spec.dot_dropout > 0 else np.zeros(n, dtype=bool)

    rendered = [[list(parse_code(c)) for c in row] for row in intended]
    dots, dropped = [], []
    for (line, col, dot, (x, y)), (jx, jy), gone in zip(slots, jitter, drop):
        x, y = x + jx, y + jy
        if gone:
            rendered[line][col][dot] = False
            dropped.append((float(x), float(y)))
            continue
        r = d / 2
        y0, y1 = max(int(math.floor(y - r - 1)), 0), min(int(math.ceil(y + r + 1)) + 1, height)
        x0, x1 = max(int(math.floor(x - r - 1)), 0), min(int(math.ceil(x + r + 1)) + 1, width)
        ys, xs = np.mgrid[y0:y1, x0:x1]
        alpha = np.clip(r + 0.5 - np.hypot(xs - x, ys - y), 0.0, 1.0)
        canvas[y0:y1, x0:x1] -= alpha * spec.dot_contrast
        dots.append((float(x), float(y)))

    if spec.noise_gaussian_sigma > 0:
        canvas += rng.normal(0.0, spec.noise_gaussian_sigma, canvas.shape)
    pixels = np.clip(np.floor(canvas + 0.5), 0, 255).astype(np.uint8)
    mask = None
    if spec.noise_salt_pepper > 0:
        mask = rng.random(pixels.shape) < spec.noise_salt_pepper
        salt = rng.random(pixels.shape) < 0.5
        pixels[mask & salt] = 255
        pixels[mask & ~salt] = 0
    else:
        mask = np.zeros(pixels.shape, dtype=bool)

    structure = None
    if n_lines and n_cols:
        p0 = _rotate(ox, oy, center, spec.rotation)
        structure = BrailleStructure(
            p0_x=p0[0], p0_y=p0[1], theta_b=math.radians(spec.rotation),
            char_width=p, char_height=2 * p,
            char_gap=spec.cell_advance - p, line_gap=spec.line_advance - 2 * p,
            chars_per_line=n_cols, line_count=n_lines, delta_s=d,
        )
    codes = [[format_code(bits) for bits in row] for row in rendered]
    truth = GroundTruth(spec, dots, dropped, intended, codes, structure, mask)
    return GrayImage(pixels), truth


class DotConfusion(NamedTuple):
    tp: int
    fp: int
    fn: int
    tn: int


def compare_dots(found, truth: GroundTruth, tol: float) -> DotConfusion:
    """Greedy nearest-first matching of detected points to true dots.

    Pairs closer than ``tol`` are matched in order of increasing distance,
    each true dot and each found point at most once.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    fx = np.array([(p.x, p.y) for p in found], dtype=float).reshape(-1, 2)
    tx = np.array(truth.dots, dtype=float).reshape(-1, 2)
    lines, cols = truth.shape
    tn = max(lines * cols * 6 - len(tx), 0)
    if len(fx) == 0 or len(tx) == 0:
        return DotConfusion(0, len(fx), len(tx), tn)
    dist = np.hypot(fx[:, None, 0] - tx[None, :, 0], fx[:, None, 1] - tx[None, :, 1])
    fi, ti = np.nonzero(dist <= tol)
    # ordering keys avoid the input order of found points
    order = np.lexsort((fx[fi, 1], fx[fi, 0], ti, dist[fi, ti]))
    used_f = np.zeros(len(fx), dtype=bool)
    used_t = np.zeros(len(tx), dtype=bool)
    tp = 0
    for k in order:
        a, b = fi[k], ti[k]
        if not used_f[a] and not used_t[b]:
            used_f[a] = used_t[b] = True
            tp += 1
    return DotConfusion(tp, len(fx) - tp, len(tx) - tp, tn)


# --- spec and sidecar files -------------------------------------------------

_NUMERIC = {f.name: f.type for f in fields(SynthSpec) if f.name not in ("text", "table")}


def parse_synth_spec(text: str, table: Optional[MappingTable] = None) -> SynthSpec:
    """``key = value`` lines, then a ``---`` line, then the page text."""
    lines = text.split("\n")
    cut = next((i for i, line in enumerate(lines) if line.rstrip("\r") == "---"), len(lines))
    head, body = lines[:cut], "\n".join(lines[cut + 1:])
    kwargs = {}
    for lineno, raw in enumerate(head, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"spec line {lineno}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "table":
            from .translate import load_mapping
            table = load_mapping(value)
            continue
        if key not in _NUMERIC:
            raise ValueError(f"spec line {lineno}: unknown key {key!r}")
        kwargs[key] = int(value) if _NUMERIC[key] in ("int", int) else float(value)
    return SynthSpec(text=body.rstrip("\n"), table=table, **kwargs)


def load_synth_spec(path, table=None) -> SynthSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_synth_spec(fh.read(), table)


def write_truth(truth: GroundTruth, path) -> None:
    """Line-oriented sidecar: structure fields, dots, cells."""
    out = ["# brailletext ground truth"]
    s = truth.structure
    if s is not None:
        for key, value in s.fields().items():
            out.append(f"{key} {value!r}")
    out.append(f"seed {truth.spec.seed}")
    for line in truth.spec.text.split("\n") if truth.spec.text else []:
        out.append("intended " + json.dumps(line, ensure_ascii=False))
    for x, y in truth.dots:
        out.append(f"dot {x!r} {y!r}")
    for x, y in truth.dropped:
        out.append(f"dropped {x!r} {y!r}")
    for i, row in enumerate(truth.codes):
        for j, code in enumerate(row):
            out.append(f"cell {i} {j} {code}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")


_INT_FIELDS = ("chars_per_line", "line_count")


def read_truth(path) -> GroundTruth:
    struct, dots, dropped, cells, intended = {}, [], [], {}, []
    seed = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            key, _, rest = line.partition(" ")
            if key == "dot":
                x, y = rest.split()
                dots.append((float(x), float(y)))
            elif key == "dropped":
                x, y = rest.split()
                dropped.append((float(x), float(y)))
            elif key == "cell":
                i, j, code = rest.split()
                parse_code(code)
                cells[int(i), int(j)] = code
            elif key == "intended":
                intended.append(json.loads(rest))
            elif key == "seed":
                seed = int(rest)
            elif key in _INT_FIELDS:
                struct[key] = int(rest)
            elif key in ("p0_x", "p0_y", "theta_b", "char_width", "char_height",
                         "char_gap", "line_gap", "delta_s"):
                struct[key] = float(rest)
            else:
                raise ValueError(f"{path}:{lineno}: unknown record {key!r}")
    lines = 1 + max((i for i, _ in cells), default=-1)
    codes = [[] for _ in range(lines)]
    for (i, j) in sorted(cells):
        codes[i].append(cells[i, j])
    structure = BrailleStructure(**struct) if len(struct) == 10 else None
    geometry = {}
    if structure is not None:
        geometry = dict(
            dot_diameter=structure.delta_s, dot_pitch=structure.char_width,
            cell_advance=structure.cell_advance, line_advance=structure.line_advance)
    spec = SynthSpec(text="\n".join(intended), seed=seed, **geometry)
    return GroundTruth(spec, dots, dropped, [], codes, structure, None)


def with_seed(spec: SynthSpec, seed: int) -> SynthSpec:
    return replace(spec, seed=seed)
