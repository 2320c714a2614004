"""Grid projection, cell reading and table-driven transliteration.

A Braille code is kept as its canonical text form: six ``0``/``1``
characters in dot order 1..6 (left column top to bottom, then right column).
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional

import numpy as np

from .errors import MappingError
from .geometry import BrailleStructure
from .image import BinaryImage

log = logging.getLogger(__name__)

BLANK = "000000"
UNKNOWN_MARK = "⍰"
DEFAULT_FILL_THRESHOLD = 0.15
_CODE_RE = re.compile(r"^[01]{6}$")

# (column, row) of dots 1..6
DOT_POSITIONS = ((0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2))


def parse_code(text: str):
    """``'001110'`` -> ``(False, False, True, True, True, False)``."""
    if not isinstance(text, str) or not _CODE_RE.match(text):
        raise ValueError(f"not a Braille code: {text!r}")
    return tuple(ch == "1" for ch in text)


def format_code(bits) -> str:
    bits = tuple(bits)
    if len(bits) != 6:
        raise ValueError(f"a Braille code has 6 bits, got {len(bits)}")
    return "".join("1" if b else "0" for b in bits)


def all_codes():
    return [format(i, "06b") for i in range(64)]


@dataclass
class MappingTable:
    """Code to grapheme map with a reverse index for rendering."""

    entries: Dict[str, str] = field(default_factory=dict)
    name: str = "table"
    policy: str = "first-wins"
    warnings: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.policy not in ("first-wins", "error"):
            raise ValueError(f"unknown collision policy {self.policy!r}")
        self._reverse = {}
        for code, g in self.entries.items():
            self._reverse.setdefault(g, code)
        self._lengths = sorted({len(g) for g in self._reverse}, reverse=True)

    def add(self, code, grapheme, where=""):
        if not _CODE_RE.match(code):
            raise MappingError(f"{where}bad code {code!r}")
        if code in self.entries:
            msg = (f"{where}duplicate code {code}: keeping {self.entries[code]!r}, "
                   f"ignoring {grapheme!r}")
            if self.policy == "error":
                raise MappingError(msg)
            self.warnings.append(msg)
            log.debug("%s: %s", self.name, msg)
        else:
            self.entries[code] = grapheme
        if grapheme not in self._reverse:
            self._reverse[grapheme] = code
            self._lengths = sorted({len(g) for g in self._reverse}, reverse=True)

    def lookup(self, code) -> Optional[str]:
        return self.entries.get(code)

    def code_for(self, grapheme) -> Optional[str]:
        return self._reverse.get(grapheme)

    def graphemes(self):
        return list(self._reverse)

    def colliding_graphemes(self):
        """Graphemes whose code renders back to a different grapheme."""
        return [g for g, c in self._reverse.items() if self.entries.get(c) != g]

    def split_cells(self, line: str) -> List[str]:
        """Split a text line into cells by longest match against the table.

        Spaces become blank cells (``' '``); characters the table does not
        know stay single-codepoint cells.
        """
        cells = []
        i = 0
        while i < len(line):
            if line[i] == " ":
                cells.append(" ")
                i += 1
                continue
            for n in self._lengths:
                if line[i:i + n] in self._reverse:
                    cells.append(line[i:i + n])
                    i += n
                    break
            else:
                cells.append(line[i])
                i += 1
        return cells


def parse_mapping(text: str, name="table", policy="first-wins") -> MappingTable:
    table = MappingTable(name=name, policy=policy)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 1)
        if len(parts) != 2:
            raise MappingError(f"{name}:{lineno}: expected BITS<TAB>GRAPHEME, got {raw!r}")
        code, grapheme = parts
        grapheme = re.split(r"\s+#", grapheme, maxsplit=1)[0].strip()
        if not grapheme:
            raise MappingError(f"{name}:{lineno}: empty grapheme")
        table.add(code, grapheme, where=f"{name}:{lineno}: ")
    return table


def load_mapping(path, policy="first-wins") -> MappingTable:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_mapping(text, name=str(path), policy=policy)


def default_table(policy="first-wins") -> MappingTable:
    text = resources.files("brailletext").joinpath("data/bengali.tbl").read_text(encoding="utf-8")
    return parse_mapping(text, name="bengali.tbl", policy=policy)


@dataclass(frozen=True)
class CellGrid:
    """Dot sample positions for every cell of the page.

    ``centers[line, col, dot]`` holds the expected ``(x, y)`` of dot
    ``dot + 1``; each dot is sampled over a square of side ``side`` aligned
    with the writing rotation.
    """

    structure: BrailleStructure
    centers: np.ndarray
    side: float

    @property
    def shape(self):
        return self.centers.shape[:2]

    def cell_corners(self, line, col):
        s = self.structure
        (ux, uy), (vx, vy) = s.axes()
        ox, oy = self.centers[line, col, 0]
        m = s.delta_s / 2
        pts = []
        for a, b in ((-m, -m), (s.char_width + m, -m), (s.char_width + m, s.char_height + m), (-m, s.char_height + m)):
            pts.append((ox + a * ux + b * vx, oy + a * uy + b * vy))
        return pts


def region_side(s: BrailleStructure) -> float:
    side = max(s.delta_s, s.char_width / 2)
    limits = [s.char_width, s.row_pitch]
    limits += [g for g in (s.char_gap, s.line_gap) if g > 0]
    return min([side] + [l for l in limits if l > 0])


def build_grid(s: BrailleStructure) -> CellGrid:
    (ux, uy), (vx, vy) = s.axes()
    lines, cols = s.line_count, s.chars_per_line
    centers = np.zeros((lines, cols, 6, 2))
    for line in range(lines):
        for col in range(cols):
            for d, (c, r) in enumerate(DOT_POSITIONS):
                a = col * s.cell_advance + c * s.char_width
                b = line * s.line_advance + r * s.row_pitch
                centers[line, col, d] = (s.p0_x + a * ux + b * vx, s.p0_y + a * uy + b * vy)
    return CellGrid(s, centers, region_side(s))


def region_count(img: BinaryImage, grid: CellGrid, cx, cy) -> int:
    """Foreground pixels inside the rotated square sample around ``(cx, cy)``."""
    (ux, uy), (vx, vy) = grid.structure.axes()
    half = grid.side / 2
    reach = half * math.sqrt(2) + 1
    x0 = max(int(math.floor(cx - reach)), 0)
    x1 = min(int(math.ceil(cx + reach)) + 1, img.width)
    y0 = max(int(math.floor(cy - reach)), 0)
    y1 = min(int(math.ceil(cy + reach)) + 1, img.height)
    if x0 >= x1 or y0 >= y1:
        return 0
    ys, xs = np.mgrid[y0:y1, x0:x1]
    dx, dy = xs - cx, ys - cy
    inside = (np.abs(dx * ux + dy * uy) <= half) & (np.abs(dx * vx + dy * vy) <= half)
    return int(np.count_nonzero(img.data[y0:y1, x0:x1] & inside))


def min_dot_pixels(delta_s, fill_threshold):
    return fill_threshold * math.pi / 4 * delta_s ** 2


def read_cell(img: BinaryImage, grid: CellGrid, line: int, col: int,
              fill_threshold: float = DEFAULT_FILL_THRESHOLD) -> str:
    """Six-bit code of one cell from the foreground in its dot regions."""
    if not 0 < fill_threshold <= 1:
        raise ValueError(f"fill_threshold must be in (0, 1], got {fill_threshold}")
    lines, cols = grid.shape
    if not (0 <= line < lines and 0 <= col < cols):
        raise IndexError(f"cell ({line}, {col}) outside a {lines}x{cols} grid")
    need = min_dot_pixels(grid.structure.delta_s, fill_threshold)
    bits = []
    for cx, cy in grid.centers[line, col]:
        bits.append(region_count(img, grid, cx, cy) >= need)
    return format_code(bits)


def read_page(img: BinaryImage, grid: CellGrid, fill_threshold: float = DEFAULT_FILL_THRESHOLD):
    lines, cols = grid.shape
    return [[read_cell(img, grid, i, j, fill_threshold) for j in range(cols)] for i in range(lines)]


@dataclass(frozen=True)
class UnknownCode:
    line: int
    col: int
    code: str


def translate_cells(codes, table: MappingTable):
    """Graphemes per cell plus the unknown codes met.

    Blank cells become ``' '``; unknown codes the ``UNKNOWN_MARK``.
    """
    cells, unknown = [], []
    for i, row in enumerate(codes):
        out = []
        for j, code in enumerate(row):
            if code == BLANK:
                out.append(" ")
                continue
            g = table.lookup(code)
            if g is None:
                unknown.append(UnknownCode(i, j, code))
                g = UNKNOWN_MARK
            out.append(g)
        cells.append(out)
    return cells, unknown


def cells_to_text(cells) -> str:
    lines = ["".join(row).rstrip(" ") for row in cells]
    while lines and not lines[-1]:
        lines.pop()
    return "\n".join(lines)


def translate_page(codes, table: MappingTable, unknown: Optional[list] = None) -> str:
    """Map a code matrix to text; unknown codes are appended to ``unknown``."""
    cells, missing = translate_cells(codes, table)
    if unknown is not None:
        unknown.extend(missing)
    return cells_to_text(cells)
