"""End-to-end page recognition: image in, text out."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from .dots import DotDetection, connected_components, detect_braille_points
from .errors import NoCircleCandidatesError
from .geometry import DEFAULT_SMOOTHING, BrailleStructure, estimate_structure
from .image import BinaryImage, GrayImage
from .preprocess import PreprocessConfig, Stages, preprocess_stages
from .translate import (DEFAULT_FILL_THRESHOLD, CellGrid, MappingTable, build_grid,
                        cells_to_text, default_table, read_page, translate_cells)

DEFAULT_MIN_DOT_DIAMETER = 3.0


@dataclass(frozen=True)
class PipelineConfig:
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    fill_threshold: float = DEFAULT_FILL_THRESHOLD
    min_dot_diameter: float = DEFAULT_MIN_DOT_DIAMETER
    smoothing: int = DEFAULT_SMOOTHING
    refine: bool = True

    def __post_init__(self):
        if not 0 < self.fill_threshold <= 1:
            raise ValueError(f"fill_threshold must be in (0, 1], got {self.fill_threshold}")
        if self.min_dot_diameter < 0:
            raise ValueError("min_dot_diameter must be >= 0")


@dataclass
class PageResult:
    """Everything produced for one page; later fields stay ``None`` after a failure."""

    stages: Stages
    detection: Optional[DotDetection] = None
    structure: Optional[BrailleStructure] = None
    grid: Optional[CellGrid] = None
    codes: Optional[List[List[str]]] = None
    cells: Optional[List[List[str]]] = None
    unknown: list = field(default_factory=list)
    text: str = ""
    blank: bool = False

    @property
    def binary(self) -> BinaryImage:
        return self.stages.closed


def recognize(img: GrayImage, config: PipelineConfig = PipelineConfig(),
              table: Optional[MappingTable] = None) -> PageResult:
    """Run every phase on one page.

    A page without any dot-sized component comes back ``blank`` with empty text;
    structural failures raise :class:`~brailletext.errors.StructureError`.
    Use :func:`recognize_stepwise` to keep partial results on failure.
    """
    result = PageResult(stages=None)
    for _ in recognize_stepwise(img, config, table, result):
        pass
    return result


def recognize_stepwise(img, config, table, result: PageResult):
    """Generator filling ``result`` stage by stage; yields the stage name."""
    table = table if table is not None else default_table()
    result.stages = preprocess_stages(img, config.preprocess)
    yield "preprocess"
    components = connected_components(result.stages.closed)
    try:
        result.detection = detect_braille_points(components, config.min_dot_diameter)
    except NoCircleCandidatesError:
        result.blank = True
        result.codes, result.cells = [], []
        return
    yield "dots"
    d = result.detection
    result.structure = estimate_structure(d.points, d.delta_s, smoothing=config.smoothing,
                                          refine=config.refine)
    yield "geometry"
    result.grid = build_grid(result.structure)
    result.codes = read_page(result.stages.closed, result.grid, config.fill_threshold)
    result.cells, result.unknown = translate_cells(result.codes, table)
    result.text = cells_to_text(result.cells)
    yield "translate"
