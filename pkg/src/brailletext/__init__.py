"""Bengali Braille page images to text."""

__version__ = "0.1.0"

from .errors import (BrailleError, ImageFormatError, MappingError, NoCircleCandidatesError,
                     NoDotMassError, PitchExtractionError, StructureError,
                     UnmappableGraphemeError)
from .image import BinaryImage, GrayImage, load_gray, save_gray
from .preprocess import PreprocessConfig, preprocess
from .dots import BraillePoint, connected_components, detect_braille_points
from .geometry import BrailleStructure, estimate_structure
from .translate import MappingTable, default_table, load_mapping, translate_page
from .synth import GroundTruth, SynthSpec, compare_dots, render
from .evaluation import Confusion, Metrics, char_accuracy, metrics
from .pipeline import PageResult, PipelineConfig, recognize
from .kernels import BACKEND

__all__ = [
    "BACKEND", "BinaryImage", "BrailleError", "BraillePoint", "BrailleStructure", "Confusion",
    "GrayImage", "GroundTruth", "ImageFormatError", "MappingError", "MappingTable", "Metrics",
    "NoCircleCandidatesError", "NoDotMassError", "PageResult", "PipelineConfig",
    "PitchExtractionError", "PreprocessConfig", "StructureError", "SynthSpec",
    "UnmappableGraphemeError", "char_accuracy", "compare_dots", "connected_components",
    "default_table", "detect_braille_points", "estimate_structure", "load_gray", "load_mapping",
    "metrics", "preprocess", "recognize", "render", "save_gray", "translate_page",
]
