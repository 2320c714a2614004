"""Contrast enhancement, denoising, binarization and dot repair."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import kernels
from .errors import NoDotMassError
from .image import BinaryImage, GrayImage


@dataclass(frozen=True)
class PreprocessConfig:
    """Knobs for the pre-processing phase.

    ``invert_output=None`` selects auto mode: the binarization is inverted
    when more than half of the pixels would otherwise be foreground.
    """

    median_window: int = 3
    closing_radius: int = 1
    otsu_range_fraction: float = 0.5
    invert_output: Optional[bool] = None

    def __post_init__(self):
        if self.median_window < 1 or self.median_window % 2 == 0:
            raise ValueError(f"median_window must be odd and >= 1, got {self.median_window}")
        if self.closing_radius < 0:
            raise ValueError(f"closing_radius must be >= 0, got {self.closing_radius}")
        if not 0 < self.otsu_range_fraction <= 1:
            raise ValueError(
                f"otsu_range_fraction must be in (0, 1], got {self.otsu_range_fraction}"
            )


def _equalize_range(hist, lo, hi, lut):
    sub = hist[lo:hi + 1]
    total = int(sub.sum())
    if np.count_nonzero(sub) <= 1:
        # a single distinct value (or none) keeps its own level
        return
    cdf = np.cumsum(sub, dtype=np.int64)
    lut[lo:hi + 1] = lo + ((hi - lo) * cdf + total // 2) // total


def bi_histogram_equalize(img: GrayImage) -> GrayImage:
    """Brightness preserving bi-histogram equalization.

    The histogram is split at the floor of the mean intensity ``m``; levels
    ``<= m`` are equalized onto ``[0, m]`` and the rest onto ``[m + 1, 255]``.
    Rounding is done in integers so the mapping is exactly reproducible.
    """
    hist = img.histogram().astype(np.int64)
    n = int(hist.sum())
    m = int(np.dot(np.arange(256, dtype=np.int64), hist)) // n
    lut = np.arange(256, dtype=np.int64)
    _equalize_range(hist, 0, m, lut)
    if m < 255:
        _equalize_range(hist, m + 1, 255, lut)
    return GrayImage(lut.astype(np.uint8)[img.data])


def median_filter(img: GrayImage, window: int) -> GrayImage:
    if window < 1 or window % 2 == 0:
        raise ValueError(f"median window must be odd and >= 1, got {window}")
    return GrayImage(kernels.median_filter(img.data, window))


def otsu_threshold(histogram) -> int:
    """Threshold maximizing the between-class variance.

    Pixels ``<= t`` form class 0.  Candidates are restricted to the occupied
    span ``[first nonzero bin, last nonzero bin]`` and ties go to the smallest
    ``t``; a single occupied bin therefore returns that bin.  The comparison
    is carried out in exact integer arithmetic.
    """
    counts = [int(c) for c in histogram]
    occupied = [i for i, c in enumerate(counts) if c]
    if not occupied:
        raise ValueError("histogram is empty")
    if any(c < 0 for c in counts):
        raise ValueError("histogram counts must be non-negative")
    lo, hi = occupied[0], occupied[-1]
    total = sum(counts)
    total_sum = sum(i * c for i, c in enumerate(counts))

    best_t, best_num, best_den = lo, -1, 1
    n0 = s0 = 0
    for t in range(hi + 1):
        n0 += counts[t]
        s0 += t * counts[t]
        if t < lo:
            continue
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            num, den = 0, 1
        else:
            # N^2 * sigma_b^2 = (s0 N - S n0)^2 / (n0 n1)
            num = (s0 * total - total_sum * n0) ** 2
            den = n0 * n1
        if num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    return best_t


def lower_range_limit(fraction: float) -> int:
    return int(np.floor(255 * fraction))


def binarize_lower_range(img: GrayImage, cfg: PreprocessConfig = PreprocessConfig()) -> BinaryImage:
    """Otsu binarization driven by the lower grey range only.

    Raises :class:`NoDotMassError` when no pixel falls in
    ``[0, floor(255 * otsu_range_fraction)]``.
    """
    top = lower_range_limit(cfg.otsu_range_fraction)
    hist = img.histogram()[:top + 1]
    if not hist.any():
        raise NoDotMassError(f"no pixel at or below level {top}")
    t = otsu_threshold(hist)
    fg = img.data <= t
    invert = cfg.invert_output
    if invert is None:
        invert = 2 * int(fg.sum()) > fg.size
    if invert:
        fg = ~fg
    return BinaryImage(fg)


def morphological_close(img: BinaryImage, radius: int) -> BinaryImage:
    """Dilation followed by erosion with a ``(2r+1)``-square element.

    The image is evaluated as if embedded in an unbounded background plane,
    which keeps closing extensive and idempotent up to the borders.
    """
    if radius < 0:
        raise ValueError(f"closing radius must be >= 0, got {radius}")
    if radius == 0:
        return img
    r = radius
    padded = np.zeros((img.height + 2 * r, img.width + 2 * r), dtype=bool)
    padded[r:-r, r:-r] = img.data
    closed = kernels.erode(kernels.dilate(padded, r), r)
    return BinaryImage(closed[r:-r, r:-r])


class Stages(NamedTuple):
    enhanced: GrayImage
    denoised: GrayImage
    binary: BinaryImage
    closed: BinaryImage
    blank: bool


def preprocess_stages(img: GrayImage, cfg: PreprocessConfig = PreprocessConfig()) -> Stages:
    enhanced = bi_histogram_equalize(img)
    denoised = median_filter(enhanced, cfg.median_window)
    try:
        binary = binarize_lower_range(denoised, cfg)
    except NoDotMassError:
        blank = BinaryImage.blank(img.width, img.height)
        return Stages(enhanced, denoised, blank, blank, True)
    closed = morphological_close(binary, cfg.closing_radius)
    return Stages(enhanced, denoised, binary, closed, False)


def preprocess(img: GrayImage, cfg: PreprocessConfig = PreprocessConfig()) -> BinaryImage:
    """Full phase one; a page with no dark mass yields an all-background image."""
    return preprocess_stages(img, cfg).closed
