"""Connected components, circle qualification and Braille point extraction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, NamedTuple

import numpy as np

from . import kernels
from .errors import NoCircleCandidatesError
from .image import BinaryImage


@dataclass(frozen=True)
class Component:
    label: int
    bbox_x: int
    bbox_y: int
    width: int
    height: int
    area: int
    centroid_x: float
    centroid_y: float


@dataclass(frozen=True)
class BraillePoint:
    x: float
    y: float
    diameter: float = 0.0


def label_image(img: BinaryImage):
    """8-connected label raster and component count."""
    return kernels.label8(img.data)


def components_from_labels(labels, count) -> List[Component]:
    if count == 0:
        return []
    h, w = labels.shape
    flat = labels.ravel()
    ys, xs = np.divmod(np.arange(flat.size, dtype=np.int64), w)
    fg = flat > 0
    lab = flat[fg]
    ys = ys[fg]
    xs = xs[fg]
    n = count + 1
    area = np.bincount(lab, minlength=n)
    sum_x = np.bincount(lab, weights=xs, minlength=n)
    sum_y = np.bincount(lab, weights=ys, minlength=n)
    min_x = np.full(n, w, dtype=np.int64)
    min_y = np.full(n, h, dtype=np.int64)
    max_x = np.full(n, -1, dtype=np.int64)
    max_y = np.full(n, -1, dtype=np.int64)
    np.minimum.at(min_x, lab, xs)
    np.minimum.at(min_y, lab, ys)
    np.maximum.at(max_x, lab, xs)
    np.maximum.at(max_y, lab, ys)
    out = []
    for i in range(1, n):
        out.append(Component(
            label=i,
            bbox_x=int(min_x[i]),
            bbox_y=int(min_y[i]),
            width=int(max_x[i] - min_x[i] + 1),
            height=int(max_y[i] - min_y[i] + 1),
            area=int(area[i]),
            centroid_x=float(sum_x[i] / area[i]),
            centroid_y=float(sum_y[i] / area[i]),
        ))
    return out


def connected_components(img: BinaryImage) -> List[Component]:
    """Components in order of their first pixel in raster order."""
    labels, count = label_image(img)
    return components_from_labels(labels, count)


def is_circle(c: Component) -> bool:
    return abs(c.width - c.height) <= min(c.width, c.height)


def diameter(c: Component) -> float:
    return (c.width + c.height) / 2


def standard_diameter(diameters) -> float:
    """Median diameter; the mean of the middle pair for even counts."""
    values = sorted(diameters)
    if not values:
        raise NoCircleCandidatesError("no circle-shaped components")
    mid = len(values) // 2
    if len(values) % 2:
        return float(values[mid])
    return (values[mid - 1] + values[mid]) / 2


def accepted_band(delta_s):
    return 2 * delta_s / 3, 4 * delta_s / 3


class DotDetection(NamedTuple):
    points: List[BraillePoint]
    delta_s: float
    accepted: List[Component]
    rejected: List[Component]


def detect_braille_points(components, min_diameter=0.0) -> DotDetection:
    """Keep circle-shaped components whose diameter lies in the accepted band.

    ``min_diameter`` drops specks before the standard diameter is taken;
    the default of 0 applies the circle and band tests alone.
    """
    candidates = [c for c in components if is_circle(c) and diameter(c) >= min_diameter]
    delta_s = standard_diameter([diameter(c) for c in candidates])
    lo, hi = accepted_band(delta_s)
    keep = {c.label for c in candidates}
    accepted, rejected, points = [], [], []
    for c in components:
        d = diameter(c)
        if c.label in keep and lo <= d <= hi:
            accepted.append(c)
            points.append(BraillePoint(c.centroid_x, c.centroid_y, d))
        else:
            rejected.append(c)
    return DotDetection(points, delta_s, accepted, rejected)


def filter_braille_points(components, min_diameter=0.0) -> List[BraillePoint]:
    return detect_braille_points(components, min_diameter).points
