"""Recovery of the page's Braille writing structure from a dot cloud.

All distances are measured between dot centers.  With that convention a
cell's width ``char_width`` is the horizontal pitch between its two dot
columns, ``char_gap`` the distance from a right column to the next cell's
left column, ``char_height`` the distance from the top to the bottom dot row
and ``line_gap`` the distance from a bottom row to the next line's top row.
Text width measured from the first to the last dot center of a line then
satisfies ``W = n * char_width + (n - 1) * char_gap`` exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from .dots import BraillePoint
from .errors import PitchExtractionError, StructureError

SIDES = ("upper", "lower", "left", "right")
HORIZONTAL_SIDES = ("upper", "lower")
MAX_ROTATION = math.pi / 8
MAX_SLOPE = math.tan(MAX_ROTATION)
DEFAULT_SMOOTHING = 3
OUTSIDE_FRACTION = 0.1
MAX_REFINE_ITERATIONS = 20
ROTATION_ROUNDS = 4
PEAK_CANDIDATES = 4
ANGLE_TOLERANCE = math.radians(2.0)
# dot pitch over dot diameter in common Braille slates (2.5 mm / 1.5 mm)
DEFAULT_PITCH_RATIO = 1.6


@dataclass(frozen=True)
class MarginLine:
    """A thick margin line.

    Horizontal sides store ``y = slope * x + intercept``; vertical sides store
    ``x = slope * y + intercept``.
    """

    side: str
    slope: float
    intercept: float
    thickness: float
    support: int

    @property
    def horizontal(self):
        return self.side in HORIZONTAL_SIDES

    @property
    def angle(self):
        """Deviation from the ideal orientation, in radians (clockwise on screen)."""
        if self.horizontal:
            return math.atan(self.slope)
        return -math.atan(self.slope)

    def distance(self, x, y):
        u, v = (x, y) if self.horizontal else (y, x)
        return np.abs(np.asarray(v) - (self.slope * np.asarray(u) + self.intercept)) / math.hypot(1.0, self.slope)

    def at(self, t):
        """Point on the line at abscissa ``t`` (x for horizontal sides, y otherwise)."""
        w = self.slope * t + self.intercept
        return (t, w) if self.horizontal else (w, t)


@dataclass(frozen=True)
class BrailleStructure:
    p0_x: float
    p0_y: float
    theta_b: float
    char_width: float
    char_height: float
    char_gap: float
    line_gap: float
    chars_per_line: int
    line_count: int
    delta_s: float
    diagnostics: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def cell_advance(self):
        return self.char_width + self.char_gap

    @property
    def line_advance(self):
        return self.char_height + self.line_gap

    @property
    def row_pitch(self):
        return self.char_height / 2

    def axes(self):
        """Unit vectors along the text line and down the page."""
        c, s = math.cos(self.theta_b), math.sin(self.theta_b)
        return (c, s), (-s, c)

    def fields(self):
        return {
            "p0_x": self.p0_x,
            "p0_y": self.p0_y,
            "theta_b": self.theta_b,
            "char_width": self.char_width,
            "char_height": self.char_height,
            "char_gap": self.char_gap,
            "line_gap": self.line_gap,
            "chars_per_line": self.chars_per_line,
            "line_count": self.line_count,
            "delta_s": self.delta_s,
        }


def _coords(points):
    return (np.array([p.x for p in points], dtype=float),
            np.array([p.y for p in points], dtype=float))


def _stripes(values, width):
    return np.floor((values - values.min()) / width).astype(np.int64)


def marginal_points(points: Sequence[BraillePoint], side: str, delta_s: float) -> List[BraillePoint]:
    """Extremal point of every ``delta_s``-wide stripe on one side of the cloud.

    Stripes run vertically for the upper/lower sides and horizontally for the
    left/right sides, anchored at the smallest coordinate.  Ties go to the
    smaller x, then the smaller y.
    """
    if side not in SIDES:
        raise ValueError(f"unknown side {side!r}")
    if not points:
        raise ValueError("no points")
    if delta_s <= 0:
        raise ValueError("delta_s must be positive")
    xs, ys = _coords(points)
    if side in HORIZONTAL_SIDES:
        stripe = _stripes(xs, delta_s)
        primary = ys if side == "upper" else -ys
    else:
        stripe = _stripes(ys, delta_s)
        primary = xs if side == "left" else -xs
    order = np.lexsort((ys, xs, primary, stripe))
    first = np.ones(len(order), dtype=bool)
    first[1:] = stripe[order][1:] != stripe[order][:-1]
    return [points[i] for i in order[first]]


def _line_fit(u, v):
    a = np.vstack([u, np.ones_like(u)]).T
    (slope, intercept), *_ = np.linalg.lstsq(a, v, rcond=None)
    return float(slope), float(intercept)


def fit_margin_line(marginals: Sequence[BraillePoint], side: str, delta_s: float) -> MarginLine:
    """Thick line of width ``delta_s`` through the most marginal points.

    Every line through a pair of points (plus the axis-parallel line through
    each point) is a candidate; the one with the most points within
    ``delta_s / 2`` wins, ties going to the smaller sum of squared distances.
    Only candidates leaving at most ``max(1, OUTSIDE_FRACTION * k)`` points
    beyond them on the outer side compete, so a dense inner row cannot
    outvote a sparse outermost one while a stray speck is still tolerated.
    The axis-parallel line through the most extreme point always qualifies.
    The winner is refined by least squares over its inliers; ``support`` is
    the size of that inlier set.
    """
    if not marginals:
        raise ValueError("no marginal points")
    xs, ys = _coords(marginals)
    u, v = (xs, ys) if side in HORIZONTAL_SIDES else (ys, xs)
    k = len(u)
    if k == 1:
        return MarginLine(side, 0.0, float(v[0]), delta_s, 1)

    i, j = np.triu_indices(k, 1)
    du = u[j] - u[i]
    ok = du != 0
    ui, vi = u[i][ok], v[i][ok]
    with np.errstate(over="ignore"):
        pair_slopes = (v[j][ok] - vi) / du[ok]
    keep = np.abs(pair_slopes) <= MAX_SLOPE
    pair_slopes = pair_slopes[keep]
    slopes = np.concatenate([pair_slopes, np.zeros(k)])
    intercepts = np.concatenate([vi[keep] - pair_slopes * ui[keep], v])

    signed = v[None, :] - (slopes[:, None] * u[None, :] + intercepts[:, None])
    signed /= np.sqrt(1.0 + slopes ** 2)[:, None]
    dist = np.abs(signed)
    inliers = dist <= delta_s / 2 + 1e-9
    # a margin must bound the cloud
    outward = 1.0 if side in ("lower", "right") else -1.0
    outside = (outward * signed > delta_s / 2 + 1e-9).sum(axis=1)
    counts = inliers.sum(axis=1)
    allowed = outside <= max(1, int(OUTSIDE_FRACTION * k))
    sse = np.where(inliers, dist ** 2, 0.0).sum(axis=1)
    best = int(np.lexsort((np.arange(len(counts)), sse, -counts, ~allowed))[0])
    mask = inliers[best]
    support = int(counts[best])
    slope, intercept = float(slopes[best]), float(intercepts[best])
    if len(np.unique(u[mask])) >= 2:
        slope, intercept = _line_fit(u[mask], v[mask])
    return MarginLine(side, slope, intercept, delta_s, support)


def structure_origin_and_rotation(upper: MarginLine, lower: MarginLine, left: MarginLine, right: MarginLine):
    """Start point (upper/left intersection) and mean rotation of the four lines."""
    denom = 1.0 - upper.slope * left.slope
    if abs(denom) < 1e-12:
        raise StructureError("upper and left margin lines are parallel")
    y0 = (upper.slope * left.intercept + upper.intercept) / denom
    x0 = left.slope * y0 + left.intercept
    theta = sum(line.angle for line in (upper, lower, left, right)) / 4
    return (x0, y0), theta


def _round_half_up(x):
    return int(math.floor(x + 0.5))


def peer_distance_histogram(marginals: Sequence[BraillePoint], axis: str) -> np.ndarray:
    """Counts of rounded distances between neighbours sorted along ``axis``."""
    if len(marginals) < 2:
        raise ValueError("need at least two marginal points")
    if axis not in ("horizontal", "vertical"):
        raise ValueError(f"unknown axis {axis!r}")
    xs, ys = _coords(marginals)
    values = np.sort(xs if axis == "horizontal" else ys)
    gaps = np.floor(np.diff(values) + 0.5).astype(np.int64)
    return np.bincount(gaps).astype(float)


def running_mean(freq, n: int) -> np.ndarray:
    """Centered ``n``-point moving average; the window shrinks at the ends."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"window must be odd and >= 1, got {n}")
    f = np.asarray(freq, dtype=float)
    if n == 1 or f.size == 0:
        return f.copy()
    r = n // 2
    csum = np.concatenate([[0.0], np.cumsum(f)])
    idx = np.arange(f.size)
    lo = np.maximum(idx - r, 0)
    hi = np.minimum(idx + r + 1, f.size)
    return (csum[hi] - csum[lo]) / (hi - lo)


def find_peaks(smoothed):
    """Local maxima (plateaus collapse to their midpoint) with their curvature.

    The curvature of a plateau ``[i, j]`` is ``f(i-1) - 2 f(i) + f(j+1)``.
    Index 0 (coincident points) is never a peak.  Returned strongest first.
    """
    f = np.asarray(smoothed, dtype=float)
    peaks = []
    i = 1
    n = f.size
    while i < n:
        if f[i] <= 0:
            i += 1
            continue
        j = i
        while j + 1 < n and f[j + 1] == f[i]:
            j += 1
        left = f[i - 1]
        right = f[j + 1] if j + 1 < n else 0.0
        if f[i] > left and f[i] > right:
            peaks.append(((i + j) / 2, left - 2 * f[i] + right))
        i = j + 1
    peaks.sort(key=lambda p: (p[1], p[0]))
    return peaks


def extract_two_pitches(smoothed):
    """The two strongest-curvature peaks, returned as ``(small, large)``."""
    peaks = find_peaks(smoothed)
    if len(peaks) < 2:
        dominant = peaks[0][0] if peaks else None
        raise PitchExtractionError("fewer than two peaks in peer distances", dominant)
    a, b = peaks[0][0], peaks[1][0]
    return (a, b) if a < b else (b, a)


def _pitches(points, side, axis, delta_s, smoothing):
    marg = marginal_points(points, side, delta_s)
    freq = peer_distance_histogram(marg, axis) if len(marg) >= 2 else np.zeros(1)
    # two dot centres closer than a dot diameter are one column seen twice
    freq[:min(int(math.ceil(delta_s)), freq.size)] = 0
    smoothed = running_mean(np.pad(freq, (0, smoothing)), smoothing)
    peaks = find_peaks(smoothed)
    try:
        return extract_two_pitches(smoothed), None, peaks, marg
    except PitchExtractionError as exc:
        return None, exc.dominant, peaks, marg


def count_from_extent(extent, size, gap):
    """Number of items of ``size`` separated by ``gap`` spanning ``extent``."""
    if size + gap <= 0:
        return 1
    return max(1, _round_half_up((extent + gap) / (size + gap)))


def _derotate(xs, ys, origin, theta):
    c, s = math.cos(theta), math.sin(theta)
    dx, dy = xs - origin[0], ys - origin[1]
    return dx * c + dy * s, -dx * s + dy * c


def _assign(coord, offset, pit, adv, slots):
    best_res = np.full(coord.shape, np.inf)
    best_k = np.zeros(coord.shape)
    best_slot = np.zeros(coord.shape)
    for slot in range(slots):
        k = np.floor((coord - offset - slot * pit) / adv + 0.5)
        res = coord - offset - k * adv - slot * pit
        better = np.abs(res) < np.abs(best_res)
        best_res = np.where(better, res, best_res)
        best_k = np.where(better, k, best_k)
        best_slot = np.where(better, slot, best_slot)
    return best_res, best_k, best_slot


def _best_phase(coord, pitch, advance, slots, tol, step=0.5):
    """Lattice offset in ``[0, advance)`` that puts the most points within ``tol``.

    Ties go to the smaller total residual, then the smaller offset.
    """
    offsets = np.arange(0.0, advance, step)[:, None]
    res, _, _ = _assign(coord[None, :], offsets, pitch, advance, slots)
    inside = np.abs(res) <= tol
    counts = inside.sum(axis=1)
    spread = np.where(inside, np.abs(res), 0.0).sum(axis=1)
    best = np.lexsort((offsets[:, 0], spread, -counts))[0]
    return float(offsets[best, 0])


def _lattice_support(coord, pitch, gap, slots, tol):
    """Points within ``tol`` of the lattice grown from ``(pitch, gap)``.

    The lattice is refined first so a peak a pixel or two off is judged by
    the lattice it leads to, not by its own drift over the page.
    """
    fit = _refine_axis(coord, pitch, gap, slots, tol)
    if fit is None:
        offset = _best_phase(coord, pitch, (slots - 1) * pitch + gap, slots, tol)
    else:
        offset, pitch, gap = fit
    advance = (slots - 1) * pitch + gap
    res, _, _ = _assign(coord, offset, pitch, advance, slots)
    return int(np.count_nonzero(np.abs(res) <= tol))


def choose_pitch_pair(pair, peaks, coord, slots, delta_s, top=PEAK_CANDIDATES):
    """The ``(pitch, gap)`` reading of the strongest peaks that fits most points.

    Besides the two strongest peaks, any pair among the first ``top`` is tried,
    both as ``(pitch, gap)`` and with the larger peak taken as the gap plus
    one or more dot pitches, as happens when the dot rows or columns next to
    the gap are empty.  An alternative must keep the gap wider than the pitch by half a
    dot, as Braille cells are spaced wider than their dots; otherwise a
    nearly uniform lattice would always catch more points.  The two strongest peaks win
    unless another reading places strictly more points on its lattice.
    """
    coord = np.asarray(coord, dtype=float)
    tol = delta_s / 2
    best, best_support = pair, _lattice_support(coord, pair[0], pair[1], slots, tol)
    spots = sorted(p[0] for p in peaks[:top])
    for i, a in enumerate(spots):
        for b in spots[i + 1:]:
            for cand in [(a, b)] + [(a, b - j * a) for j in range(1, slots)]:
                if cand == tuple(best) or cand[0] < delta_s or cand[1] < cand[0] + tol:
                    continue
                support = _lattice_support(coord, cand[0], cand[1], slots, tol)
                if support > best_support:
                    best, best_support = cand, support
    return (float(best[0]), float(best[1]))


def _refine_axis(coord, pitch, gap, slots, tol):
    """Least-squares fit ``coord = offset + k * advance + slot * pitch``.

    ``slots`` is the number of dot positions along the axis within one cell
    (2 across, 3 down).  Returns ``(offset, pitch, gap)`` or ``None`` when the
    assignment does not pin all three unknowns.
    """
    advance = (slots - 1) * pitch + gap
    if advance <= 0 or pitch <= 0:
        return None
    coord = np.asarray(coord, dtype=float)
    offset, pit, adv = _best_phase(coord, pitch, advance, slots, tol), pitch, advance
    # a pitch error grows with the distance from the origin, so the fit
    # starts on the first two cells and doubles its reach each round
    reach = 2 * advance
    far = float(np.abs(coord).max()) if coord.size else 0.0
    fitted = False
    while True:
        near = np.abs(coord - offset) <= reach
        mask = None
        for _ in range(MAX_REFINE_ITERATIONS):
            res, k, slot = _assign(coord, offset, pit, adv, slots)
            new_mask = near & (np.abs(res) <= tol)
            if mask is not None and np.array_equal(new_mask, mask):
                break
            mask = new_mask
            a = np.vstack([np.ones(mask.sum()), k[mask], slot[mask]]).T
            if mask.sum() < 3 or np.linalg.matrix_rank(a) < 3:
                break
            (o, ad, pt), *_ = np.linalg.lstsq(a, coord[mask], rcond=None)
            if pt <= 0 or ad <= (slots - 1) * pt:
                break
            offset, adv, pit = float(o), float(ad), float(pt)
            fitted = True
        if reach >= far + advance:
            break
        reach *= 2
    if not fitted:
        return None
    new_gap = adv - (slots - 1) * pit
    if abs(pit - pitch) > tol or abs(new_gap - gap) > tol:
        return None
    return float(offset), float(pit), float(new_gap)


def _span(line_a: MarginLine, line_b: MarginLine, t):
    """Perpendicular distance from ``line_a`` at abscissa ``t`` to ``line_b``."""
    x, y = line_a.at(t)
    return float(line_b.distance(x, y))


def consensus_rotation(lines, tol=None):
    """Mean angle of the largest group of margin lines that agree.

    A short first or last line or a ragged edge bends its margin line away
    from the writing direction; such a line is left out of the mean.  Each
    angle in turn gathers the angles within ``tol`` of it; the biggest group
    wins, ties going to the tighter one and then the one nearer level.  When every line agrees this is the
    plain mean of the four angles.
    """
    tol = ANGLE_TOLERANCE if tol is None else tol
    angles = np.array([line.angle for line in lines])
    best = None
    for a in angles:
        keep = np.abs(angles - a) <= tol
        spread = float(np.ptp(angles[keep]))
        key = (-int(keep.sum()), spread, abs(float(angles[keep].mean())))
        if best is None or key < best[0]:
            best = (key, keep)
    keep = best[1]
    return float(angles[keep].mean()), [line.side for line, k in zip(lines, keep) if not k]


def _lattice(coord, offset, pitch, gap, slots, tol):
    """Lattice position of every coordinate and the mask of those within ``tol``."""
    adv = (slots - 1) * pitch + gap
    res, k, slot = _assign(coord, offset, pitch, adv, slots)
    return k * adv + slot * pitch, np.abs(res) <= tol


def _rotation_correction(us, vs, h, v, tol):
    """Small extra rotation that best aligns the points with the fitted lattice."""
    a, ma = _lattice(us, h[0], h[1], h[2], 2, tol)
    b, mb = _lattice(vs, v[0], v[1], v[2], 3, tol)
    mask = ma & mb
    if mask.sum() < 3:
        return 0.0
    a, b = a[mask], b[mask]
    # v - b ~ eps * a + c_v and u - a ~ -eps * b + c_u
    n = int(mask.sum())
    design = np.zeros((2 * n, 3))
    design[:n, 0], design[:n, 1] = a, 1.0
    design[n:, 0], design[n:, 2] = -b, 1.0
    target = np.concatenate([vs[mask] - v[0] - b, us[mask] - h[0] - a])
    if np.linalg.matrix_rank(design) < 3:
        return 0.0
    (eps, _, _), *_ = np.linalg.lstsq(design, target, rcond=None)
    return float(eps)


def _first_slot(coord, offset, pitch, gap, slots, tol):
    """Coordinate of the first occupied cell's first dot slot.

    With a lattice (``offset`` given) this is the lattice origin moved to the
    lowest cell index any dot sits in, so a sparse first line or column
    cannot push the start point inwards.  Without one it is the smallest
    coordinate.
    """
    if offset is None:
        return float(coord.min())
    adv = (slots - 1) * pitch + gap
    res, k, slot = _assign(coord, offset, pitch, adv, slots)
    inside = np.abs(res) <= tol
    if not inside.any():
        return float(coord.min())
    # the cell holding the lowest occupied slot; with no gap the last slot of
    # one cell and the first of the next coincide and the later cell wins
    first = (k * adv + slot * pitch)[inside].min()
    return float(offset + math.floor(first / adv + 1e-9) * adv)


def estimate_structure(points: Sequence[BraillePoint], delta_s: float, *,
                       smoothing: int = DEFAULT_SMOOTHING, refine: bool = True) -> BrailleStructure:
    """Recover origin, rotation, cell geometry and page capacity.

    Margin lines give the start point and rotation.  Peer distances of the
    upper and left marginal points, taken in the derotated frame, give the
    horizontal pitches (``char_width``, ``char_gap``) and the vertical ones
    (row pitch, ``line_gap``).  With ``refine`` the pitches, origin and
    rotation are then polished by a least-squares lattice fit over every
    point.  Text width and height are measured from the start point to the
    farthest dot center along each axis.
    """
    points = list(points)
    if not points:
        raise StructureError("no Braille points")
    if delta_s <= 0:
        raise StructureError("delta_s must be positive")
    xs, ys = _coords(points)

    lines = {}
    marginals = {}
    for side in SIDES:
        marginals[side] = marginal_points(points, side, delta_s)
        lines[side] = fit_margin_line(marginals[side], side, delta_s)
    (x0, y0), mean_theta = structure_origin_and_rotation(
        lines["upper"], lines["lower"], lines["left"], lines["right"])
    theta, outliers = consensus_rotation([lines[side] for side in SIDES])
    if not abs(theta) < MAX_ROTATION:
        raise StructureError(f"writing rotation {math.degrees(theta):.2f} deg is out of range")

    us, vs = _derotate(xs, ys, (x0, y0), theta)
    flat = [BraillePoint(float(a), float(b), p.diameter) for a, b, p in zip(us, vs, points)]
    h_pair, h_dom, h_peaks, _ = _pitches(flat, "upper", "horizontal", delta_s, smoothing)
    v_pair, v_dom, v_peaks, _ = _pitches(flat, "left", "vertical", delta_s, smoothing)
    fallback = []

    if h_pair is None and v_pair is None and h_dom is None and v_dom is None:
        # a lone dot or a single dot row: nothing to measure, assume a
        # customary pitch so the one cell can still be read
        col_pitch = row_pitch = DEFAULT_PITCH_RATIO * delta_s
        char_gap = line_gap = 0.0
        fallback += ["horizontal", "vertical"]
    if h_pair is not None:
        col_pitch, char_gap = choose_pitch_pair(h_pair, h_peaks, us, 2, delta_s)
    if v_pair is not None:
        row_pitch, line_gap = choose_pitch_pair(v_pair, v_peaks, vs, 3, delta_s)
    if h_pair is None and "horizontal" not in fallback:
        # single peak: either intra-cell pitch only (one cell per line) or
        # cell spacing with one dot column populated
        ref = row_pitch if v_pair is not None else v_dom
        if h_dom is None:
            col_pitch, char_gap = ref, 0.0
        elif ref is None or abs(h_dom - ref) <= delta_s / 2:
            col_pitch, char_gap = h_dom, 0.0
        else:
            col_pitch, char_gap = ref, max(0.0, h_dom - ref)
        fallback.append("horizontal")
    if v_pair is None and "vertical" not in fallback:
        if v_dom is None or abs(v_dom - col_pitch) <= delta_s / 2:
            row_pitch, line_gap = (v_dom if v_dom is not None else col_pitch), 0.0
        else:
            row_pitch, line_gap = col_pitch, max(0.0, v_dom - 2 * col_pitch)
        fallback.append("vertical")

    raw = {"horizontal": (col_pitch, char_gap), "vertical": (row_pitch, line_gap)}
    refined = {}
    tol = delta_s / 2
    hx = vx = None
    if refine:
        # each round starts from the previous round's lattice so a slight
        # change of rotation cannot flip the phase search to another column
        h_start, v_start = (col_pitch, char_gap), (row_pitch, line_gap)
        for rnd in range(ROTATION_ROUNDS + 1):
            us, vs = _derotate(xs, ys, (x0, y0), theta)
            hx = _refine_axis(us, *h_start, 2, tol)
            vx = _refine_axis(vs, *v_start, 3, tol)
            if rnd == ROTATION_ROUNDS or hx is None or vx is None:
                break
            h_start, v_start = hx[1:], vx[1:]
            eps = _rotation_correction(us, vs, hx, vx, tol)
            if abs(eps) < 1e-6 or abs(theta + eps) >= MAX_ROTATION:
                break
            theta += eps
    us, vs = _derotate(xs, ys, (x0, y0), theta)
    # a fallback axis lends its lattice to the origin but keeps its pitches
    if hx is not None and "horizontal" not in fallback:
        col_pitch, char_gap = hx[1], hx[2]
        refined["horizontal"] = hx
    if vx is not None and "vertical" not in fallback:
        row_pitch, line_gap = vx[1], vx[2]
        refined["vertical"] = vx
    off_u = _first_slot(us, hx[0] if hx else None, col_pitch, char_gap, 2, tol)
    off_v = _first_slot(vs, vx[0] if vx else None, row_pitch, line_gap, 3, tol)
    c, s = math.cos(theta), math.sin(theta)
    x0, y0 = x0 + off_u * c - off_v * s, y0 + off_u * s + off_v * c

    char_width = col_pitch
    char_height = 2 * row_pitch
    text_width = float(us.max() - off_u)
    text_height = float(vs.max() - off_v)
    n_l = count_from_extent(text_width, char_width, char_gap)
    l_t = count_from_extent(text_height, char_height, line_gap)

    extra = h_peaks[2:] + v_peaks[2:]
    diagnostics = {
        "margin_lines": lines,
        "marginal_points": marginals,
        "mean_rotation": mean_theta,
        "rotation_outliers": outliers,
        "raw_pitches": raw,
        "refined": refined,
        "fallback": fallback,
        "extra_peaks": extra,
        "text_width": text_width,
        "text_height": text_height,
        "margin_width": _span(lines["left"], lines["right"], float(ys.mean())),
        "margin_height": _span(lines["upper"], lines["lower"], float(xs.mean())),
    }
    return BrailleStructure(
        p0_x=float(x0), p0_y=float(y0), theta_b=float(theta),
        char_width=float(char_width), char_height=float(char_height),
        char_gap=float(char_gap), line_gap=float(line_gap),
        chars_per_line=n_l, line_count=l_t, delta_s=float(delta_s),
        diagnostics=diagnostics,
    )
