"""Independent reference implementations used to check the package."""

from collections import deque
from fractions import Fraction
from itertools import accumulate

import numpy as np


def otsu_exhaustive(hist):
    """Scan every t in [0, 255]; class 0 is ``<= t``; smallest maximizer wins.

    The scan is limited to the occupied span like the implementation's
    documented convention, so a lone spike at ``b`` yields ``b``.  Variances
    are exact: w0 w1 (mu0 - mu1)^2 = (N s0 - n0 S)^2 / (N^2 n0 n1).
    """
    hist = [int(h) for h in hist]
    nz = [i for i, h in enumerate(hist) if h]
    lo, hi = nz[0], nz[-1]
    total = sum(hist)
    moment = sum(i * h for i, h in enumerate(hist))
    counts = list(accumulate(hist))
    sums = list(accumulate(i * h for i, h in enumerate(hist)))
    best_t, best = None, None
    for t in range(lo, hi + 1):
        n0, s0 = counts[t], sums[t]
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            var = Fraction(0)
        else:
            var = Fraction((total * s0 - n0 * moment) ** 2, total * total * n0 * n1)
        if best is None or var > best:
            best_t, best = t, var
    return best_t


def flood_fill_partition(img):
    """Set of frozensets of pixel coordinates, one per 8-connected component."""
    img = np.asarray(img, dtype=bool)
    h, w = img.shape
    seen = np.zeros_like(img)
    parts = set()
    for y in range(h):
        for x in range(w):
            if not img[y, x] or seen[y, x]:
                continue
            comp = []
            queue = deque([(y, x)])
            seen[y, x] = True
            while queue:
                cy, cx = queue.popleft()
                comp.append((cy, cx))
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        ny, nx = cy + dy, cx + dx
                        if 0 <= ny < h and 0 <= nx < w and img[ny, nx] and not seen[ny, nx]:
                            seen[ny, nx] = True
                            queue.append((ny, nx))
            parts.add(frozenset(comp))
    return parts


def label_partition(labels):
    parts = {}
    for (y, x), v in np.ndenumerate(labels):
        if v:
            parts.setdefault(v, []).append((y, x))
    return {frozenset(p) for p in parts.values()}


def median_brute(img, window):
    img = np.asarray(img)
    r = window // 2
    pad = np.pad(img, r, mode="edge")
    out = np.empty_like(img)
    for y in range(img.shape[0]):
        for x in range(img.shape[1]):
            out[y, x] = int(np.median(pad[y:y + window, x:x + window]))
    return out


def close_brute(img, r):
    """Dilate then erode on an unbounded background plane, by definition."""
    img = np.asarray(img, dtype=bool)
    h, w = img.shape
    big = np.zeros((h + 4 * r, w + 4 * r), dtype=bool)
    big[2 * r:2 * r + h, 2 * r:2 * r + w] = img
    H, W = big.shape
    dil = np.zeros_like(big)
    for y in range(H):
        for x in range(W):
            dil[y, x] = big[max(y - r, 0):y + r + 1, max(x - r, 0):x + r + 1].any()
    ero = np.zeros_like(big)
    for y in range(H):
        for x in range(W):
            win = dil[y - r:y + r + 1, x - r:x + r + 1] if y >= r and x >= r else None
            ero[y, x] = win is not None and win.shape == (2 * r + 1, 2 * r + 1) and win.all()
    return ero[2 * r:2 * r + h, 2 * r:2 * r + w]


def bbhe_direct(values):
    """Bi-histogram equalization by explicit per-half CDFs in exact rationals."""
    values = [int(v) for v in values]
    m = sum(values) // len(values)
    out = {}
    for lo, hi in ((0, m), (m + 1, 255)):
        half = sorted(v for v in values if lo <= v <= hi)
        if len(set(half)) <= 1:
            for v in half:
                out[v] = v
            continue
        n = len(half)
        for v in set(half):
            cdf = sum(1 for u in half if u <= v)
            out[v] = lo + int(Fraction((hi - lo) * cdf, n) + Fraction(1, 2))
    return [out[v] for v in values]
