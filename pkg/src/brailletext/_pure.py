"""Numpy / pure-Python pixel kernels.

Reference implementations of the hot loops; ``_speedups`` must agree with them
bit for bit.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def median_filter(arr, window):
    """Median over a ``window x window`` square with edge replication."""
    arr = np.asarray(arr, dtype=np.uint8)
    if window == 1:
        return arr.copy()
    r = window // 2
    padded = np.pad(arr, r, mode="edge")
    views = sliding_window_view(padded, (window, window))
    flat = views.reshape(arr.shape[0], arr.shape[1], window * window)
    mid = (window * window) // 2
    return np.partition(flat, mid, axis=2)[:, :, mid].copy()


def _box_rows(arr, r, reduce):
    w = arr.shape[1]
    padded = np.zeros((arr.shape[0], w + 2 * r), dtype=bool)
    padded[:, r:r + w] = arr
    out = padded[:, 0:w].copy()
    for k in range(1, 2 * r + 1):
        reduce(out, padded[:, k:k + w], out=out)
    return out


def dilate(arr, radius):
    """Square dilation; pixels outside the image are background."""
    arr = np.asarray(arr, dtype=bool)
    if radius == 0:
        return arr.copy()
    tmp = _box_rows(arr, radius, np.logical_or)
    return _box_rows(tmp.T, radius, np.logical_or).T.copy()


def erode(arr, radius):
    """Square erosion; pixels outside the image are background."""
    arr = np.asarray(arr, dtype=bool)
    if radius == 0:
        return arr.copy()
    tmp = _box_rows(arr, radius, np.logical_and)
    return _box_rows(tmp.T, radius, np.logical_and).T.copy()


def _find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        parent[i], i = root, parent[i]
    return root


def label8(arr):
    """Two-pass run-based 8-connected labeling.

    Returns ``(labels, count)``; labels are 1..count, numbered by the raster
    position of each component's first pixel, 0 is background.
    """
    arr = np.asarray(arr, dtype=bool)
    h, w = arr.shape
    parent = [0]
    runs = []
    prev = []
    edges = np.zeros(w + 2, dtype=np.int8)
    for y in range(h):
        edges[1:-1] = arr[y]
        d = np.diff(edges)
        starts = np.flatnonzero(d == 1).tolist()
        ends = np.flatnonzero(d == -1).tolist()
        cur = []
        j = 0
        for s, e in zip(starts, ends):
            # previous-row runs ending left of s-1 can never touch later runs
            while j < len(prev) and prev[j][1] < s:
                j += 1
            lab = 0
            k = j
            while k < len(prev) and prev[k][0] <= e:
                other = _find(parent, prev[k][2])
                if lab == 0:
                    lab = other
                elif other != lab:
                    a, b = (lab, other) if lab < other else (other, lab)
                    parent[b] = a
                    lab = a
                k += 1
            if lab == 0:
                lab = len(parent)
                parent.append(lab)
            cur.append((s, e, lab))
            runs.append((y, s, e, lab))
        prev = cur

    final = [0] * len(parent)
    count = 0
    for i in range(1, len(parent)):
        root = _find(parent, i)
        if root == i:
            count += 1
            final[i] = count
        else:
            final[i] = final[root]
    labels = np.zeros((h, w), dtype=np.int32)
    for y, s, e, lab in runs:
        labels[y, s:e] = final[lab]
    return labels, count
