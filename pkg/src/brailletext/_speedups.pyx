# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pixel kernels; drop-in replacements for ``_pure``."""

import numpy as np
cimport numpy as cnp
from libc.string cimport memset

cnp.import_array()


def median_filter(arr, int window):
    """Median over a ``window x window`` square with edge replication.

    Huang's method: a 256-bin histogram slides along each row while the
    median and the count of pixels below it are updated incrementally.
    """
    arr = np.asarray(arr, dtype=np.uint8)
    if window == 1:
        return arr.copy()
    cdef int r = window // 2
    cdef const cnp.uint8_t[:, ::1] src = np.ascontiguousarray(np.pad(arr, r, mode="edge"))
    cdef Py_ssize_t h = arr.shape[0], w = arr.shape[1]
    out_arr = np.empty((h, w), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] out = out_arr
    cdef int rank = (window * window) // 2
    cdef int hist[256]
    cdef Py_ssize_t y, x, k
    cdef int v, med, below
    with nogil:
        for y in range(h):
            memset(hist, 0, sizeof(hist))
            for k in range(window):
                for x in range(window):
                    hist[src[y + k, x]] += 1
            med = 0
            below = 0
            while below + hist[med] <= rank:
                below += hist[med]
                med += 1
            out[y, 0] = med
            for x in range(1, w):
                for k in range(window):
                    v = src[y + k, x - 1]
                    hist[v] -= 1
                    if v < med:
                        below -= 1
                    v = src[y + k, x + window - 1]
                    hist[v] += 1
                    if v < med:
                        below += 1
                # median is the v with below <= rank < below + hist[v]
                while below > rank:
                    med -= 1
                    below -= hist[med]
                while below + hist[med] <= rank:
                    below += hist[med]
                    med += 1
                out[y, x] = med
    return out_arr


cdef void _box_row(const cnp.uint8_t* src, cnp.uint8_t* dst, Py_ssize_t n, int r,
                   bint want_all) noexcept nogil:
    # running count of foreground in [i-r, i+r]; out-of-range counts as background
    cdef Py_ssize_t i
    cdef int count = 0
    cdef int full = 2 * r + 1
    for i in range(r):
        if i < n and src[i]:
            count += 1
    for i in range(n):
        if i + r < n and src[i + r]:
            count += 1
        if i - r - 1 >= 0 and src[i - r - 1]:
            count -= 1
        dst[i] = count == full if want_all else count > 0


def _box(arr, int radius, bint want_all):
    src_arr = np.ascontiguousarray(arr, dtype=np.uint8)
    if radius == 0:
        return src_arr.astype(bool)
    cdef Py_ssize_t h = src_arr.shape[0], w = src_arr.shape[1], y, x
    tmp_arr = np.empty((h, w), dtype=np.uint8)
    out_arr = np.empty((h, w), dtype=np.uint8)
    count_arr = np.zeros(w, dtype=np.intc)
    cdef cnp.uint8_t[:, ::1] src = src_arr
    cdef cnp.uint8_t[:, ::1] tmp = tmp_arr
    cdef cnp.uint8_t[:, ::1] out = out_arr
    cdef int[::1] count = count_arr
    cdef int full = 2 * radius + 1
    with nogil:
        for y in range(h):
            _box_row(&src[y, 0], &tmp[y, 0], w, radius, want_all)
        # vertical pass: one running count per column, walked row by row
        for y in range(min(radius, h)):
            for x in range(w):
                count[x] += tmp[y, x]
        for y in range(h):
            if y + radius < h:
                for x in range(w):
                    count[x] += tmp[y + radius, x]
            if y - radius - 1 >= 0:
                for x in range(w):
                    count[x] -= tmp[y - radius - 1, x]
            if want_all:
                for x in range(w):
                    out[y, x] = count[x] == full
            else:
                for x in range(w):
                    out[y, x] = count[x] > 0
    return out_arr.view(bool)


def dilate(arr, int radius):
    """Square dilation; pixels outside the image are background."""
    return _box(arr, radius, False)


def erode(arr, int radius):
    """Square erosion; pixels outside the image are background."""
    return _box(arr, radius, True)


cdef inline Py_ssize_t _find(Py_ssize_t* parent, Py_ssize_t i) noexcept nogil:
    cdef Py_ssize_t root = i, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


cdef inline Py_ssize_t _union(Py_ssize_t* parent, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    a = _find(parent, a)
    b = _find(parent, b)
    if a < b:
        parent[b] = a
        return a
    parent[a] = b
    return b


def label8(arr):
    """Two-pass 8-connected labeling with union-find.

    Returns ``(labels, count)`` numbered by each component's first raster pixel.
    """
    cdef const cnp.uint8_t[:, ::1] img = np.ascontiguousarray(arr, dtype=np.uint8)
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    labels_arr = np.zeros((h, w), dtype=np.int32)
    cdef cnp.int32_t[:, ::1] lab = labels_arr
    # at most ceil(w/2) new provisional labels per row
    cdef Py_ssize_t cap = h * ((w + 1) // 2) + 2
    parent_arr = np.zeros(cap, dtype=np.intp)
    final_arr = np.zeros(cap, dtype=np.int32)
    cdef Py_ssize_t[::1] parent = parent_arr
    cdef cnp.int32_t[::1] final = final_arr
    cdef Py_ssize_t y, x, cur, nxt = 1, n
    with nogil:
        for y in range(h):
            for x in range(w):
                if not img[y, x]:
                    continue
                cur = 0
                if x > 0 and lab[y, x - 1]:
                    cur = lab[y, x - 1]
                if y > 0:
                    if x > 0 and lab[y - 1, x - 1]:
                        cur = _union(&parent[0], cur, lab[y - 1, x - 1]) if cur else lab[y - 1, x - 1]
                    if lab[y - 1, x]:
                        cur = _union(&parent[0], cur, lab[y - 1, x]) if cur else lab[y - 1, x]
                    if x + 1 < w and lab[y - 1, x + 1]:
                        cur = _union(&parent[0], cur, lab[y - 1, x + 1]) if cur else lab[y - 1, x + 1]
                if cur == 0:
                    cur = nxt
                    parent[nxt] = nxt
                    nxt += 1
                lab[y, x] = cur
        n = 0
        for x in range(1, nxt):
            if parent[x] == x:
                n += 1
                final[x] = n
            else:
                final[x] = final[_find(&parent[0], x)]
        for y in range(h):
            for x in range(w):
                if lab[y, x]:
                    lab[y, x] = final[lab[y, x]]
    return labels_arr, int(n)

