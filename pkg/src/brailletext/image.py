"""Raster types and image file I/O.

Both raster types wrap a read-only 2D numpy array indexed ``[y, x]`` with the
origin at the top-left corner.  P5 graymaps are read and written natively;
everything else goes through Pillow.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

import numpy as np

from .errors import ImageFormatError


def _freeze(arr):
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit single channel image; ``data`` has shape ``(height, width)``."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2D array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image dimensions must be at least 1x1")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("gray values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        object.__setattr__(self, "data", _freeze(arr))

    @classmethod
    def from_pixels(cls, width, height, pixels):
        arr = np.asarray(pixels, dtype=np.int64)
        if arr.size != width * height:
            raise ValueError(f"{arr.size} pixels for a {width}x{height} image")
        return cls(arr.reshape(height, width))

    @property
    def width(self):
        return self.data.shape[1]

    @property
    def height(self):
        return self.data.shape[0]

    @property
    def pixels(self):
        """Row-major flat view of the intensities."""
        return self.data.ravel()

    def histogram(self):
        return np.bincount(self.data.ravel(), minlength=256)

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self.data, other.data)


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Boolean raster; ``True`` always means dot ink."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2D array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image dimensions must be at least 1x1")
        object.__setattr__(self, "data", _freeze(arr.astype(bool, copy=False)))

    @classmethod
    def blank(cls, width, height):
        return cls(np.zeros((height, width), dtype=bool))

    @property
    def width(self):
        return self.data.shape[1]

    @property
    def height(self):
        return self.data.shape[0]

    @property
    def pixels(self):
        return self.data.ravel()

    def count(self):
        return int(self.data.sum())

    def __eq__(self, other):
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return np.array_equal(self.data, other.data)


def binary_to_gray(img: BinaryImage) -> GrayImage:
    """Render foreground black on white."""
    return GrayImage(np.where(img.data, 0, 255).astype(np.uint8))


def luma(rgb):
    """Integer (1, 2, 1) / 4 luma of an ``(..., 3)`` array."""
    rgb = np.asarray(rgb, dtype=np.uint32)
    return ((rgb[..., 0] + 2 * rgb[..., 1] + rgb[..., 2]) // 4).astype(np.uint8)


_PNM_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n?)*(\S+)")


def _read_pgm(raw):
    pos = 2
    fields = []
    for _ in range(3):
        m = _PNM_TOKEN.match(raw, pos)
        if m is None:
            raise ImageFormatError("truncated PGM header")
        fields.append(m.group(1))
        pos = m.end()
    try:
        width, height, maxval = (int(f) for f in fields)
    except ValueError:
        raise ImageFormatError("malformed PGM header") from None
    if width < 1 or height < 1:
        raise ImageFormatError(f"zero-dimension image ({width}x{height})")
    if not 0 < maxval < 65536:
        raise ImageFormatError(f"invalid PGM maxval {maxval}")
    # exactly one whitespace byte separates the header from the raster
    pos += 1
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
    need = width * height * dtype.itemsize
    body = raw[pos:pos + need]
    if len(body) != need:
        raise ImageFormatError("truncated PGM raster")
    arr = np.frombuffer(body, dtype=dtype).reshape(height, width)
    if maxval > 255:
        arr = arr >> 8
    return arr.astype(np.uint8)


def _read_with_pillow(path):
    from PIL import Image, UnidentifiedImageError

    try:
        with Image.open(path) as im:
            im.load()
            if im.width < 1 or im.height < 1:
                raise ImageFormatError(f"zero-dimension image ({im.width}x{im.height})")
            if im.mode == "L":
                return np.asarray(im, dtype=np.uint8)
            if im.mode in ("I;16", "I;16B", "I;16L", "I"):
                arr = np.asarray(im).astype(np.int64)
                return (np.clip(arr, 0, 65535) >> 8).astype(np.uint8)
            if im.mode == "1":
                return np.where(np.asarray(im), 255, 0).astype(np.uint8)
            if im.mode == "LA":
                return np.asarray(im.getchannel("L"), dtype=np.uint8)
            return luma(np.asarray(im.convert("RGB")))
    except UnidentifiedImageError:
        raise ImageFormatError(f"unsupported image format: {path}") from None


def load_gray(path) -> GrayImage:
    """Load an image file as 8-bit grayscale.

    Color inputs go through the integer luma rule; 16-bit inputs are narrowed
    by a right shift of 8.
    """
    try:
        with open(path, "rb") as fh:
            head = fh.read(2)
            if head == b"P5":
                return GrayImage(_read_pgm(head + fh.read()))
    except OSError as exc:
        raise ImageFormatError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return GrayImage(_read_with_pillow(path))


def save_gray(img: GrayImage, path) -> None:
    """Write ``img`` as P5 unless the suffix names another Pillow format."""
    ext = os.path.splitext(str(path))[1].lower()
    if ext in ("", ".pgm", ".pnm"):
        header = b"P5\n%d %d\n255\n" % (img.width, img.height)
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(img.data.tobytes())
        return
    from PIL import Image

    Image.fromarray(np.array(img.data)).save(path)


def save_rgb(arr, path) -> None:
    """Write an ``(h, w, 3)`` uint8 array; used for diagnostic overlays."""
    from PIL import Image

    Image.fromarray(np.ascontiguousarray(arr, dtype=np.uint8)).save(path)
