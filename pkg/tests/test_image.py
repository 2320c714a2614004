import numpy as np
import pytest
from PIL import Image

from brailletext.errors import ImageFormatError
from brailletext.image import BinaryImage, GrayImage, binary_to_gray, load_gray, luma, save_gray


def write_p5(path, w, h, values, maxval=255):
    body = bytes(values) if maxval < 256 else np.asarray(values, ">u2").tobytes()
    path.write_bytes(b"P5\n%d %d\n%d\n" % (w, h, maxval) + body)


def test_load_single_pixel(tmp_path):
    p = tmp_path / "one.pgm"
    write_p5(p, 1, 1, [77])
    img = load_gray(p)
    assert (img.width, img.height, img.pixels.tolist()) == (1, 1, [77])


def test_load_row_major(tmp_path):
    p = tmp_path / "four.pgm"
    write_p5(p, 2, 2, [0, 255, 128, 7])
    img = load_gray(p)
    assert img.pixels.tolist() == [0, 255, 128, 7]
    assert img.data[1, 0] == 128


def test_header_comments_and_16_bit(tmp_path):
    p = tmp_path / "c.pgm"
    p.write_bytes(b"P5\n# scanner\n2 1\n255\n\x05\x06")
    assert load_gray(p).pixels.tolist() == [5, 6]
    q = tmp_path / "d.pgm"
    write_p5(q, 2, 1, [0x1234, 0xFFFF], maxval=65535)
    assert load_gray(q).pixels.tolist() == [0x12, 0xFF]


def test_rgb_luma(tmp_path):
    assert luma(np.array([100, 100, 100])) == 100
    assert luma(np.array([10, 20, 31])) == (10 + 40 + 31) // 4
    p = tmp_path / "rgb.png"
    Image.fromarray(np.full((2, 3, 3), [100, 100, 100], dtype=np.uint8)).save(p)
    img = load_gray(p)
    assert img.pixels.tolist() == [100] * 6 and (img.width, img.height) == (3, 2)


def test_png_gray_roundtrip(tmp_path):
    img = GrayImage.from_pixels(3, 2, [0, 50, 100, 150, 200, 250])
    p = tmp_path / "ramp.png"
    save_gray(img, p)
    assert load_gray(p) == img


@pytest.mark.parametrize("w,h,values", [(3, 2, [0, 50, 100, 150, 200, 250]), (1, 1, [9])])
def test_pgm_roundtrip(tmp_path, w, h, values):
    img = GrayImage.from_pixels(w, h, values)
    p = tmp_path / "x.pgm"
    save_gray(img, p)
    assert load_gray(p) == img


def test_random_roundtrip(tmp_path):
    rng = np.random.default_rng(1)
    for k in range(10):
        h, w = rng.integers(1, 40, 2)
        img = GrayImage(rng.integers(0, 256, (h, w), dtype=np.uint8))
        for ext in (".pgm", ".png"):
            p = tmp_path / f"r{k}{ext}"
            save_gray(img, p)
            assert load_gray(p) == img


def test_errors(tmp_path):
    with pytest.raises(ImageFormatError):
        load_gray(tmp_path / "missing.pgm")
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P5\n0 3\n255\n")
    with pytest.raises(ImageFormatError):
        load_gray(bad)
    junk = tmp_path / "junk.png"
    junk.write_bytes(b"not an image")
    with pytest.raises(ImageFormatError):
        load_gray(junk)
    short = tmp_path / "short.pgm"
    short.write_bytes(b"P5\n4 4\n255\n\x00\x01")
    with pytest.raises(ImageFormatError):
        load_gray(short)


def test_constructor_checks():
    with pytest.raises(ValueError):
        GrayImage(np.zeros((0, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        GrayImage.from_pixels(2, 2, [1, 2, 3])
    with pytest.raises(ValueError):
        GrayImage(np.array([[300]]))


def test_binary_to_gray():
    assert binary_to_gray(BinaryImage(np.zeros((2, 2), bool))).pixels.tolist() == [255] * 4
    assert binary_to_gray(BinaryImage(np.ones((2, 2), bool))).pixels.tolist() == [0] * 4
    assert binary_to_gray(BinaryImage(np.array([[True, False]]))).pixels.tolist() == [0, 255]


def test_images_are_immutable():
    img = GrayImage.from_pixels(2, 1, [1, 2])
    with pytest.raises(ValueError):
        img.data[0, 0] = 5
