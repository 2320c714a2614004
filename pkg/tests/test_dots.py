import numpy as np
import pytest

from brailletext.dots import (BraillePoint, Component, accepted_band, connected_components,
                              detect_braille_points, diameter, filter_braille_points, is_circle,
                              standard_diameter)
from brailletext.errors import NoCircleCandidatesError
from brailletext.image import BinaryImage
from brailletext.preprocess import preprocess
from brailletext.synth import SynthSpec, render

from oracles import flood_fill_partition


def comp(w, h, label=1):
    return Component(label, 0, 0, w, h, w * h, (w - 1) / 2, (h - 1) / 2)


def disc(a, cx, cy, r):
    ys, xs = np.mgrid[:a.shape[0], :a.shape[1]]
    a[(xs - cx) ** 2 + (ys - cy) ** 2 <= r * r] = True


class TestComponents:
    def test_blank(self):
        assert connected_components(BinaryImage.blank(5, 4)) == []

    def test_square(self):
        a = np.zeros((6, 6), bool)
        a[1:4, 2:5] = True
        (c,) = connected_components(BinaryImage(a))
        assert (c.width, c.height, c.area) == (3, 3, 9)
        assert (c.centroid_x, c.centroid_y) == (3.0, 2.0)
        assert (c.bbox_x, c.bbox_y) == (2, 1)

    def test_diagonal_touch(self):
        a = np.array([[True, False], [False, True]])
        assert len(connected_components(BinaryImage(a))) == 1

    def test_raster_order_and_areas(self):
        rng = np.random.default_rng(8)
        a = rng.random((20, 20)) < 0.3
        comps = connected_components(BinaryImage(a))
        assert sum(c.area for c in comps) == a.sum()
        firsts = []
        for c in comps:
            assert 1 <= c.area <= c.width * c.height
            assert c.bbox_x <= c.centroid_x <= c.bbox_x + c.width - 1
            assert c.bbox_y <= c.centroid_y <= c.bbox_y + c.height - 1
        assert [c.label for c in comps] == list(range(1, len(comps) + 1))

    def test_partition_matches_flood_fill(self):
        from brailletext.dots import label_image
        from oracles import label_partition
        rng = np.random.default_rng(9)
        for _ in range(20):
            a = rng.random((16, 16)) < 0.45
            labels, _ = label_image(BinaryImage(a))
            assert label_partition(labels) == flood_fill_partition(a)


class TestEquations:
    @pytest.mark.parametrize("w,h,ok", [(10, 12, True), (5, 20, False), (1, 1, True), (12, 10, True)])
    def test_is_circle(self, w, h, ok):
        assert is_circle(comp(w, h)) is ok

    @pytest.mark.parametrize("w,h,d", [(10, 12, 11), (8, 8, 8), (9, 10, 9.5)])
    def test_diameter(self, w, h, d):
        assert diameter(comp(w, h)) == d

    @pytest.mark.parametrize("ds,expected", [([11], 11), ([8, 11, 30], 11), ([10, 12], 11)])
    def test_standard_diameter(self, ds, expected):
        assert standard_diameter(ds) == expected

    def test_standard_diameter_empty(self):
        with pytest.raises(NoCircleCandidatesError):
            standard_diameter([])

    def test_band_inclusive(self):
        assert accepted_band(12) == (8, 16)
        comps = [comp(12, 12, 1), comp(12, 12, 2), comp(12, 12, 3), comp(8, 8, 4), comp(8, 7, 5),
                 comp(16, 16, 6), comp(17, 16, 7)]
        det = detect_braille_points(comps)
        assert det.delta_s == 12
        kept = {c.label for c in det.accepted}
        # 8 -> kept; 7.5 -> below 8; 16 kept; 16.5 above
        assert kept == {1, 2, 3, 4, 6}

    def test_all_identical_kept(self):
        comps = [comp(9, 9, i) for i in range(1, 6)]
        assert len(filter_braille_points(comps)) == 5

    def test_no_candidates(self):
        with pytest.raises(NoCircleCandidatesError):
            filter_braille_points([comp(2, 20)])


def test_dots_specks_and_blob():
    a = np.zeros((120, 240), bool)
    centers = [(20 + 16 * i, 30 + 30 * (i % 2)) for i in range(10)]
    for cx, cy in centers:
        disc(a, cx, cy, 5)
    for k in range(5):
        a[100, 10 + 8 * k:12 + 8 * k] = True  # 2-px specks
    disc(a, 215, 90, 20)
    det = detect_braille_points(connected_components(BinaryImage(a)))
    got = sorted((round(p.x), round(p.y)) for p in det.points)
    assert got == sorted(centers)


def test_synth_points_found(alphabet):
    img, truth = render(SynthSpec(text="".join(alphabet[:8])))
    det = detect_braille_points(connected_components(preprocess(img)))
    assert len(det.points) == len(truth.dots)
    for x, y in truth.dots:
        assert min(np.hypot(p.x - x, p.y - y) for p in det.points) < 1.0


def test_scale_covariance(alphabet):
    img, _ = render(SynthSpec(text="".join(alphabet[:4])))
    bw = preprocess(img)
    big = BinaryImage(np.kron(bw.data, np.ones((2, 2), bool)))
    small = sorted((p.x, p.y, p.diameter) for p in filter_braille_points(connected_components(bw)))
    large = sorted((p.x, p.y, p.diameter) for p in filter_braille_points(connected_components(big)))
    assert len(small) == len(large)
    for (x, y, d), (X, Y, D) in zip(small, large):
        assert abs(2 * x + 0.5 - X) <= 1 and abs(2 * y + 0.5 - Y) <= 1 and abs(2 * d - D) <= 1
