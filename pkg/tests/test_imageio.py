"""On-disk image and intrinsics formats.

Depth PNGs are 16-bit millimeters; the round trip must be exact for any
value representable in that encoding.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from taskgrasp.geometry import CameraIntrinsics, DepthImage
from taskgrasp.geometry.imageio import (
    depth_from_png_bytes,
    depth_png_bytes,
    load_depth_png,
    load_intrinsics,
    load_label_png,
    load_rgb_png,
    mask_from_png_bytes,
    mask_png_bytes,
    rgb_from_png_bytes,
    rgb_png_bytes,
    save_depth_png,
    save_intrinsics,
    save_label_png,
    save_rgb_png,
)


class TestDepthPng:
    def test_round_trip_exact_millimeters(self, tmp_path):
        mm = np.array([[0, 1, 500], [1000, 12345, 65535]], dtype=np.uint16)
        depth = DepthImage.from_millimeters(mm)
        p = tmp_path / "d.png"
        save_depth_png(depth, p)
        back = load_depth_png(p)
        np.testing.assert_array_equal(back.to_millimeters(), mm)

    def test_zero_stays_invalid(self, tmp_path):
        depth = DepthImage(np.zeros((4, 4), dtype=np.float32))
        p = tmp_path / "d.png"
        save_depth_png(depth, p)
        assert not load_depth_png(p).valid.any()

    def test_bytes_round_trip_matches_file_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        depth = DepthImage(rng.uniform(0.2, 3.0, (16, 20)).astype(np.float32))
        blob = depth_png_bytes(depth)
        back = depth_from_png_bytes(blob)
        np.testing.assert_array_equal(back.to_millimeters(), depth.to_millimeters())

    def test_quantization_error_below_half_millimeter(self):
        depth = DepthImage(np.array([[0.12345, 1.98765]], dtype=np.float32))
        back = depth_from_png_bytes(depth_png_bytes(depth))
        assert np.abs(back.data - depth.data).max() <= 0.0005 + 1e-9

    @settings(max_examples=50, deadline=None)
    @given(
        mm=arrays(np.uint16, st.tuples(st.integers(1, 12), st.integers(1, 12)))
    )
    def test_any_uint16_grid_survives(self, mm):
        back = depth_from_png_bytes(depth_png_bytes(DepthImage.from_millimeters(mm)))
        np.testing.assert_array_equal(back.to_millimeters(), mm)


class TestRgbPng:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        rgb = rng.integers(0, 256, (10, 14, 3), dtype=np.uint8)
        p = tmp_path / "c.png"
        save_rgb_png(rgb, p)
        np.testing.assert_array_equal(load_rgb_png(p), rgb)

    def test_bytes_round_trip(self):
        rng = np.random.default_rng(2)
        rgb = rng.integers(0, 256, (7, 9, 3), dtype=np.uint8)
        np.testing.assert_array_equal(rgb_from_png_bytes(rgb_png_bytes(rgb)), rgb)


class TestLabelPng:
    def test_round_trip_preserves_ids(self, tmp_path):
        labels = np.array([[0, 256, 257], [512, 1, 2049]], dtype=np.int32)
        p = tmp_path / "l.png"
        save_label_png(labels, p)
        np.testing.assert_array_equal(load_label_png(p), labels)


class TestMaskPng:
    def test_round_trip(self):
        bits = np.zeros((6, 8), dtype=bool)
        bits[2:4, 3:7] = True
        np.testing.assert_array_equal(mask_from_png_bytes(mask_png_bytes(bits)), bits)


class TestIntrinsicsFile:
    def test_round_trip(self, tmp_path):
        intr = CameraIntrinsics(fx=580.5, fy=581.25, cx=319.5, cy=239.5, width=640, height=480)
        p = tmp_path / "intr.txt"
        save_intrinsics(intr, p)
        back = load_intrinsics(p)
        assert back == intr

    def test_tolerates_comments_and_blank_lines(self, tmp_path):
        p = tmp_path / "intr.txt"
        p.write_text(
            "# camera parameters\n\nfx: 600\nfy: 600\n\ncx: 320\ncy: 240\nwidth: 640\nheight: 480\n"
        )
        intr = load_intrinsics(p)
        assert intr.fx == 600.0 and intr.width == 640

    def test_missing_field_raises(self, tmp_path):
        p = tmp_path / "intr.txt"
        p.write_text("fx: 600\nfy: 600\ncx: 320\ncy: 240\nwidth: 640\n")
        with pytest.raises(ValueError):
            load_intrinsics(p)
