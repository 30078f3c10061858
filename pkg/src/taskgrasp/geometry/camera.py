"""Pinhole projection, deprojection and mask-filtered cloud construction.

Deprojection of pixel (u, v) at depth d:

    x = (u - cx) * d / fx
    y = (v - cy) * d / fy
    z = d

Projection is the exact inverse for z > 0:

    u = x * fx / z + cx
    v = y * fy / z + cy
"""

from __future__ import annotations

import numpy as np

from ..errors import EmptyCloud, InvalidDepth, OutOfBounds, ShapeMismatch
from .types import CameraIntrinsics, DepthImage, PixelMask, PointCloud


def deproject_pixel(u: float, v: float, depth: float, intr: CameraIntrinsics) -> np.ndarray:
    """Back-project a single pixel into the camera frame. Returns (x, y, z)."""
    if depth <= 0:
        raise InvalidDepth(f"depth must be positive, got {depth}")
    if not (0 <= u < intr.width and 0 <= v < intr.height):
        raise OutOfBounds(f"pixel ({u}, {v}) outside {intr.width}x{intr.height} image")
    return np.array(
        [(u - intr.cx) * depth / intr.fx, (v - intr.cy) * depth / intr.fy, depth],
        dtype=np.float64,
    )


def project_point(point: np.ndarray, intr: CameraIntrinsics) -> tuple[float, float, float]:
    """Project a camera-frame point to continuous pixel coordinates (u, v, depth)."""
    x, y, z = float(point[0]), float(point[1]), float(point[2])
    if z <= 0:
        raise InvalidDepth(f"cannot project point with z={z}")
    return (x * intr.fx / z + intr.cx, y * intr.fy / z + intr.cy, z)


def project_points(points: np.ndarray, intr: CameraIntrinsics) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized projection. Returns (uv float array (N, 2), depth (N,))."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    z = pts[:, 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        u = pts[:, 0] * intr.fx / z + intr.cx
        v = pts[:, 1] * intr.fy / z + intr.cy
    return np.stack([u, v], axis=1), z


def depth_to_cloud(depth: DepthImage, intr: CameraIntrinsics, mask: PixelMask) -> PointCloud:
    """Deproject every masked pixel with valid depth, in row-major order.

    One point per pixel where the mask bit is set AND the depth is valid;
    invalid returns (depth 0) are always excluded.
    """
    if (mask.height, mask.width) != (depth.height, depth.width):
        raise ShapeMismatch(
            f"mask {mask.height}x{mask.width} != depth {depth.height}x{depth.width}"
        )
    keep = mask.bits & depth.valid
    vs, us = np.nonzero(keep)  # np.nonzero scans row-major
    d = depth.data[vs, us].astype(np.float64)
    x = (us - intr.cx) * d / intr.fx
    y = (vs - intr.cy) * d / intr.fy
    return PointCloud(points=np.stack([x, y, d], axis=1))


def mask_centroid(cloud: PointCloud) -> np.ndarray:
    """Arithmetic mean of all cloud points (the 3-D affordance centroid)."""
    if len(cloud) == 0:
        raise EmptyCloud("cannot take the centroid of an empty cloud")
    return cloud.points.mean(axis=0)
