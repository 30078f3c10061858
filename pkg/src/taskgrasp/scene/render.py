"""Point-splat rendering of scenes into RGB-D with ground-truth part labels.

One z-buffer pass over all surface samples resolves the winning sample per
pixel; depth, the label map and the shaded RGB image are all derived from
that single index map, so they are mutually consistent by construction.

Label encoding: object_id * 256 + part_index; 0 is background. Depth is
valid exactly where a sample won a pixel; the table top is painted into RGB
only (it has no depth, so clouds contain object surfaces only).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import _kernels
from ..geometry import CameraIntrinsics, DepthImage, RigidTransform
from ..geometry.imageio import (
    load_depth_png,
    load_intrinsics,
    load_label_png,
    load_rgb_png,
    save_depth_png,
    save_intrinsics,
    save_label_png,
    save_rgb_png,
)
from .generate import SceneDescription

SPLAT_RADIUS = 1
BACKGROUND_RGB = (38, 38, 46)
TABLE_RGB = (96, 82, 68)

# Flat part colors, assigned per (object_id, part_index) round-robin.
_PALETTE = np.array(
    [
        (204, 88, 66), (66, 140, 204), (96, 178, 92), (196, 156, 58),
        (150, 96, 196), (70, 182, 172), (204, 112, 150), (140, 140, 72),
        (90, 110, 210), (190, 120, 62), (110, 190, 130), (170, 70, 90),
    ],
    dtype=np.float64,
)


@dataclass
class RenderedObservation:
    """RGB-D render plus the per-pixel ground-truth (object, part) labels."""

    rgb: np.ndarray            # (H, W, 3) uint8
    depth: DepthImage
    label_map: np.ndarray      # (H, W) int32, object_id*256 + part_index, 0 = bg
    intrinsics: CameraIntrinsics
    legend: dict               # object_id -> (object_class, part name tuple)

    def label_value(self, object_id: int, part_name: str) -> int:
        object_class, parts = self.legend[object_id]
        return object_id * 256 + parts.index(part_name)

    def mask_for(self, object_id: int, part_name: str) -> np.ndarray:
        return self.label_map == self.label_value(object_id, part_name)

    def object_mask(self, object_id: int) -> np.ndarray:
        return (self.label_map // 256) == object_id


def look_at(eye, target, up=(0.0, 0.0, 1.0)) -> RigidTransform:
    """Camera-to-world pose: +Z looks at target, +X image-right, +Y image-down."""
    eye = np.asarray(eye, dtype=np.float64)
    fwd = np.asarray(target, dtype=np.float64) - eye
    norm = np.linalg.norm(fwd)
    if norm < 1e-12:
        raise ValueError("eye and target coincide")
    z = fwd / norm
    up = np.asarray(up, dtype=np.float64)
    x = np.cross(z, up)
    if np.linalg.norm(x) < 1e-9:
        x = np.cross(z, np.array([0.0, 1.0, 0.0]))
    x = x / np.linalg.norm(x)
    y = np.cross(z, x)
    return RigidTransform(np.stack([x, y, z], axis=1), eye)


def default_camera() -> tuple:
    """Intrinsics and pose used by the demo scenes and the GSR harness.

    Close enough that thin handles span ~20 pixels, which normal estimation
    needs to resolve pinchable silhouette bands.
    """
    intr = CameraIntrinsics(fx=870.0, fy=870.0, cx=480.0, cy=360.0, width=960, height=720)
    pose = look_at(eye=(0.0, -0.44, 0.55), target=(0.0, 0.0, 0.02))
    return intr, pose


def render_observation(scene: SceneDescription, intr: CameraIntrinsics,
                       camera_pose: RigidTransform,
                       splat_radius: int = SPLAT_RADIUS) -> RenderedObservation:
    """Render the scene from the given camera pose. Pure and deterministic."""
    legend = {
        o.object_id: (o.object_class, o.part_names()) for o in scene.objects
    }
    h, w = intr.height, intr.width

    if not scene.objects:
        return RenderedObservation(
            rgb=_paint_background(np.zeros((h, w), dtype=np.int32), intr, camera_pose),
            depth=DepthImage(np.zeros((h, w), dtype=np.float32)),
            label_map=np.zeros((h, w), dtype=np.int32),
            intrinsics=intr,
            legend=legend,
        )

    world_pts = np.concatenate([o.points for o in scene.objects])
    world_nrm = np.concatenate([o.normals for o in scene.objects])
    labels = np.concatenate(
        [o.object_id * 256 + o.part_index.astype(np.int32) for o in scene.objects]
    )

    to_cam = camera_pose.inverse()
    pts = to_cam.apply(world_pts)
    nrm = to_cam.rotate(world_nrm)

    front = pts[:, 2] > 1e-3
    pts, nrm, labels = pts[front], nrm[front], labels[front]

    us = np.round(pts[:, 0] * intr.fx / pts[:, 2] + intr.cx).astype(np.int32)
    vs = np.round(pts[:, 1] * intr.fy / pts[:, 2] + intr.cy).astype(np.int32)
    zs = pts[:, 2].astype(np.float32)

    # Splat by 1-based sample index; every per-pixel product derives from
    # the single winning index so depth/label/RGB agree exactly.
    idx = np.arange(1, len(pts) + 1, dtype=np.int32)
    depth_map, index_map = _kernels.splat_zbuffer(us, vs, zs, idx, h, w, splat_radius)

    hit = index_map > 0
    winner = index_map[hit] - 1
    label_map = np.zeros((h, w), dtype=np.int32)
    label_map[hit] = labels[winner]

    rgb = _paint_background(label_map, intr, camera_pose)
    if hit.any():
        colors = _PALETTE[(labels[winner] // 256 * 7 + labels[winner] % 256) % len(_PALETTE)]
        view = -pts[winner]
        view /= np.linalg.norm(view, axis=1, keepdims=True)
        shade = 0.45 + 0.55 * np.abs(np.sum(nrm[winner] * view, axis=1))
        rgb[hit] = np.clip(colors * shade[:, None], 0, 255).astype(np.uint8)

    return RenderedObservation(
        rgb=rgb,
        depth=DepthImage(depth_map),
        label_map=label_map,
        intrinsics=intr,
        legend=legend,
    )


def _paint_background(label_map: np.ndarray, intr: CameraIntrinsics,
                      camera_pose: RigidTransform,
                      table_half: float = 0.32) -> np.ndarray:
    """RGB canvas with the tabletop plane painted in (cosmetic only, no depth)."""
    h, w = label_map.shape
    rgb = np.full((h, w, 3), BACKGROUND_RGB, dtype=np.uint8)

    vs, us = np.mgrid[0:h, 0:w]
    rays_cam = np.stack(
        [
            (us.ravel() - intr.cx) / intr.fx,
            (vs.ravel() - intr.cy) / intr.fy,
            np.ones(h * w),
        ],
        axis=1,
    )
    rays_world = camera_pose.rotate(rays_cam)
    eye = camera_pose.translation
    dz = rays_world[:, 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = -eye[2] / dz
    hit_xy = eye[:2] + t[:, None] * rays_world[:, :2]
    on_table = (
        (t > 0)
        & np.isfinite(t)
        & (np.abs(hit_xy[:, 0]) <= table_half)
        & (np.abs(hit_xy[:, 1]) <= table_half)
    ).reshape(h, w)
    rgb[on_table] = TABLE_RGB
    return rgb


def save_observation(obs: RenderedObservation, directory) -> None:
    """Persist the render as the standard PNG trio plus intrinsics."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    save_rgb_png(obs.rgb, d / "rgb.png")
    save_depth_png(obs.depth, d / "depth.png")
    save_label_png(obs.label_map, d / "labels.png")
    save_intrinsics(obs.intrinsics, d / "intrinsics.txt")
    legend_lines = []
    for oid in sorted(obs.legend):
        object_class, parts = obs.legend[oid]
        legend_lines.append(f"{oid}: {object_class}: {','.join(parts)}")
    (d / "legend.txt").write_text("\n".join(legend_lines) + "\n")


def load_observation(directory) -> RenderedObservation:
    d = Path(directory)
    legend = {}
    for line in (d / "legend.txt").read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        oid, object_class, parts = line.split(":")
        legend[int(oid)] = (object_class.strip(), tuple(parts.strip().split(",")))
    return RenderedObservation(
        rgb=load_rgb_png(d / "rgb.png"),
        depth=load_depth_png(d / "depth.png"),
        label_map=load_label_png(d / "labels.png"),
        intrinsics=load_intrinsics(d / "intrinsics.txt"),
        legend=legend,
    )
