"""Antipodal parallel-jaw grasp sampling on an oriented partial cloud.

Random point pairs are kept when both normals lie within the friction cone
of the pair axis. The cone test ignores normal sign: estimated normals on a
single-view cloud are camera-oriented, so at a pinchable silhouette the two
sides carry normals whose signs do not reflect the underlying material side,
while the pinch geometry itself is sign-free. The approach axis is recovered
from the camera-oriented normal sum (falling back to the view ray when the
sum degenerates), which points the gripper into the scene.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import _kernels
from ..errors import NoFeasibleGrasp
from ..geometry import GraspPose, PointCloud, rotation_from_axes
from .gripper import GripperSpec

DEFAULT_BUDGET = 256
MIN_SEPARATION = 0.002
CONE_HALF_ANGLE_DEG = 15.0
WIDTH_CLEARANCE = 0.005


@dataclass
class CandidateSet:
    """Scored grasp candidates in deterministic order (score desc, then t)."""

    grasps: list
    source_cloud_id: str = ""
    contacts: np.ndarray = field(default_factory=lambda: np.zeros((0, 2, 3)))

    def __len__(self) -> int:
        return len(self.grasps)

    def to_dict(self) -> dict:
        return {
            "source_cloud_id": self.source_cloud_id,
            "grasps": [g.to_dict() for g in self.grasps],
            "contacts": self.contacts.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CandidateSet":
        return cls(
            grasps=[GraspPose.from_dict(g) for g in d["grasps"]],
            source_cloud_id=d.get("source_cloud_id", ""),
            contacts=np.array(d.get("contacts", []), dtype=np.float64).reshape(-1, 2, 3),
        )


def sample_grasps(cloud: PointCloud, gripper: GripperSpec,
                  budget: int = DEFAULT_BUDGET, seed: int = 0,
                  source_cloud_id: str = "",
                  cone_half_angle_deg: float = CONE_HALF_ANGLE_DEG,
                  min_separation: float = MIN_SEPARATION,
                  clearance: float = WIDTH_CLEARANCE) -> CandidateSet:
    """Draw ``budget`` random point pairs and keep the antipodal ones.

    Deterministic for fixed (cloud, gripper, budget, seed). Raises
    NoFeasibleGrasp when no pair passes.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    n = len(cloud)
    if n == 0:
        raise NoFeasibleGrasp("empty cloud")
    if cloud.normals is None:
        raise ValueError("cloud must carry normals; run estimate_normals first")

    rng = np.random.default_rng(seed)
    ii = rng.integers(0, n, size=budget)
    jj = rng.integers(0, n, size=budget)

    cos_cone = float(np.cos(np.radians(cone_half_angle_deg)))
    accept, score, sep = _kernels.antipodal_eval(
        cloud.points, cloud.normals, ii, jj, min_separation, gripper.max_width, cos_cone
    )
    keep = accept.astype(bool)
    if not keep.any():
        raise NoFeasibleGrasp(
            f"no antipodal pair among {budget} draws on {n} points"
        )

    ii, jj, score, sep = ii[keep], jj[keep], score[keep], sep[keep]
    # A pair drawn twice (either order) is one physical pinch.
    canon = np.stack([np.minimum(ii, jj), np.maximum(ii, jj)], axis=1)
    _, unique_idx = np.unique(canon, axis=0, return_index=True)
    ii, jj, score, sep = ii[unique_idx], jj[unique_idx], score[unique_idx], sep[unique_idx]

    pi = cloud.points[ii]
    pj = cloud.points[jj]
    ni = cloud.normals[ii]
    nj = cloud.normals[jj]

    grasps = []
    contacts = []
    for k in range(len(ii)):
        closing = (pj[k] - pi[k]) / sep[k]
        t = 0.5 * (pi[k] + pj[k])
        approach = -(ni[k] + nj[k])
        # Remove the closing component. The sum degenerates not only at
        # zero norm: camera-oriented normals on two silhouette strips can
        # flip laterally and leave a residual that points sideways or back
        # at the camera. A gripper guided by a single view can only advance
        # along rays into the scene, so anything else falls back to the
        # viewing ray through the grasp point.
        approach = approach - (approach @ closing) * closing
        norm = np.linalg.norm(approach)
        view = t - (t @ closing) * closing
        view_norm = np.linalg.norm(view)
        into_scene = 0.0
        if norm > 1e-9 and view_norm > 1e-9:
            into_scene = (approach / norm) @ (view / view_norm)
        if norm < 1e-9 or into_scene < 0.8:
            approach = view
            if view_norm < 1e-9:
                approach = np.array([0.0, 0.0, 1.0])
        rotation = rotation_from_axes(closing, approach)
        grasps.append(
            GraspPose(
                rotation=rotation,
                translation=t,
                width=sep[k] + clearance,
                score=float(score[k]),
            )
        )
        contacts.append([pi[k], pj[k]])

    order = np.lexsort(
        (
            [g.translation[2] for g in grasps],
            [g.translation[1] for g in grasps],
            [g.translation[0] for g in grasps],
            [-g.score for g in grasps],
        )
    )
    return CandidateSet(
        grasps=[grasps[k] for k in order],
        source_cloud_id=source_cloud_id,
        contacts=np.array([contacts[k] for k in order], dtype=np.float64).reshape(-1, 2, 3),
    )
