"""Grasp candidate sources behind one ``propose(cloud, gripper)`` interface.

SamplerSource wraps the local antipodal sampler (normal estimation included).
RemoteGraspSource posts the cloud to an external grasp-model service, so a
learned generator can be swapped in without touching selection or the
pipeline. Both return a CandidateSet whose members pass validate_grasp_pose.
"""

from __future__ import annotations

import base64
from dataclasses import dataclass

import httpx
import numpy as np

from ..errors import BackendUnavailable, NoFeasibleGrasp
from ..geometry import GraspPose, PointCloud, validate_grasp_pose
from .gripper import GripperSpec
from .normals import estimate_normals
from .sampler import (
    CONE_HALF_ANGLE_DEG,
    DEFAULT_BUDGET,
    MIN_SEPARATION,
    WIDTH_CLEARANCE,
    CandidateSet,
    sample_grasps,
)


@dataclass
class SamplerSource:
    """Antipodal sampling on the sub-cloud, preceded by normal estimation.

    ``neighbors`` shrinks automatically on small clouds; below 4 usable
    points there is no plane fit to be had and the source reports
    NoFeasibleGrasp rather than an argument error, because a tiny affordance
    region is a run outcome, not a caller bug.
    """

    budget: int = DEFAULT_BUDGET
    seed: int = 0
    neighbors: int = 16
    cone_half_angle_deg: float = CONE_HALF_ANGLE_DEG
    min_separation: float = MIN_SEPARATION
    clearance: float = WIDTH_CLEARANCE

    def propose(self, cloud: PointCloud, gripper: GripperSpec) -> CandidateSet:
        n = len(cloud)
        if n < 4:
            raise NoFeasibleGrasp(f"affordance cloud has only {n} points")
        k = min(self.neighbors, n - 1)
        oriented = estimate_normals(cloud, k=k).pruned()
        if len(oriented) == 0:
            raise NoFeasibleGrasp("every neighborhood in the region is degenerate")
        return sample_grasps(
            oriented,
            gripper,
            budget=self.budget,
            seed=self.seed,
            cone_half_angle_deg=self.cone_half_angle_deg,
            min_separation=self.min_separation,
            clearance=self.clearance,
        )


@dataclass
class RemoteGraspSource:
    """Client for an HTTP grasp service.

    Request:  POST {base_url}/grasps
              {"points_b64": <base64 little-endian float64 (N,3)>,
               "count": N, "max_width": float, "finger_depth": float}
    Response: {"grasps": [{"rotation": [[...]x3], "translation": [x,y,z],
                           "width": w, "score": s}, ...]}

    Grasps failing pose validation are treated as a backend fault. Results
    are re-sorted (score descending, then translation) so downstream order
    never depends on the wire order.
    """

    base_url: str
    timeout_s: float = 30.0

    def propose(self, cloud: PointCloud, gripper: GripperSpec) -> CandidateSet:
        pts = np.ascontiguousarray(cloud.points, dtype="<f8")
        body = {
            "points_b64": base64.b64encode(pts.tobytes()).decode("ascii"),
            "count": len(cloud),
            "max_width": gripper.max_width,
            "finger_depth": gripper.finger_depth,
        }
        try:
            resp = httpx.post(
                self.base_url.rstrip("/") + "/grasps", json=body, timeout=self.timeout_s
            )
            resp.raise_for_status()
            payload = resp.json()
        except httpx.HTTPError as exc:
            raise BackendUnavailable(f"grasp service: {exc}") from exc

        raw = payload.get("grasps", [])
        if not raw:
            raise NoFeasibleGrasp("grasp service returned zero candidates")
        grasps = []
        for entry in raw:
            g = GraspPose.from_dict(entry)
            report = validate_grasp_pose(g, gripper.max_width + WIDTH_CLEARANCE)
            if not report.ok:
                raise BackendUnavailable(
                    f"grasp service returned an invalid pose: {report.violations}"
                )
            grasps.append(g)
        grasps.sort(key=lambda g: (-g.score, tuple(g.translation)))
        return CandidateSet(grasps=grasps, source_cloud_id="remote")
