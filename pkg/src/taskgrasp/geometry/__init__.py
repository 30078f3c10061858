from .camera import (
    deproject_pixel,
    depth_to_cloud,
    mask_centroid,
    project_point,
    project_points,
)
from .pose import PoseReport, PoseViolation, rotation_from_axes, validate_grasp_pose
from .types import (
    BoundingBox,
    CameraIntrinsics,
    DepthImage,
    GraspPose,
    Observation,
    PixelMask,
    PointCloud,
    RigidTransform,
)

__all__ = [
    "BoundingBox",
    "CameraIntrinsics",
    "DepthImage",
    "GraspPose",
    "Observation",
    "PixelMask",
    "PointCloud",
    "PoseReport",
    "PoseViolation",
    "RigidTransform",
    "deproject_pixel",
    "depth_to_cloud",
    "mask_centroid",
    "project_point",
    "project_points",
    "rotation_from_axes",
    "validate_grasp_pose",
]
