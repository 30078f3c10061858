"""Grasp synthesis and selection on mask-filtered partial clouds."""

from .gripper import GripperSpec
from .normals import NormalEstimate, estimate_normals
from .sampler import (
    CONE_HALF_ANGLE_DEG,
    DEFAULT_BUDGET,
    MIN_SEPARATION,
    WIDTH_CLEARANCE,
    CandidateSet,
    sample_grasps,
)
from .selection import (
    DEFAULT_EPSILON,
    SelectionReport,
    constrain_and_select,
    select_grasp,
)
from .sources import RemoteGraspSource, SamplerSource

__all__ = [
    "CONE_HALF_ANGLE_DEG",
    "CandidateSet",
    "DEFAULT_BUDGET",
    "DEFAULT_EPSILON",
    "GripperSpec",
    "MIN_SEPARATION",
    "NormalEstimate",
    "RemoteGraspSource",
    "SamplerSource",
    "SelectionReport",
    "WIDTH_CLEARANCE",
    "constrain_and_select",
    "estimate_normals",
    "sample_grasps",
    "select_grasp",
]
