"""Grasp-pose validity checks and rotation assembly helpers."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .types import ROTATION_TOL, GraspPose


class PoseViolation(str, Enum):
    NON_FINITE = "NonFinite"
    NON_ORTHONORMAL = "NonOrthonormal"
    REFLECTION = "Reflection"
    WIDTH_NON_POSITIVE = "WidthNonPositive"
    WIDTH_EXCEEDED = "WidthExceeded"
    NEGATIVE_SCORE = "NegativeScore"


@dataclass
class PoseReport:
    """Outcome of validate_grasp_pose; empty violations means the pose is valid."""

    violations: list[PoseViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __contains__(self, violation: PoseViolation) -> bool:
        return violation in self.violations


def validate_grasp_pose(g: GraspPose, max_width: float) -> PoseReport:
    """Report every invariant violation of a grasp pose. Never raises.

    Checks: rotation orthonormality (1e-6), proper rotation (det +1),
    width in (0, max_width], non-negative score.
    """
    report = PoseReport()
    if not (
        np.isfinite(g.rotation).all()
        and np.isfinite(g.translation).all()
        and np.isfinite(g.width)
        and np.isfinite(g.score)
    ):
        report.violations.append(PoseViolation.NON_FINITE)
        return report

    residual = g.rotation.T @ g.rotation - np.eye(3)
    if np.abs(residual).max() > ROTATION_TOL:
        report.violations.append(PoseViolation.NON_ORTHONORMAL)
    det = np.linalg.det(g.rotation)
    if abs(det - 1.0) > ROTATION_TOL:
        # A well-formed orthonormal matrix with det -1 is a reflection,
        # i.e. an improper rotation; anything else is already non-orthonormal.
        if abs(det + 1.0) <= ROTATION_TOL:
            report.violations.append(PoseViolation.REFLECTION)
        elif PoseViolation.NON_ORTHONORMAL not in report.violations:
            report.violations.append(PoseViolation.NON_ORTHONORMAL)

    if g.width <= 0:
        report.violations.append(PoseViolation.WIDTH_NON_POSITIVE)
    elif g.width > max_width:
        report.violations.append(PoseViolation.WIDTH_EXCEEDED)

    if g.score < 0:
        report.violations.append(PoseViolation.NEGATIVE_SCORE)
    return report


def rotation_from_axes(closing: np.ndarray, approach: np.ndarray) -> np.ndarray:
    """Assemble a right-handed rotation with X = closing and Z = approach.

    The approach direction is re-orthogonalized against the closing axis;
    both inputs must be non-parallel unit-ish vectors.
    """
    x = np.asarray(closing, dtype=np.float64)
    x = x / np.linalg.norm(x)
    z = np.asarray(approach, dtype=np.float64)
    z = z - (z @ x) * x
    nz = np.linalg.norm(z)
    if nz < 1e-12:
        raise ValueError("approach axis is parallel to the closing axis")
    z = z / nz
    y = np.cross(z, x)
    return np.stack([x, y, z], axis=1)
