"""Parallel-jaw gripper description shared by the sampler and the executor."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class GripperSpec:
    """Two-finger gripper geometry.

    max_width is the nominal stroke of an 85 mm class parallel gripper.
    body_extent approximates the gripper body as a box (x, y, z in the
    gripper frame: closing, transverse, approach) for collision checks.
    """

    max_width: float = 0.085
    finger_depth: float = 0.04
    body_extent: tuple = (0.02, 0.024, 0.10)

    def __post_init__(self):
        if self.max_width <= 0 or self.max_width >= 0.3:
            raise ValueError(f"max_width {self.max_width} outside (0, 0.3)")
        if self.finger_depth <= 0:
            raise ValueError("finger_depth must be positive")
        if any(e <= 0 for e in self.body_extent):
            raise ValueError("body_extent dimensions must be positive")
