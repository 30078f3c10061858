"""Core geometric domain types.

Conventions used throughout the package:

  Camera frame (right-handed, standard computer vision):
    - Origin at the optical center, Z forward along the optical axis,
      X right, Y down.  All point clouds live in this frame (meters).

  Image frame:
    - (u, v) = (column, row), origin at the top-left pixel.
    - Bounding boxes are inclusive-exclusive: [u_min, u_max) x [v_min, v_max).

  Depth:
    - Stored on disk as 16-bit unsigned millimeters, held in memory as
      float32 meters.  The value 0 encodes "invalid / no return"; valid
      depths lie in (0, 20] m.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_DEPTH_M = 20.0
UNIT_NORMAL_TOL = 1e-6
ROTATION_TOL = 1e-6


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole camera parameters, all in pixel units."""

    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError(f"focal lengths must be positive, got fx={self.fx}, fy={self.fy}")
        if not (0 <= self.cx < self.width):
            raise ValueError(f"cx={self.cx} outside [0, {self.width})")
        if not (0 <= self.cy < self.height):
            raise ValueError(f"cy={self.cy} outside [0, {self.height})")

    @property
    def matrix(self) -> np.ndarray:
        """3x3 intrinsic matrix K."""
        return np.array(
            [[self.fx, 0.0, self.cx], [0.0, self.fy, self.cy], [0.0, 0.0, 1.0]],
            dtype=np.float64,
        )


@dataclass
class DepthImage:
    """Per-pixel depth in meters, float32, shape (height, width)."""

    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float32)
        if self.data.ndim != 2:
            raise ValueError(f"depth must be 2-D, got shape {self.data.shape}")
        # Negative or non-finite depth cannot come from the 16-bit encoding,
        # so it is a programming error; out-of-range positives are merely
        # invalid data and are excluded by `valid`.
        if np.any(~np.isfinite(self.data)) or np.any(self.data < 0):
            raise ValueError("depth values must be finite and non-negative")

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def valid(self) -> np.ndarray:
        """Boolean map of pixels carrying a usable depth."""
        return (self.data > 0) & (self.data <= MAX_DEPTH_M) & np.isfinite(self.data)

    @classmethod
    def from_millimeters(cls, mm: np.ndarray) -> "DepthImage":
        return cls(np.asarray(mm, dtype=np.float32) / 1000.0)

    def to_millimeters(self) -> np.ndarray:
        """Quantize to the on-disk 16-bit millimeter encoding."""
        mm = np.round(self.data * 1000.0)
        return np.clip(mm, 0, 65535).astype(np.uint16)


@dataclass
class PixelMask:
    """Binary pixel mask, bool, shape (height, width)."""

    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=bool)
        if self.bits.ndim != 2:
            raise ValueError(f"mask must be 2-D, got shape {self.bits.shape}")

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def count(self) -> int:
        return int(self.bits.sum())


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned pixel box, inclusive-exclusive [min, max).

    An empty box (u_min == u_max or v_min == v_max) is a legal value.
    """

    u_min: int
    v_min: int
    u_max: int
    v_max: int

    def __post_init__(self):
        if self.u_min > self.u_max or self.v_min > self.v_max:
            raise ValueError(f"box has negative extent: {self}")
        if self.u_min < 0 or self.v_min < 0:
            raise ValueError(f"box has negative coordinates: {self}")

    @property
    def width(self) -> int:
        return self.u_max - self.u_min

    @property
    def height(self) -> int:
        return self.v_max - self.v_min

    @property
    def is_empty(self) -> bool:
        return self.width == 0 or self.height == 0

    @property
    def area(self) -> int:
        return self.width * self.height

    def fits_within(self, width: int, height: int) -> bool:
        return self.u_max <= width and self.v_max <= height

    def contains(self, u: int, v: int) -> bool:
        return self.u_min <= u < self.u_max and self.v_min <= v < self.v_max

    def to_list(self) -> list[int]:
        return [self.u_min, self.v_min, self.u_max, self.v_max]


@dataclass
class PointCloud:
    """Points (N, 3) float64 in the camera frame; optional unit normals (N, 3)."""

    points: np.ndarray
    normals: np.ndarray | None = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.float64).reshape(-1, 3)
        if not np.isfinite(self.points).all():
            raise ValueError("point cloud contains non-finite coordinates")
        if self.normals is not None:
            self.normals = np.asarray(self.normals, dtype=np.float64).reshape(-1, 3)
            if self.normals.shape != self.points.shape:
                raise ValueError(
                    f"normals shape {self.normals.shape} != points shape {self.points.shape}"
                )
            norms = np.linalg.norm(self.normals, axis=1)
            if norms.size and np.abs(norms - 1.0).max() > UNIT_NORMAL_TOL:
                raise ValueError("normals are not unit length")

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass
class GraspPose:
    """Parallel-jaw grasp: rotation (gripper->camera), translation, opening width.

    Gripper frame: X is the closing axis (fingers travel along +/-X),
    Z is the approach axis (the gripper advances along +Z), Y = Z x X.
    The translation is the midpoint between the fingertip contact points.
    """

    rotation: np.ndarray
    translation: np.ndarray
    width: float
    score: float

    def __post_init__(self):
        self.rotation = np.asarray(self.rotation, dtype=np.float64).reshape(3, 3)
        self.translation = np.asarray(self.translation, dtype=np.float64).reshape(3)
        self.width = float(self.width)
        self.score = float(self.score)

    @property
    def closing_axis(self) -> np.ndarray:
        return self.rotation[:, 0]

    @property
    def approach_axis(self) -> np.ndarray:
        return self.rotation[:, 2]

    def to_dict(self) -> dict:
        return {
            "rotation": self.rotation.tolist(),
            "translation": self.translation.tolist(),
            "width": self.width,
            "score": self.score,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GraspPose":
        return cls(
            rotation=np.array(d["rotation"], dtype=np.float64),
            translation=np.array(d["translation"], dtype=np.float64),
            width=float(d["width"]),
            score=float(d["score"]),
        )


@dataclass
class RigidTransform:
    """Rotation + translation mapping child-frame points into the parent frame."""

    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.rotation = np.asarray(self.rotation, dtype=np.float64).reshape(3, 3)
        self.translation = np.asarray(self.translation, dtype=np.float64).reshape(3)

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        return pts @ self.rotation.T + self.translation

    def rotate(self, vectors: np.ndarray) -> np.ndarray:
        return np.asarray(vectors, dtype=np.float64) @ self.rotation.T

    def inverse(self) -> "RigidTransform":
        rt = self.rotation.T
        return RigidTransform(rt, -rt @ self.translation)

    def compose(self, other: "RigidTransform") -> "RigidTransform":
        """self o other: applies ``other`` first, then ``self``."""
        return RigidTransform(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )

    def to_dict(self) -> dict:
        return {"rotation": self.rotation.tolist(), "translation": self.translation.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "RigidTransform":
        return cls(np.array(d["rotation"]), np.array(d["translation"]))


@dataclass
class Observation:
    """One RGB-D observation: the pipeline's sensory input."""

    rgb: np.ndarray
    depth: DepthImage
    intrinsics: CameraIntrinsics

    def __post_init__(self):
        self.rgb = np.asarray(self.rgb, dtype=np.uint8)
        if self.rgb.ndim != 3 or self.rgb.shape[2] != 3:
            raise ValueError(f"rgb must be HxWx3, got {self.rgb.shape}")
        if self.rgb.shape[:2] != self.depth.data.shape:
            raise ValueError(
                f"rgb shape {self.rgb.shape[:2]} does not match depth {self.depth.data.shape}"
            )
        if (self.depth.height, self.depth.width) != (self.intrinsics.height, self.intrinsics.width):
            raise ValueError("depth dimensions do not match intrinsics")
