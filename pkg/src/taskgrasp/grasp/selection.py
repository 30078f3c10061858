"""Centroid-weighted grasp selection.

The winner maximizes score(g) / max(||t(g) - c||, epsilon) over the candidate
set. The epsilon clamp resolves the singularity at t == c continuously: a
grasp exactly at the affordance centroid is maximally preferred instead of
dividing by zero. Exactly equal objectives break ties by higher score, then
lexicographically smaller translation, so reports reproduce across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyAffordanceRegion, NoCandidates
from ..geometry import GraspPose, depth_to_cloud, mask_centroid
from .gripper import GripperSpec
from .sampler import CandidateSet

DEFAULT_EPSILON = 1e-4  # meters; distance clamp near the centroid


@dataclass
class SelectionReport:
    """Outcome of one selection: the winner plus the full ranked field.

    ``candidates`` keeps the set the ranking indexes into, so consumers can
    resolve ranked rows to poses; it stays out of serialized form.
    """

    winner: GraspPose
    centroid: np.ndarray
    ranking: list          # (candidate index, objective value), descending
    epsilon_used: float
    candidates: CandidateSet | None = None

    def __post_init__(self):
        self.centroid = np.asarray(self.centroid, dtype=np.float64).reshape(3)

    @property
    def winner_index(self) -> int:
        return self.ranking[0][0]

    def to_dict(self) -> dict:
        return {
            "winner": self.winner.to_dict(),
            "winner_index": self.winner_index,
            "centroid": self.centroid.tolist(),
            "ranking": [[int(i), float(v)] for i, v in self.ranking],
            "epsilon_used": self.epsilon_used,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SelectionReport":
        return cls(
            winner=GraspPose.from_dict(d["winner"]),
            centroid=np.array(d["centroid"], dtype=np.float64),
            ranking=[(int(i), float(v)) for i, v in d["ranking"]],
            epsilon_used=float(d["epsilon_used"]),
        )


def select_grasp(candidates: CandidateSet, centroid,
                 epsilon: float = DEFAULT_EPSILON) -> SelectionReport:
    """Rank candidates by score over clamped distance to the centroid."""
    if len(candidates) == 0:
        raise NoCandidates("candidate set is empty")
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")

    c = np.asarray(centroid, dtype=np.float64).reshape(3)
    t = np.array([g.translation for g in candidates.grasps])
    scores = np.array([g.score for g in candidates.grasps])
    dist = np.linalg.norm(t - c, axis=1)
    objective = scores / np.maximum(dist, epsilon)

    # lexsort keys run least- to most-significant.
    order = np.lexsort((t[:, 2], t[:, 1], t[:, 0], -scores, -objective))
    ranking = [(int(i), float(objective[i])) for i in order]
    return SelectionReport(
        winner=candidates.grasps[int(order[0])],
        centroid=c,
        ranking=ranking,
        epsilon_used=float(epsilon),
        candidates=candidates,
    )


def constrain_and_select(observation, mask, source, gripper: GripperSpec | None = None,
                         epsilon: float = DEFAULT_EPSILON) -> SelectionReport:
    """Filter the cloud to the affordance mask, then select on the sub-cloud.

    ``observation`` needs ``depth`` and ``intrinsics`` attributes. ``source``
    is either a ready CandidateSet or a grasp source with a
    ``propose(cloud, gripper)`` method.
    """
    gripper = gripper or GripperSpec()
    cloud = depth_to_cloud(observation.depth, observation.intrinsics, mask)
    if len(cloud) == 0:
        raise EmptyAffordanceRegion(
            f"mask has {mask.count} set bits but none with valid depth"
        )
    c = mask_centroid(cloud)
    if isinstance(source, CandidateSet):
        candidates = source
    else:
        candidates = source.propose(cloud, gripper)
    return select_grasp(candidates, c, epsilon)
