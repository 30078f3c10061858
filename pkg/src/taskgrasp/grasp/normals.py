"""Per-point normal estimation on partial-view clouds.

Local plane fit over k nearest neighbors; normals are oriented toward the
camera origin because a single-view cloud only shows camera-facing surface.
Rank-deficient neighborhoods (collinear points) get flagged invalid so
downstream stages can drop them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..geometry import PointCloud

DEGENERACY_RATIO = 1e-6  # second/largest eigenvalue below this = rank < 2


@dataclass
class NormalEstimate:
    cloud: PointCloud      # same points, with unit normals attached
    valid: np.ndarray      # (N,) bool, False where the neighborhood was degenerate

    def pruned(self) -> PointCloud:
        """The cloud with invalid-normal points dropped."""
        return PointCloud(
            self.cloud.points[self.valid], normals=self.cloud.normals[self.valid]
        )


def estimate_normals(cloud: PointCloud, k: int = 16) -> NormalEstimate:
    """Fit a plane to each point's k-neighborhood and orient toward the camera."""
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    n = len(cloud)
    if n < k + 1:
        raise ValueError(f"cloud has {n} points, need at least k+1 = {k + 1}")

    pts = cloud.points
    tree = cKDTree(pts)
    _, nbr = tree.query(pts, k=k + 1)
    neigh = pts[nbr]
    centered = neigh - neigh.mean(axis=1, keepdims=True)
    cov = np.einsum("nki,nkj->nij", centered, centered)
    evals, evecs = np.linalg.eigh(cov)  # ascending eigenvalues

    normals = evecs[:, :, 0].copy()
    largest = evals[:, 2]
    valid = (largest > 0) & (evals[:, 1] > DEGENERACY_RATIO * np.maximum(largest, 1e-300))

    # Orient toward the camera origin: n . p must be non-positive.
    flip = np.einsum("ni,ni->n", normals, pts) > 0
    normals[flip] = -normals[flip]

    norms = np.linalg.norm(normals, axis=1)
    bad = norms < 1e-12
    valid &= ~bad
    normals[bad] = (0.0, 0.0, -1.0)  # placeholder; flagged invalid
    normals[~bad] /= norms[~bad, None]

    return NormalEstimate(cloud=PointCloud(pts, normals=normals), valid=valid)
