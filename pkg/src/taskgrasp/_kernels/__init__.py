"""Kernel dispatch: compiled extension when available, NumPy fallback otherwise.

Set ``TASKGRASP_FORCE_FALLBACK=1`` to skip the compiled extension, e.g. to
compare outputs or benchmark the two implementations.
"""

from __future__ import annotations

import os

import numpy as np

from . import fallback as _fallback

_compiled = None
if os.environ.get("TASKGRASP_FORCE_FALLBACK", "").lower() not in ("1", "true", "yes"):
    try:
        from . import _core as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

_impl = _compiled if _compiled is not None else _fallback


def backend_name() -> str:
    """Name of the active kernel backend: "compiled" or "fallback"."""
    return "compiled" if _impl is _compiled and _compiled is not None else "fallback"


def splat_zbuffer(us, vs, zs, labels, height, width, radius=1):
    """Render point samples into (depth, label) images via nearest-z splatting.

    Each sample covers a (2*radius+1)^2 pixel patch. Pixels nothing lands on
    hold depth 0 and label 0.
    """
    us = np.ascontiguousarray(us, dtype=np.int32)
    vs = np.ascontiguousarray(vs, dtype=np.int32)
    zs = np.ascontiguousarray(zs, dtype=np.float32)
    labels = np.ascontiguousarray(labels, dtype=np.int32)
    if not (us.shape == vs.shape == zs.shape == labels.shape):
        raise ValueError("splat inputs must share one flat shape")
    return _impl.splat_zbuffer(us, vs, zs, labels, int(height), int(width), int(radius))


def antipodal_eval(points, normals, ii, jj, min_sep, max_sep, cos_cone):
    """Batch-test point pairs for a friction-cone-compatible pinch.

    Returns (accept uint8, score float64 in [0, 1], separation float64).
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    normals = np.ascontiguousarray(normals, dtype=np.float64)
    ii = np.ascontiguousarray(ii, dtype=np.int64)
    jj = np.ascontiguousarray(jj, dtype=np.int64)
    if points.shape != normals.shape or points.ndim != 2 or points.shape[1] != 3:
        raise ValueError("points and normals must both be (N, 3)")
    if ii.shape != jj.shape or ii.ndim != 1:
        raise ValueError("pair index arrays must share one flat shape")
    return _impl.antipodal_eval(points, normals, ii, jj, float(min_sep), float(max_sep), float(cos_cone))


__all__ = ["antipodal_eval", "backend_name", "splat_zbuffer"]
