"""Pure-NumPy implementations of the hot kernels.

Semantics must match ``_core.pyx`` exactly: the z-buffer keeps the
strictly-nearest sample and resolves depth ties in favor of the earliest
sample index, and the antipodal test uses the same operation order so both
backends agree bitwise on typical inputs.
"""

from __future__ import annotations

import numpy as np


def splat_zbuffer(us, vs, zs, labels, height, width, radius):
    """Scatter depth samples into a z-buffer, splatting a (2r+1)^2 patch each.

    Returns (depth float32 HxW with 0 where nothing landed, label int32 HxW
    with 0 background).
    """
    depth = np.zeros((height, width), dtype=np.float32)
    label = np.zeros((height, width), dtype=np.int32)
    n = us.shape[0]
    if n == 0:
        return depth, label

    span = np.arange(-radius, radius + 1, dtype=np.int64)
    du, dv = np.meshgrid(span, span)
    px = (us.astype(np.int64)[:, None] + du.ravel()[None, :]).ravel()
    py = (vs.astype(np.int64)[:, None] + dv.ravel()[None, :]).ravel()
    patch = span.size * span.size
    z = np.repeat(zs, patch)
    lab = np.repeat(labels, patch)
    order = np.repeat(np.arange(n, dtype=np.int64), patch)

    inside = (px >= 0) & (px < width) & (py >= 0) & (py < height)
    px, py, z, lab, order = px[inside], py[inside], z[inside], lab[inside], order[inside]
    if px.size == 0:
        return depth, label

    flat = py * width + px
    # Primary key: pixel; then depth; then original sample order for ties.
    idx = np.lexsort((order, z, flat))
    flat, z, lab = flat[idx], z[idx], lab[idx]
    first = np.ones(flat.size, dtype=bool)
    first[1:] = flat[1:] != flat[:-1]
    depth.ravel()[flat[first]] = z[first]
    label.ravel()[flat[first]] = lab[first]
    return depth, label


def antipodal_eval(points, normals, ii, jj, min_sep, max_sep, cos_cone):
    """Evaluate candidate point pairs for an antipodal pinch.

    The cone test is insensitive to the sign of the estimated normals:
    single-view normals at grazing incidence carry an unreliable
    orientation, while the underlying pinch geometry does not.

    Returns (accept uint8, score float64, separation float64), one entry
    per pair.
    """
    pi = points[ii]
    pj = points[jj]
    d = pj - pi
    sep = np.sqrt(d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1] + d[:, 2] * d[:, 2])
    ok_sep = (sep >= min_sep) & (sep <= max_sep) & (ii != jj)
    safe = np.where(sep > 0, sep, 1.0)
    ux, uy, uz = d[:, 0] / safe, d[:, 1] / safe, d[:, 2] / safe
    ni = normals[ii]
    nj = normals[jj]
    ci = np.abs(ni[:, 0] * ux + ni[:, 1] * uy + ni[:, 2] * uz)
    cj = np.abs(nj[:, 0] * ux + nj[:, 1] * uy + nj[:, 2] * uz)
    accept = ok_sep & (ci >= cos_cone) & (cj >= cos_cone)
    score = np.minimum(0.5 * (ci + cj), 1.0)
    return accept.astype(np.uint8), score, sep
