# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: z-buffer point splatting and antipodal pair tests.

Operation order mirrors ``fallback.py`` so both backends agree on output,
including tie-breaking (strictly nearer sample wins; on exact depth ties the
earlier sample index wins).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


def splat_zbuffer(const int[::1] us, const int[::1] vs, const float[::1] zs,
                  const int[::1] labels, int height, int width, int radius):
    depth = np.full((height, width), np.inf, dtype=np.float32)
    label = np.zeros((height, width), dtype=np.int32)
    cdef float[:, ::1] dbuf = depth
    cdef int[:, ::1] lbuf = label
    cdef Py_ssize_t k, n = us.shape[0]
    cdef int du, dv, px, py, lab
    cdef float z
    for k in range(n):
        z = zs[k]
        lab = labels[k]
        for dv in range(-radius, radius + 1):
            py = vs[k] + dv
            if py < 0 or py >= height:
                continue
            for du in range(-radius, radius + 1):
                px = us[k] + du
                if px < 0 or px >= width:
                    continue
                if z < dbuf[py, px]:
                    dbuf[py, px] = z
                    lbuf[py, px] = lab
    out = np.asarray(depth)
    out[np.isinf(out)] = 0.0
    return out, np.asarray(label)


def antipodal_eval(const double[:, ::1] points, const double[:, ::1] normals,
                   const long long[::1] ii, const long long[::1] jj,
                   double min_sep, double max_sep, double cos_cone):
    cdef Py_ssize_t m = ii.shape[0]
    accept = np.zeros(m, dtype=np.uint8)
    score = np.zeros(m, dtype=np.float64)
    sep = np.zeros(m, dtype=np.float64)
    cdef cnp.uint8_t[::1] abuf = accept
    cdef double[::1] sbuf = score
    cdef double[::1] dbuf = sep
    cdef Py_ssize_t k
    cdef long long a, b
    cdef double dx, dy, dz, L, safe, ux, uy, uz, ci, cj, s
    for k in range(m):
        a = ii[k]
        b = jj[k]
        dx = points[b, 0] - points[a, 0]
        dy = points[b, 1] - points[a, 1]
        dz = points[b, 2] - points[a, 2]
        L = sqrt(dx * dx + dy * dy + dz * dz)
        dbuf[k] = L
        safe = L if L > 0 else 1.0
        ux = dx / safe
        uy = dy / safe
        uz = dz / safe
        ci = fabs(normals[a, 0] * ux + normals[a, 1] * uy + normals[a, 2] * uz)
        cj = fabs(normals[b, 0] * ux + normals[b, 1] * uy + normals[b, 2] * uz)
        s = 0.5 * (ci + cj)
        if s > 1.0:
            s = 1.0
        sbuf[k] = s
        if L >= min_sep and L <= max_sep and a != b and ci >= cos_cone and cj >= cos_cone:
            abuf[k] = 1
    return accept, score, sep
