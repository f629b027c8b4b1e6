# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_pykernels`` for the contract."""
import numpy as np
cimport numpy as cnp
from libc.math cimport atan2, sqrt

cnp.import_array()


def segment_lift(verts, double cx, double cy):
    cdef const double[:, ::1] v = np.ascontiguousarray(verts, dtype=np.float64)
    cdef Py_ssize_t i, n = v.shape[0]
    cdef double ux, uy, wx, wy, dx, dy, dd, t, px, py, dist
    cdef double lift = 0.0
    cdef double min_dist = 1e300
    with nogil:
        for i in range(n - 1):
            ux = v[i, 0] - cx
            uy = v[i, 1] - cy
            wx = v[i + 1, 0] - cx
            wy = v[i + 1, 1] - cy
            lift += atan2(ux * wy - uy * wx, ux * wx + uy * wy)
            dx = wx - ux
            dy = wy - uy
            dd = dx * dx + dy * dy
            t = 0.0
            if dd > 0:
                t = -(ux * dx + uy * dy) / dd
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
            px = ux + t * dx
            py = uy + t * dy
            dist = sqrt(px * px + py * py)
            if dist < min_dist:
                min_dist = dist
    return lift, min_dist


cdef int[4] _DX
cdef int[4] _DY
_DX[:] = [1, 0, 0, -1]
_DY[:] = [0, 1, -1, 0]


cdef void _dfs(int x, int y, int n, int c, int bx, int by, int extent,
               int pi, int pj, int offset, long long* counts) noexcept nogil:
    cdef int k, nx, ny, dc, dist
    if n == 0:
        if x == bx and y == by:
            counts[c + offset] += 1
        return
    dist = abs(x - bx) + abs(y - by)
    if dist > n or ((n - dist) & 1):
        return
    for k in range(4):
        nx = x + _DX[k]
        ny = y + _DY[k]
        if nx > extent or nx < -extent or ny > extent or ny < -extent:
            continue
        dc = 0
        if _DX[k] == 0 and x > pi:
            if y == pj and ny == pj + 1:
                dc = 1
            elif y == pj + 1 and ny == pj:
                dc = -1
        _dfs(nx, ny, n - 1, c + dc, bx, by, extent, pi, pj, offset, counts)


def count_sectors(int sx, int sy, int bx, int by, int nsteps, int extent, int pi, int pj):
    counts = np.zeros(2 * nsteps + 1, dtype=np.int64)
    cdef long long[::1] cv = counts
    with nogil:
        _dfs(sx, sy, nsteps, 0, bx, by, extent, pi, pj, nsteps, &cv[0])
    return counts
