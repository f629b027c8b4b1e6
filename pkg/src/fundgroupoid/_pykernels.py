"""Pure-Python/numpy versions of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable or disabled.
Signatures and return types match the compiled module exactly.
"""
from __future__ import annotations

import numpy as np


def segment_lift(verts, cx, cy):
    """Return ``(lift, min_dist)`` of a polyline seen from ``(cx, cy)``.

    ``lift`` is the sum of per-segment signed angles, each in (-pi, pi];
    ``min_dist`` is the smallest distance from the point to any segment.
    """
    v = np.asarray(verts, dtype=np.float64)
    rel = v - (cx, cy)
    u, w = rel[:-1], rel[1:]
    cross = u[:, 0] * w[:, 1] - u[:, 1] * w[:, 0]
    dot = u[:, 0] * w[:, 0] + u[:, 1] * w[:, 1]
    lift = float(np.arctan2(cross, dot).sum())

    d = w - u
    dd = (d * d).sum(axis=1)
    t = np.clip(-(u * d).sum(axis=1) / np.where(dd > 0, dd, 1.0), 0.0, 1.0)
    closest = u + t[:, None] * d
    min_dist = float(np.sqrt((closest * closest).sum(axis=1)).min())
    return lift, min_dist


_STEPS = ((1, 0), (0, 1), (0, -1), (-1, 0))  # E, N, S, W


def count_sectors(sx, sy, bx, by, nsteps, extent, pi, pj):
    """Count lattice walks by signed crossings of the puncture's cut ray.

    Walks start at site ``(sx, sy)``, take ``nsteps`` nearest-neighbour steps
    inside ``|i|, |j| <= extent`` and end at ``(bx, by)``. The puncture sits
    in the plaquette with lower-left site ``(pi, pj)``; the cut is the ray
    leaving it in the +x direction. Returns an int64 array of length
    ``2 * nsteps + 1`` where index ``c + nsteps`` holds the number of walks
    with net crossing count ``c`` (upward crossings count +1).
    """
    counts = np.zeros(2 * nsteps + 1, dtype=np.int64)

    def dfs(x, y, n, c):
        if n == 0:
            if x == bx and y == by:
                counts[c + nsteps] += 1
            return
        dist = abs(x - bx) + abs(y - by)
        if dist > n or (n - dist) & 1:
            return
        for dx, dy in _STEPS:
            nx, ny = x + dx, y + dy
            if nx > extent or nx < -extent or ny > extent or ny < -extent:
                continue
            dc = 0
            if dx == 0 and x > pi:
                if y == pj and ny == pj + 1:
                    dc = 1
                elif y == pj + 1 and ny == pj:
                    dc = -1
            dfs(nx, ny, n - 1, c + dc)

    dfs(sx, sy, nsteps, 0)
    return counts
