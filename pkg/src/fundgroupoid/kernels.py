"""Backend selection for the hot kernels.

The compiled extension is used when it imports; setting
``FUNDGROUPOID_PURE_PYTHON=1`` forces the numpy fallback.
``FUNDGROUPOID_THREADS`` sets the worker count for sharded walk counting.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from . import _pykernels

if os.environ.get("FUNDGROUPOID_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

segment_lift = _impl.segment_lift

_STEPS = ((1, 0), (0, 1), (0, -1), (-1, 0))


def thread_count():
    try:
        return max(1, int(os.environ.get("FUNDGROUPOID_THREADS", "1")))
    except ValueError:
        return 1


def _prefixes(start, end, nsteps, depth, extent, plaquette):
    """Expand walk prefixes of length ``depth``; yields (site, crossings)."""
    pi, pj = plaquette
    frontier = [(start, 0)]
    for level in range(depth):
        left = nsteps - level - 1
        nxt = []
        for (x, y), c in frontier:
            for dx, dy in _STEPS:
                nx, ny = x + dx, y + dy
                if max(abs(nx), abs(ny)) > extent:
                    continue
                dist = abs(nx - end[0]) + abs(ny - end[1])
                if dist > left or (left - dist) & 1:
                    continue
                dc = 0
                if dx == 0 and x > pi:
                    if y == pj and ny == pj + 1:
                        dc = 1
                    elif y == pj + 1 and ny == pj:
                        dc = -1
                nxt.append(((nx, ny), c + dc))
        frontier = nxt
    return frontier


def count_sectors(start, end, nsteps, extent, plaquette, *, threads=None, impl=None):
    """Map net cut-crossing count -> number of walks, over all N-step walks.

    The walk set is partitioned by step prefix; shards are merged as exact
    integer counts, so the result does not depend on the thread count.
    """
    impl = impl or _impl
    threads = thread_count() if threads is None else threads
    pi, pj = plaquette
    if threads <= 1 or nsteps < 4:
        arr = impl.count_sectors(start[0], start[1], end[0], end[1], nsteps, extent, pi, pj)
        return {c - nsteps: int(k) for c, k in enumerate(arr) if k}

    depth = 2
    shards = _prefixes(start, end, nsteps, depth, extent, plaquette)
    rest = nsteps - depth

    def run(shard):
        (x, y), c0 = shard
        arr = impl.count_sectors(x, y, end[0], end[1], rest, extent, pi, pj)
        return c0, arr

    out = {}
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for c0, arr in pool.map(run, shards):
            for c, k in enumerate(arr):
                if k:
                    key = c - rest + c0
                    out[key] = out.get(key, 0) + int(k)
    return dict(sorted(out.items()))
