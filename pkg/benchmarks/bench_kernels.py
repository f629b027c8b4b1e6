"""Compare the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--steps 10] [--repeat 5]
"""
import argparse
import time

import numpy as np

from fundgroupoid import _pykernels, kernels

try:
    from fundgroupoid import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=10)
    ap.add_argument("--vertices", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()
    if _ckernels is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")

    rng = np.random.default_rng(0)
    verts = rng.uniform(-5, 5, size=(args.vertices, 2))
    verts = verts[np.hypot(verts[:, 0] - 0.1, verts[:, 1] - 0.2) > 0.05]

    rows = []
    tp, (lp, _) = best_of(lambda: _pykernels.segment_lift(verts, 0.1, 0.2), args.repeat)
    tc, (lc, _) = best_of(lambda: _ckernels.segment_lift(verts, 0.1, 0.2), args.repeat)
    assert abs(lp - lc) < 1e-6 * max(1.0, abs(lp))
    rows.append((f"segment_lift ({len(verts)} vertices)", tp, tc))

    sargs = (1, 0, 1, 0, args.steps, 4, 0, 0)
    tp, cp = best_of(lambda: _pykernels.count_sectors(*sargs), 1)
    tc, cc = best_of(lambda: _ckernels.count_sectors(*sargs), args.repeat)
    assert list(cp) == list(cc)
    rows.append((f"count_sectors (N={args.steps})", tp, tc))

    tt, ct = best_of(
        lambda: kernels.count_sectors((1, 0), (1, 0), args.steps, 4, (0, 0), threads=args.threads, impl=_ckernels),
        args.repeat,
    )
    assert ct == {c - args.steps: int(k) for c, k in enumerate(cc) if k}

    print(f"{'kernel':<34}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for name, a, b in rows:
        print(f"{name:<34}{a:>12.4f}{b:>12.4f}{a / b:>9.1f}x")
    print(f"count_sectors, {args.threads} threads (cython): {tt:.4f}s")


if __name__ == "__main__":
    main()
