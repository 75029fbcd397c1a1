#!/usr/bin/env python3
"""Benchmark the JIT kernels against their numpy/scipy fallbacks.

The three hot loops are pairwise segment intersection over polyline edges,
Dijkstra over the graded polar mesh, and batch winding counts.  Run as

    python benchmarks/bench_kernels.py [--sizes 512,1024,2048]

With LIOUVILLE_DISK_NO_NUMBA=1 the package itself would use the fallback
everywhere; this script always times both implementations side by side
(when numba is importable).
"""

import argparse
import time

import numpy as np

from liouville_disk import _kernels as K
from liouville_disk.mesh import build_polar_mesh


def timeit(fn, *args, repeat=5):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def wiggly_curve(n, seed=0):
    rng = np.random.default_rng(seed)
    t = np.linspace(0, 2 * np.pi, n + 1)[:-1]
    r = 1 + 0.45 * np.cos(5 * t) + 0.15 * np.cos(11 * t + rng.uniform(0, 2 * np.pi))
    pts = np.column_stack([r * np.cos(t), r * np.sin(t)])
    return pts, np.roll(pts, -1, axis=0)


def bench_segments(sizes):
    print("segment_hits: all-pairs proper intersections of a closed polyline")
    for n in sizes:
        a, b = wiggly_curve(n)
        ax, ay = np.ascontiguousarray(a[:, 0]), np.ascontiguousarray(a[:, 1])
        bx, by = np.ascontiguousarray(b[:, 0]), np.ascontiguousarray(b[:, 1])
        t_np = timeit(K._segment_hits_np, ax, ay, bx, by, 1, 0.0)
        if K.HAVE_NUMBA:
            K._segment_hits_nb(ax, ay, bx, by, 1, 0.0)  # compile outside timing
            t_nb = timeit(K._segment_hits_nb, ax, ay, bx, by, 1, 0.0)
            print(f"  E={n:5d}: numba {t_nb * 1e3:8.2f} ms   numpy {t_np * 1e3:8.2f} ms   "
                  f"speedup {t_np / t_nb:5.1f}x")
        else:
            print(f"  E={n:5d}: numpy {t_np * 1e3:8.2f} ms   (numba unavailable)")


def bench_dijkstra(sizes):
    print("dijkstra: shortest paths over the graded polar mesh")
    for n in sizes:
        mesh = build_polar_mesh(n)
        w = mesh.edge_lengths
        src = mesh.boundary_node(1.0)
        args = (mesh.indptr, mesh.indices.astype(np.int64), w, src, mesh.n_nodes)
        t_np = timeit(K._dijkstra_np, *args)
        if K.HAVE_NUMBA:
            K._dijkstra_nb(*args)
            t_nb = timeit(K._dijkstra_nb, *args)
            print(f"  n={n:5d} ({mesh.n_nodes:6d} nodes): numba {t_nb * 1e3:8.2f} ms   "
                  f"scipy {t_np * 1e3:8.2f} ms   ratio {t_np / t_nb:5.1f}x")
        else:
            print(f"  n={n:5d}: scipy {t_np * 1e3:8.2f} ms   (numba unavailable)")


def bench_winding(sizes):
    print("winding_batch: winding numbers of a polyline around query points")
    rng = np.random.default_rng(1)
    for n in sizes:
        poly, _ = wiggly_curve(n)
        pts = rng.uniform(-2, 2, size=(4096, 2))
        px, py = np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1])
        vx, vy = np.ascontiguousarray(poly[:, 0]), np.ascontiguousarray(poly[:, 1])
        t_np = timeit(K._winding_batch_np, px, py, vx, vy)
        if K.HAVE_NUMBA:
            K._winding_batch_nb(px, py, vx, vy)
            t_nb = timeit(K._winding_batch_nb, px, py, vx, vy)
            print(f"  V={n:5d} x 4096 pts: numba {t_nb * 1e3:8.2f} ms   numpy "
                  f"{t_np * 1e3:8.2f} ms   speedup {t_np / t_nb:5.1f}x")
        else:
            print(f"  V={n:5d}: numpy {t_np * 1e3:8.2f} ms   (numba unavailable)")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="512,1024,2048")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"numba available: {K.HAVE_NUMBA}")
    bench_segments(sizes)
    bench_dijkstra(sizes)
    bench_winding(sizes)


if __name__ == "__main__":
    main()
