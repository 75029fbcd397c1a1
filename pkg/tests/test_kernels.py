"""Parity between the JIT kernels and their numpy/scipy fallbacks, plus the
graded mesh plumbing they serve.
"""

import numpy as np

from liouville_disk import _kernels as K
from liouville_disk.mesh import build_polar_mesh, metric_weights, shortest_path_distance


def random_graph(n, seed):
    rng = np.random.default_rng(seed)
    rows, cols, w = [], [], []
    for u in range(n):
        for v in rng.choice(n, size=5, replace=False):
            if int(v) != u:
                rows.append(u)
                cols.append(int(v))
                w.append(float(rng.uniform(0.1, 2.0)))
    order = np.lexsort((cols, rows))
    rows = np.asarray(rows)[order]
    cols = np.asarray(cols)[order]
    w = np.asarray(w)[order]
    indptr = np.searchsorted(rows, np.arange(n + 1))
    return indptr, cols, w


class TestDijkstraParity:
    def test_matches_scipy_fallback(self):
        n = 300
        indptr, cols, w = random_graph(n, seed=4)
        d_fast = K.dijkstra(indptr, cols, w, 0, n)
        d_ref = K._dijkstra_np(indptr, cols, w, 0, n)
        assert np.max(np.abs(d_fast - d_ref)) < 1e-12

    def test_unreachable_nodes_infinite(self):
        indptr = np.array([0, 1, 1, 1], dtype=np.int64)
        cols = np.array([1], dtype=np.int64)
        w = np.array([1.0])
        d = K.dijkstra(indptr, cols, w, 0, 3)
        assert d[1] == 1.0 and np.isinf(d[2])


class TestSegmentHitsParity:
    def test_same_pairs_as_fallback(self):
        rng = np.random.default_rng(7)
        t = np.linspace(0, 2 * np.pi, 301)[:-1]
        r = 1 + 0.6 * np.cos(3 * t + 0.2) + 0.05 * rng.normal(size=t.size)
        pts = np.column_stack([r * np.cos(t), r * np.sin(t)])
        a, b = pts, np.roll(pts, -1, axis=0)
        got = K.segment_hits(a, b)
        ref = K._segment_hits_np(a[:, 0], a[:, 1], b[:, 0], b[:, 1], 1, 0.0)
        assert sorted(zip(got[0], got[1])) == sorted(zip(ref[0], ref[1]))


class TestWindingParity:
    def test_matches_fallback(self):
        t = np.linspace(0, 2 * np.pi, 129)[:-1]
        poly = np.column_stack([(1 + 2 * np.cos(t)) * np.cos(t), (1 + 2 * np.cos(t)) * np.sin(t)])
        rng = np.random.default_rng(9)
        pts = rng.uniform(-3, 3, size=(50, 2))
        got = K.winding_batch(pts, poly)
        ref = K._winding_batch_np(pts[:, 0], pts[:, 1], poly[:, 0], poly[:, 1])
        assert np.array_equal(got, ref)

    def test_limacon_winding_two_inside_inner_loop(self):
        t = np.linspace(0, 2 * np.pi, 513)[:-1]
        poly = np.column_stack([(1 + 2 * np.cos(t)) * np.cos(t), (1 + 2 * np.cos(t)) * np.sin(t)])
        w = K.winding_batch(np.array([[0.5, 0.0], [2.0, 0.0], [9.0, 0.0]]), poly)
        assert list(w) == [2, 1, 0]


class TestMesh:
    def test_boundary_nodes_and_flat_distance(self):
        mesh = build_polar_mesh(128)
        j = mesh.boundary_node(1.0)
        assert abs(mesh.nodes[j] - 1.0) < 1e-12
        weights = metric_weights(mesh, lambda z: np.ones(z.shape))
        d = shortest_path_distance(mesh, weights, mesh.boundary_node(1.0), mesh.boundary_node(-1.0))
        assert abs(d - 2.0) <= 2 * (2 * np.pi / 128)

    def test_grading_reaches_center(self):
        mesh = build_polar_mesh(256)
        assert np.min(np.abs(mesh.nodes)) == 0.0  # center node present
        radii = np.unique(np.round(np.abs(mesh.nodes), 12))
        assert radii[-1] == 1.0
        assert len(radii) >= 8
