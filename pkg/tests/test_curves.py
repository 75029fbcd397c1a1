"""Rotation index, self-intersection detection, jitter, and corner machinery
against closed-form and dense-sampling oracles.
"""

import numpy as np
import pytest

from liouville_disk.curves import (
    PolyCurve,
    corner_angle_check,
    fillet_corners,
    jitter,
    rotation_index,
    self_intersections,
    wrap_angle,
)
from liouville_disk.errors import (
    InvalidInput,
    NotGenericPosition,
    WrongArity,
)
from liouville_disk.fixtures import (
    circle,
    figure_eight,
    fseifert,
    limacon,
    marked_square,
    tangent_touch,
)

TWO_PI = 2 * np.pi


def dense_turning_oracle(x_fn, y_fn, n=200_000):
    """Independent oracle: total turning of a C1 parametric curve from a very
    dense tangent sweep."""
    t = np.linspace(0, TWO_PI, n, endpoint=False)
    dx = np.gradient(x_fn(t), t)
    dy = np.gradient(y_fn(t), t)
    ang = np.arctan2(dy, dx)
    turn = wrap_angle(np.diff(np.concatenate([ang, ang[:1]])))
    return float(np.sum(turn) / TWO_PI)


class TestRotationIndex:
    def test_circle(self):
        assert rotation_index(circle(256)).index == 1

    def test_limacon_against_oracle(self):
        oracle = dense_turning_oracle(
            lambda t: (1 + 2 * np.cos(t)) * np.cos(t),
            lambda t: (1 + 2 * np.cos(t)) * np.sin(t),
        )
        assert round(oracle) == 2
        assert rotation_index(limacon()).index == 2

    def test_figure_eight_against_oracle(self):
        oracle = dense_turning_oracle(
            lambda t: np.sin(t), lambda t: np.sin(t) * np.cos(t)
        )
        assert round(oracle) == 0
        assert rotation_index(figure_eight()).index == 0

    def test_marked_square(self):
        rep = rotation_index(marked_square())
        assert rep.index == 1
        assert len(rep.exterior_angles) == 4
        for eps in rep.exterior_angles.values():
            assert abs(eps - np.pi / 2) < 1e-12

    def test_invariance_under_relabeling_rigid_motion_scaling(self):
        rng = np.random.default_rng(0)
        base = limacon()
        for _ in range(50):
            shift = int(rng.integers(0, base.m))
            rot = rng.uniform(0, TWO_PI)
            scale = np.exp(rng.uniform(-1, 1))
            off = rng.normal(size=2)
            R = np.array([[np.cos(rot), -np.sin(rot)], [np.sin(rot), np.cos(rot)]])
            v = np.roll(base.vertices, shift, axis=0)
            v = scale * (v @ R.T) + off
            assert rotation_index(PolyCurve(v)).index == 2

    def test_jitter_invariance_50_trials(self):
        cases = [(circle(256), 1), (limacon(), 2), (figure_eight(), 0)]
        rng = np.random.default_rng(1)
        trials = 0
        while trials < 50:
            c, idx = cases[trials % 3]
            h = float(np.min(c.edge_lengths()))
            j = jitter(c, seed=int(rng.integers(1 << 31)), magnitude=0.02 * h)
            assert rotation_index(j).index == idx
            trials += 1


def slit_curve(up: bool):
    """Thin slit with one exact tangent-reversal corner at the right end; the
    return strand sits above (up) or below the outgoing one."""
    delta = 0.02 if up else -0.02
    pts = [[x, 0.0] for x in np.linspace(0, 1, 5)]
    pts += [[x, delta] for x in np.linspace(0.75, 0.0, 4)]
    # rounded cap on the left joining (0, delta) back to (0, 0)
    cy, r = delta / 2, abs(delta) / 2
    s = 1.0 if up else -1.0
    sweep = np.linspace(s * np.pi / 2, s * 3 * np.pi / 2, 16)[1:-1]
    pts += [[r * np.cos(a), cy + r * np.sin(a)] for a in sweep]
    corners = {4: (0.0, np.pi)}
    return PolyCurve(np.asarray(pts), corners=corners)


class TestPiTieBreak:
    def test_left_turn_gets_plus_pi(self):
        c = slit_curve(up=True)
        rep = rotation_index(c)
        assert abs(rep.exterior_angles[4] - np.pi) < 1e-12
        assert rep.index == 1

    def test_right_turn_gets_minus_pi(self):
        # the mirrored slit turns right at the reversal: exterior angle -pi
        # and the whole curve is clockwise
        c = slit_curve(up=False)
        rep = rotation_index(c)
        assert abs(rep.exterior_angles[4] + np.pi) < 1e-12
        assert rep.index == -1


class TestSelfIntersections:
    def test_circle_empty(self):
        assert self_intersections(circle(256)) == []

    def test_limacon_single_crossing_at_origin(self):
        # polar algebra: r = 1 + 2 cos(theta) vanishes at theta = +-2pi/3, so
        # the unique crossing is the origin
        xs = self_intersections(limacon())
        assert len(xs) == 1
        assert np.hypot(*xs[0].point) < 0.05

    def test_figure_eight_single_crossing(self):
        xs = self_intersections(figure_eight())
        assert len(xs) == 1

    def test_crossing_order_and_angle(self):
        xs = self_intersections(fseifert())
        assert len(xs) == 2
        for x in xs:
            assert x.angle >= 0.05
            assert 0 < x.s < 1 and 0 < x.t < 1
            assert x.param_first < x.param_second

    def test_tangential_touch_rejected(self):
        with pytest.raises(NotGenericPosition):
            self_intersections(tangent_touch())


class TestJitter:
    def test_zero_magnitude_identity(self):
        c = limacon()
        j = jitter(c, seed=3, magnitude=0.0)
        assert np.array_equal(j.vertices, c.vertices)

    def test_magnitude_cap(self):
        c = circle(64)
        with pytest.raises(InvalidInput):
            jitter(c, seed=0, magnitude=1.0)

    def test_tangential_resolves_both_ways(self):
        tt = tangent_touch()
        h = float(np.min(tt.edge_lengths()))
        seen = set()
        for seed in range(1, 30):
            try:
                j = jitter(tt, seed=seed, magnitude=0.03 * h)
                xs = self_intersections(j)
            except NotGenericPosition:
                continue
            assert len(xs) in (0, 2)
            assert rotation_index(j).index == 1
            seen.add(len(xs))
        assert seen == {0, 2}  # both resolutions occur across seeds


def one_corner_square():
    """Unit square with three corners rounded off and one kept sharp."""
    r = 0.25
    pts = []
    pts += [[x, 0.0] for x in np.linspace(r, 1.0, 7)]  # bottom; sharp corner at (1, 0)
    pts += [[1.0, y] for y in np.linspace(0.0, 1 - r, 7)[1:]]
    for a in np.linspace(0, np.pi / 2, 8)[1:]:  # round (1, 1) about (1-r, 1-r)
        pts.append([1 - r + r * np.cos(a), 1 - r + r * np.sin(a)])
    pts += [[x, 1.0] for x in np.linspace(1 - r, r, 5)[1:]]
    for a in np.linspace(np.pi / 2, np.pi, 8)[1:]:  # round (0, 1) about (r, 1-r)
        pts.append([r + r * np.cos(a), 1 - r + r * np.sin(a)])
    pts += [[0.0, y] for y in np.linspace(1 - r, r, 5)[1:]]
    for a in np.linspace(np.pi, 3 * np.pi / 2, 8)[1:-1]:  # round (0, 0) about (r, r)
        pts.append([r + r * np.cos(a), r + r * np.sin(a)])
    sharp = 6  # index of (1, 0)
    return PolyCurve(np.asarray(pts), corners={sharp: None})


class TestCornerAngle:
    def test_one_corner_square(self):
        c = one_corner_square()
        rep = rotation_index(c)
        assert rep.index == 1
        assert abs(rep.exterior_angles[6] - np.pi / 2) < 1e-9
        turn = corner_angle_check(c)
        assert abs(turn - 3 * np.pi / 2) < 1e-9
        assert turn >= np.pi

    def test_circle_with_inserted_corner(self):
        c = PolyCurve(circle(256).vertices, corners={0: None})
        turn = corner_angle_check(c)
        assert abs(turn - TWO_PI) < 0.05
        assert turn >= np.pi

    def test_wrong_arity(self):
        with pytest.raises(WrongArity):
            corner_angle_check(marked_square())


class TestFillet:
    def test_square_fillet_preserves_index(self):
        f = fillet_corners(marked_square())
        assert not f.corners
        assert rotation_index(f).index == 1

    def test_one_corner_fillet(self):
        f = fillet_corners(one_corner_square())
        assert rotation_index(f).index == 1


def test_polycurve_json_roundtrip():
    c = slit_curve(up=True)
    c2 = PolyCurve.from_json(c.to_json())
    assert np.array_equal(c2.vertices, c.vertices)
    assert c2.corners == c.corners


def test_polycurve_rejects_sharp_unmarked():
    pts = [[x, 0.0] for x in np.linspace(0, 1, 5)]
    pts += [[x, 0.3] for x in np.linspace(1, 0, 5)]
    with pytest.raises(InvalidInput):
        PolyCurve(np.asarray(pts))
