"""Closed planar polylines with corner markers: the discrete stand-in for
piecewise-C1 curves.

Rotation index = (smooth turning along arcs + exterior angles at corners) /
2*pi, asserted to land on an integer within the 0.05 rounding guard.  The
exterior angle at a corner lives in [-pi, pi]; exactly reversed tangents are
resolved by a side probe three edges out (left turn gets +pi).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import segment_hits
from .errors import (
    InvalidInput,
    JitterTooLarge,
    NotGenericPosition,
    NumericalInconsistency,
    TieBreakAmbiguous,
    WrongArity,
)
from .predicates import orient2d, segment_verdict, snap

TWO_PI = 2.0 * np.pi
MAX_SMOOTH_TURN = 0.3
TRANSVERSALITY_ANGLE = 0.05


def wrap_angle(x):
    """Wrap to (-pi, pi]."""
    return np.angle(np.exp(1j * np.asarray(x, dtype=float)))


@dataclass
class PolyCurve:
    """Closed polyline; corners maps vertex index -> (tangent_in, tangent_out)
    angles or None when the incident edge directions stand in for them."""

    vertices: np.ndarray
    corners: dict = field(default_factory=dict)
    orientation: str = "ccw"

    def __post_init__(self):
        v = snap(np.asarray(self.vertices, dtype=float))
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 8:
            raise InvalidInput("curve needs at least 8 planar vertices")
        edges = np.roll(v, -1, axis=0) - v
        lengths = np.hypot(edges[:, 0], edges[:, 1])
        if np.any(lengths == 0.0):
            raise InvalidInput("zero-length edge after snapping")
        self.vertices = v
        self.corners = {int(k): t for k, t in self.corners.items()}
        for k in self.corners:
            if not 0 <= k < v.shape[0]:
                raise InvalidInput(f"corner index {k} out of range")
        ang = np.arctan2(edges[:, 1], edges[:, 0])
        turn = wrap_angle(ang - np.roll(ang, 1))
        smooth = np.setdiff1d(np.arange(v.shape[0]), list(self.corners))
        if smooth.size and np.max(np.abs(turn[smooth])) >= MAX_SMOOTH_TURN:
            j = smooth[int(np.argmax(np.abs(turn[smooth])))]
            raise InvalidInput(
                f"turning {abs(turn[j]):.3f} rad at non-corner vertex {j} "
                f"(discrete C1 proxy is {MAX_SMOOTH_TURN})"
            )

    @property
    def m(self) -> int:
        return self.vertices.shape[0]

    def edge_vectors(self) -> np.ndarray:
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    def edge_angles(self) -> np.ndarray:
        e = self.edge_vectors()
        return np.arctan2(e[:, 1], e[:, 0])

    def edge_lengths(self) -> np.ndarray:
        e = self.edge_vectors()
        return np.hypot(e[:, 0], e[:, 1])

    def point_at(self, param: float) -> np.ndarray:
        """Point at curve parameter i + t (edge index plus fraction)."""
        i = int(np.floor(param)) % self.m
        t = param - np.floor(param)
        return (1 - t) * self.vertices[i] + t * self.vertices[(i + 1) % self.m]

    def to_json(self) -> dict:
        obj = {
            "vertices": [[float(x), float(y)] for x, y in self.vertices],
            "closed": True,
            "corners": sorted(self.corners),
            "orientation": self.orientation,
        }
        tangents = {
            str(k): [float(t[0]), float(t[1])]
            for k, t in self.corners.items()
            if t is not None
        }
        if tangents:
            obj["corner_tangents"] = tangents
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "PolyCurve":
        corners = {int(k): None for k in obj.get("corners", [])}
        for k, pair in obj.get("corner_tangents", {}).items():
            corners[int(k)] = (float(pair[0]), float(pair[1]))
        return cls(
            vertices=np.asarray(obj["vertices"], dtype=float),
            corners=corners,
            orientation=obj.get("orientation", "ccw"),
        )


@dataclass(frozen=True)
class RotationReport:
    index: int
    total_turning: float
    exterior_angles: dict


def _tie_break_pi(c: PolyCurve, k: int, tin: float) -> float:
    """Resolve an exterior angle of +-pi: probe which side of the incoming
    tangent line the curve occupies three edges past the corner."""
    m = c.m
    corner = c.vertices[k]
    ahead = c.vertices[(k + 3) % m]
    ref = corner + np.array([np.cos(tin), np.sin(tin)])
    side = orient2d(corner, ref, ahead)
    if side == 0:
        raise TieBreakAmbiguous(f"side probe at corner {k} is collinear")
    return np.pi if side > 0 else -np.pi


def rotation_index(c: PolyCurve, guard: float = 0.05) -> RotationReport:
    """Total turning / 2*pi, asserted integral within the rounding guard.

    Recorded corner tangents take precedence over incident edge directions;
    at each corner the arc turning is corrected to end at tangent_in and
    restart at tangent_out, and the exterior angle is their wrapped gap.
    """
    ang = c.edge_angles()
    m = c.m
    total = 0.0
    exterior = {}
    for k in range(m):
        prev_dir = ang[(k - 1) % m]
        next_dir = ang[k]
        if k in c.corners:
            rec = c.corners[k]
            tin, tout = rec if rec is not None else (prev_dir, next_dir)
            eps = float(wrap_angle(tout - tin))
            if abs(abs(eps) - np.pi) < 1e-9:
                eps = _tie_break_pi(c, k, tin)
            exterior[k] = eps
            total += wrap_angle(tin - prev_dir) + eps + wrap_angle(next_dir - tout)
        else:
            total += wrap_angle(next_dir - prev_dir)
    value = total / TWO_PI
    nearest = round(value)
    if abs(value - nearest) >= guard:
        raise NumericalInconsistency(
            f"total turning {value:.4f} x 2*pi is not an integer within {guard}"
        )
    return RotationReport(index=int(nearest), total_turning=float(total), exterior_angles=exterior)


@dataclass(frozen=True)
class Crossing:
    """Transversal self-intersection: edge i at fraction s meets edge j at t."""

    i: int
    s: float
    j: int
    t: float
    point: np.ndarray
    angle: float

    @property
    def param_first(self) -> float:
        return self.i + self.s

    @property
    def param_second(self) -> float:
        return self.j + self.t


def self_intersections(c: PolyCurve, eta_t: float = TRANSVERSALITY_ANGLE):
    """All pairwise edge crossings, with parameters, crossing angle, and order
    along the curve.  Near-tangential crossings, endpoint touches, and
    crossings within two edges of a corner raise NotGenericPosition."""
    v = c.vertices
    a = v
    b = np.roll(v, -1, axis=0)
    ii, jj, ss, tt, flags = segment_hits(a, b, skip_neighbors=1)
    ang = c.edge_angles()
    out = []
    for i, j, s, t, flag in zip(ii, jj, ss, tt, flags):
        i, j = int(i), int(j)
        if flag:
            verdict = segment_verdict(a[i], b[i], a[j], b[j])
            if verdict[0] == "none":
                continue
            if verdict[0] == "degenerate":
                raise NotGenericPosition(
                    f"edges {i} and {j} touch degenerately; jitter the curve"
                )
            _, s, t = verdict
        cross_angle = abs(wrap_angle(ang[j] - ang[i]))
        cross_angle = min(cross_angle, np.pi - cross_angle)
        if cross_angle < eta_t:
            raise NotGenericPosition(
                f"crossing of edges {i}, {j} at angle {cross_angle:.4f} < {eta_t}"
            )
        for corner in c.corners:
            d = min(
                min(abs(i - corner), c.m - abs(i - corner)),
                min(abs(j - corner), c.m - abs(j - corner)),
            )
            if d < 2:
                raise NotGenericPosition(
                    f"crossing on edge pair ({i}, {j}) within 2 edges of corner {corner}"
                )
        point = (1 - s) * a[i] + s * b[i]
        out.append(Crossing(i=i, s=float(s), j=j, t=float(t), point=point, angle=float(cross_angle)))
    out.sort(key=lambda x: (x.i, x.s))
    return out


def jitter(c: PolyCurve, seed: int, magnitude: float) -> PolyCurve:
    """Deterministic pseudo-random vertex perturbation; the rotation index must
    survive, otherwise JitterTooLarge."""
    min_edge = float(np.min(c.edge_lengths()))
    if magnitude >= 0.1 * min_edge:
        raise InvalidInput(
            f"magnitude {magnitude:.3g} >= 0.1 x min edge length {min_edge:.3g}"
        )
    if magnitude == 0.0:
        return PolyCurve(c.vertices.copy(), dict(c.corners), c.orientation)
    rng = np.random.default_rng(seed)
    moved = c.vertices + rng.uniform(-magnitude, magnitude, size=c.vertices.shape)
    before = rotation_index(c).index
    out = PolyCurve(moved, dict(c.corners), c.orientation)
    after = rotation_index(out).index
    if after != before:
        raise JitterTooLarge(f"rotation index changed {before} -> {after}")
    return out


def corner_angle_check(c: PolyCurve) -> float:
    """Smooth-turning total across the single corner: phi(b^-) - phi(b^+).

    Equals 2*pi*r minus the exterior angle; callers assert >= pi for curves
    bounding singular immersions."""
    if len(c.corners) != 1:
        raise WrongArity(f"expected exactly one corner, got {len(c.corners)}")
    rep = rotation_index(c)
    (k, eps), = rep.exterior_angles.items()
    return float(TWO_PI * rep.index - eps)


def _bezier_blend(p0, p1, p2, n_pts):
    """Quadratic Bezier through control points; tangents run p0->p1 and p1->p2."""
    t = np.linspace(0.0, 1.0, n_pts)[1:-1, None]
    return (1 - t) ** 2 * p0 + 2 * t * (1 - t) * p1 + t**2 * p2


def fillet_corners(c: PolyCurve, span: int = 4) -> PolyCurve:
    """Round every corner over `span` edges on each side with a Bezier blend.

    Total turning across the blend equals the corner's exterior angle, so the
    rotation index is preserved; words of Blank are built on the flattened
    curve.
    """
    if not c.corners:
        return c
    m = c.m
    lengths = c.edge_lengths()
    keep = np.ones(m, dtype=bool)
    inserts = {}  # vertex index after which blended points follow
    for k in sorted(c.corners):
        # trim points: span edges back and forward from the corner
        a_idx = (k - span) % m
        b_idx = (k + span) % m
        p0 = c.vertices[a_idx]
        p2 = c.vertices[b_idx]
        rec = c.corners[k]
        if rec is not None:
            tin, tout = rec
            # control point at the intersection of the tangent lines; fall back
            # to the corner vertex when nearly parallel
            d_in = np.array([np.cos(tin), np.sin(tin)])
            d_out = np.array([np.cos(tout), np.sin(tout)])
            denom = d_in[0] * (-d_out[1]) - d_in[1] * (-d_out[0])
            if abs(denom) > 1e-9:
                rhs = p2 - p0
                s = (rhs[0] * (-d_out[1]) - rhs[1] * (-d_out[0])) / denom
                p1 = p0 + s * d_in
            else:
                p1 = c.vertices[k]
        else:
            p1 = c.vertices[k]
        eps = abs(float(wrap_angle(np.arctan2(*(p2 - p1)[::-1]) - np.arctan2(*(p1 - p0)[::-1]))))
        n_pts = max(int(np.ceil(eps / 0.2)) + 2, 4)
        for d in range(span):
            keep[(k - 1 - d) % m] = False  # drop points strictly between a_idx and corner
            keep[(k + d) % m if d > 0 else k] = False
        keep[a_idx] = True
        keep[b_idx] = True
        inserts[a_idx] = _bezier_blend(p0, p1, p2, n_pts + 2)
    new_pts = []
    for idx in range(m):
        if keep[idx]:
            new_pts.append(c.vertices[idx])
        if idx in inserts and keep[idx]:
            new_pts.extend(inserts[idx])
    return PolyCurve(np.asarray(new_pts), {}, c.orientation)
