"""Blow-up and quantization checks on explicit solution families.

The exact one-parameter family u(x) = log(2 mu / (1 + mu^2 |x - x0|^2))
solves the unit-curvature equation with total mass 2*pi.  Scaling ladders
mu_k = 2^k concentrate that mass at the center; the machinery here measures
concentration profiles alpha(r, k), detects blow-up points against the
pi threshold, classifies sequences by the drift of the circle mean of the
pullback, probes boundary pinching through the conformal distance, and
audits the lower bound Lambda >= pi on verified solutions.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .disk import DiskMap, analytic_completion, build_phi, conformal_distance, mobius_recenter
from .errors import (
    CenterUnstable,
    InconclusiveLimit,
    InconclusiveMesh,
    InvalidInput,
    TheoremViolation,
)
from .line import (
    CurvatureData,
    LineField,
    _piecewise_linear_integral,
    angle_of_x,
    asymptotic_slope,
    pull_back,
    stereo_project,
    transfer_equation,
)
from .spectral import TWO_PI, PeriodicGrid, grid_angles

POLE_ANGLE = -np.pi / 2


@dataclass(frozen=True)
class BubbleParams:
    """Scale and center of one member of the explicit solution family."""

    mu: float
    x0: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.mu) and self.mu > 0):
            raise InvalidInput(f"scale must be positive and finite, got {self.mu}")


class Bubble:
    """Closed-form family member: evaluator, measure density, and pullback."""

    def __init__(self, params: BubbleParams):
        self.params = params

    @property
    def mu(self):
        return self.params.mu

    @property
    def x0(self):
        return self.params.x0

    def u(self, x):
        x = np.asarray(x, dtype=float)
        return np.log(2 * self.mu / (1 + self.mu**2 * (x - self.x0) ** 2))

    def density(self, x):
        """The measure density K e^u with K = 1."""
        x = np.asarray(x, dtype=float)
        return 2 * self.mu / (1 + self.mu**2 * (x - self.x0) ** 2)

    def mass_in(self, r: float) -> float:
        """Closed-form concentrated mass: 4 arctan(mu r) around the center."""
        return 4.0 * np.arctan(self.mu * r)

    def lambda_at(self, thetas):
        """Stable pullback: in the chart q = tan((theta + pi/2)/2) = 1/Pi the
        value at the pole is exact (-log mu), with the direct formula away
        from q's own pole at theta = pi/2."""
        thetas = np.asarray(thetas, dtype=float)
        out = np.empty_like(thetas)
        t = np.mod(thetas - POLE_ANGLE + np.pi, TWO_PI) - np.pi  # offset from -pi/2
        near_pole = np.abs(t) < np.pi / 2
        q = np.tan(t[near_pole] / 2.0)
        out[near_pole] = np.log(self.mu) + np.log(
            (1 + q**2) / (q**2 + self.mu**2 * (1 - self.x0 * q) ** 2)
        )
        far = ~near_pole
        z = np.exp(1j * thetas[far])
        Pi = np.real(z) / (1 + np.imag(z))
        out[far] = np.log(self.mu) + np.log(
            (1 + Pi**2) / (1 + self.mu**2 * (Pi - self.x0) ** 2)
        )
        return out

    def pull_back(self, n: int) -> LineField:
        from .spectral import SingularField

        return LineField(SingularField(PeriodicGrid(self.lambda_at(grid_angles(n)))))

    def lambda_bar(self, n: int = 1024) -> float:
        return float(np.mean(self.lambda_at(grid_angles(n))))

    def disk_map(self, n: int | None = None) -> DiskMap:
        """Map of the disk built from the pullback; the series order scales
        with mu because the boundary modulus concentrates."""
        if n is None:
            n = max(256, 1 << int(np.ceil(np.log2(max(256.0, 20.0 * self.mu)))))
        bt = analytic_completion(self.pull_back(n).field)
        return build_phi(bt)


def bubble(params: BubbleParams | None = None, mu: float = 1.0, x0: float = 0.0) -> Bubble:
    return Bubble(params if params is not None else BubbleParams(mu, x0))


def line_field_from_json(obj: dict, n: int = 512) -> LineField:
    """Ingest a line-side function: {"kind": "bubble", "mu", "x0"} |
    {"kind": "grid", ...} | {"kind": "expr-table", "x": [...], "u": [...]}
    with monotone x (interpolated inside the table, log-slope tail outside).
    """
    kind = obj.get("kind", "grid")
    if kind == "grid":
        return LineField.from_json(obj)
    if kind == "bubble":
        return bubble(mu=float(obj["mu"]), x0=float(obj.get("x0", 0.0))).pull_back(n)
    if kind == "expr-table":
        xs = np.asarray(obj["x"], dtype=float)
        us = np.asarray(obj["u"], dtype=float)
        if xs.ndim != 1 or xs.shape != us.shape or np.any(np.diff(xs) <= 0):
            raise InvalidInput("expr-table needs monotone x aligned with u")
        # tails: continue linearly in log(1+|x|) from the table's end slopes
        def tail_slope(x0, x1, u0, u1):
            return (u1 - u0) / (np.log1p(abs(x1)) - np.log1p(abs(x0)))

        s_lo = tail_slope(xs[1], xs[0], us[1], us[0])
        s_hi = tail_slope(xs[-2], xs[-1], us[-2], us[-1])

        def u(x):
            x = np.asarray(x, dtype=float)
            out = np.interp(x, xs, us)
            lo = x < xs[0]
            hi = x > xs[-1]
            out = np.where(lo, us[0] + s_lo * (np.log1p(np.abs(x)) - np.log1p(abs(xs[0]))), out)
            out = np.where(hi, us[-1] + s_hi * (np.log1p(np.abs(x)) - np.log1p(abs(xs[-1]))), out)
            return out

        return pull_back(u, n)
    raise InvalidInput(f"unknown line-field kind {kind!r}")


def verify_solution(u, K, n: int = 512, anchor_coeff=None, pole_value=None):
    """Residual report for a claimed solution: routes through the circle
    pullback and the transferred equation; Lambda and the defect 2*pi - Lambda
    come back in the report.  Non-solutions still get a report (the strict
    Dirac-mismatch guard is for declared-anchor bookkeeping, not testing)."""
    lf = pull_back(u, n, anchor_coeff=anchor_coeff, pole_value=pole_value)
    kd = CurvatureData.from_evaluator(K, n)
    return transfer_equation(lf, kd, strict_dirac=False)


# --- concentration ------------------------------------------------------------

@dataclass
class ConcentrationProfile:
    """Table alpha(r, k) of measure mass in shrinking windows at one center."""

    center: float
    radii: np.ndarray  # decreasing
    ks: list
    alpha: np.ndarray  # shape (len(radii), len(ks))
    absolute: bool = False

    def __post_init__(self):
        if not np.all(np.isfinite(self.alpha)):
            raise InvalidInput("profile has non-finite entries")
        if self.absolute and np.any(np.diff(self.alpha, axis=0) > 1e-9):
            # radii decrease along axis 0, so mass must not increase
            warnings.warn("profile not monotone in r despite absolute values")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("r,k,alpha\n")
        for i, r in enumerate(self.radii):
            for j, k in enumerate(self.ks):
                buf.write(f"{float(r)!r},{int(k)},{float(self.alpha[i, j])!r}\n")
        return buf.getvalue()


def _circle_samples(density, n: int):
    """Unwrapped circle angles and line-integrand samples for one density."""
    th = grid_angles(n)
    jp = n // 4
    mask = np.arange(n) != jp
    x = np.empty(n)
    x[mask] = stereo_project(np.exp(1j * th[mask]))
    g = np.empty(n)
    g[mask] = np.asarray(density(x[mask]), dtype=float) / (1.0 + np.sin(th[mask]))
    from .line import _fill_pole

    g[jp] = _fill_pole(np.where(mask, g, 0.0), jp)
    tau = np.where(th < POLE_ANGLE, th + TWO_PI, th)
    order = np.argsort(tau)
    tau_ext = np.concatenate([tau[order], [tau[order][0] + TWO_PI]])
    g_ext = np.concatenate([g[order], [g[order][0]]])
    return tau_ext, g_ext


def locate_centers(density, n: int = 1 << 14, max_centers: int = 4):
    """Peaks of the measure density, found on the circle-image grid.

    The grid is cyclic (its seam sits at x = -1), so peaks are collected from
    two rolled copies and deduplicated."""
    th = grid_angles(n)
    jp = n // 4
    mask = np.arange(n) != jp
    x = stereo_project(np.exp(1j * th[mask]))
    vals = np.asarray(density(x), dtype=float)
    m = vals.size
    found = {}
    for shift in (0, m // 2):
        rolled = np.roll(vals, shift)
        peaks, _ = find_peaks(rolled, height=0.25 * float(np.max(vals)))
        for p in peaks:
            orig = (p - shift) % m
            found[orig] = vals[orig]
    if not found:
        found[int(np.argmax(vals))] = float(np.max(vals))
    ranked = sorted(found, key=lambda p: -found[p])
    centers = []
    for p in ranked:
        xp = float(x[p])
        if all(abs(xp - c) > 1e-6 for c in centers):
            centers.append(xp)
        if len(centers) >= max_centers:
            break
    return sorted(centers)


def concentration_scan(members, radii, centers=None, n: int = 1 << 16, absolute: bool = False):
    """alpha(r, k) tables, one profile per center.

    members: sequence of density evaluators (K e^u as a function on the line,
    or objects with a .density method).  Centers are auto-located at the peaks
    of the last member's density when not supplied; the per-member argmax near
    each center must not drift beyond the finest radius (CenterUnstable).

    Sampling over k is embarrassingly parallel; LIOUVILLE_DISK_THREADS caps
    the worker count (default 1) and assembly stays in index order.
    """
    import os

    dens = [m.density if hasattr(m, "density") else m for m in members]
    radii = np.asarray(sorted(radii, reverse=True), dtype=float)
    if centers is None:
        centers = locate_centers(dens[-1])
    ks = list(range(len(dens)))

    workers = max(1, int(os.environ.get("LIOUVILLE_DISK_THREADS", "1")))
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(lambda f: _circle_samples(f, n), dens))
    else:
        samples = [_circle_samples(f, n) for f in dens]
    profiles = []
    for center in centers:
        x_win = np.linspace(center - radii[0], center + radii[0], 2001)
        alpha = np.empty((radii.size, len(dens)))
        for j, (tau, g) in enumerate(samples):
            # drift check: the density peak near this center stays put over k
            xloc = float(x_win[np.argmax(dens[j](x_win))])
            if abs(xloc - center) > max(radii[-1], 0.05 * radii[0]):
                raise CenterUnstable(
                    f"member {j}: peak at {xloc:.4g} drifted from center {center:.4g}"
                )
            for i, r in enumerate(radii):
                ta, tb = angle_of_x(center + r), angle_of_x(center - r)
                alpha[i, j] = _piecewise_linear_integral(tau, g, ta, tb)
        profiles.append(
            ConcentrationProfile(center=center, radii=radii, ks=ks, alpha=alpha, absolute=absolute)
        )
    return profiles


def detect_blowup(profiles, threshold_slack: float = 0.05):
    """Blow-up points with extrapolated masses.

    The nested limit is realized as the limsup of alpha(r, k) over the last
    quartile of k at each radius, followed by a least-squares linear
    extrapolation of the limsup values to r = 0 (the Richardson step over the
    fixed radius ladder).  A center qualifies when the finest-radius limsup
    clears pi minus the slack.
    """
    if isinstance(profiles, ConcentrationProfile):
        profiles = [profiles]
    out = {}
    for prof in profiles:
        nk = len(prof.ks)
        if prof.radii.size < 3 or nk < 4:
            raise InvalidInput("profile needs at least 3 radii and 4 sequence indices")
        tail = slice(nk - max(1, int(np.ceil(nk / 4))), nk)
        tail_vals = prof.alpha[:, tail]
        finest = tail_vals[-1]
        if np.any(np.diff(finest) < -1e-3):
            raise InconclusiveLimit(
                f"alpha(r_min, k) not monotone over the last quartile at center {prof.center:.4g}"
            )
        limsup = tail_vals.max(axis=1)  # per radius
        if limsup[-1] >= np.pi - threshold_slack:
            A = np.column_stack([prof.radii, np.ones_like(prof.radii)])
            coef, *_ = np.linalg.lstsq(A, limsup, rcond=None)
            out[prof.center] = float(coef[1])
    return out


# --- sequence classification --------------------------------------------------

@dataclass
class SequenceReport:
    lambda_bars: list
    case: int | str  # 1, 2, or "undecided"
    blowup_points: dict = field(default_factory=dict)  # center -> mass
    defect: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "lambda_bars": [float(v) for v in self.lambda_bars],
            "case": self.case,
            "blowup_points": {repr(k): float(v) for k, v in self.blowup_points.items()},
            "defect": self.defect,
        }


def classify_case(
    lambda_bars,
    blowup=None,
    drop_threshold: float = 5.0,
    drift_threshold: float = 1.0,
    mass_slack: float = 0.02,
) -> SequenceReport:
    """Dichotomy of the compactness alternative on threshold proxies.

    Case 2 when the circle means drop by more than `drop_threshold` with a
    negative trend; case 1 when they stay within `drift_threshold` of the
    start; otherwise undecided.  A declared case 2 whose reported masses dip
    below pi is a TheoremViolation, the highest-severity outcome.
    """
    lb = [float(v) for v in lambda_bars]
    blowup = blowup or {}
    diffs = np.diff(lb)
    if lb[0] - lb[-1] > drop_threshold and np.mean(diffs) < 0:
        case = 2
    elif max(abs(v - lb[0]) for v in lb) < drift_threshold:
        case = 1
    else:
        case = "undecided"
    if case == 2:
        for center, mass in blowup.items():
            if mass < np.pi - mass_slack:
                raise TheoremViolation(
                    f"case-2 mass {mass:.6f} at {center!r} is below pi"
                )
    if case == 1:
        for center, mass in blowup.items():
            if abs(mass - np.pi) > 0.05 + mass_slack:
                raise TheoremViolation(
                    f"case-1 interior mass {mass:.6f} at {center!r} is not pi"
                )
    return SequenceReport(lambda_bars=lb, case=case, blowup_points=dict(blowup))


def circle_concentration_scan(lambda_grids, kappa_grids, center_angle: float, arc_radii):
    """Circle-side alpha(r, k): curvature mass on shrinking arcs around a
    boundary angle (used for recentering sequences on the disk side)."""
    radii = np.asarray(sorted(arc_radii, reverse=True), dtype=float)
    nk = len(lambda_grids)
    alpha = np.empty((radii.size, nk))
    for j, (lam, kap) in enumerate(zip(lambda_grids, kappa_grids)):
        n = lam.n
        th = grid_angles(n)
        g = np.asarray(kap.values, dtype=float) * np.exp(np.real(lam.values))
        # unwrap around the center so each arc is an interval
        tau = np.mod(th - center_angle + np.pi, TWO_PI) - np.pi
        order = np.argsort(tau)
        tau_ext = np.concatenate([tau[order], [tau[order][0] + TWO_PI]])
        g_ext = np.concatenate([g[order], [g[order][0]]])
        for i, r in enumerate(radii):
            alpha[i, j] = _piecewise_linear_integral(tau_ext, g_ext, -r, r)
    return ConcentrationProfile(
        center=center_angle, radii=radii, ks=list(range(nk)), alpha=alpha
    )


def recentered_lambda_sequence(d: DiskMap, a: complex, ts, n: int = 1024):
    """Boundary moduli log|(Phi o f_t)'| for a recentering ladder t -> 1."""
    out = []
    z = np.exp(1j * grid_angles(n))
    for t in ts:
        dt = mobius_recenter(d, a, t, M=max(d.coeffs.size - 1, 2 * n))
        out.append(PeriodicGrid(np.log(np.abs(dt.derivative(z)))))
    return out


# --- pinching ------------------------------------------------------------------

@dataclass
class PinchReport:
    pairs: list  # (p, q)
    table: np.ndarray  # shape (len(pairs), len(maps))
    verdicts: list  # True = pinched
    arc_gaps: list
    mesh_n: int

    def to_json(self) -> dict:
        return {
            "pairs": [[repr(p), repr(q)] for p, q in self.pairs],
            "table": [[float(v) for v in row] for row in self.table],
            "verdicts": [bool(v) for v in self.verdicts],
            "arc_gaps": [float(g) for g in self.arc_gaps],
            "mesh_n": self.mesh_n,
        }


def pinching_probe(maps, pairs, mesh_n: int = 256, kappa_bound: float | None = None) -> PinchReport:
    """Conformal distances D_k(p, q) per map, with a pinched verdict when the
    tail decreases monotonically below 0.1 x the initial value.

    When a curvature bound is supplied, declared pinched pairs are audited
    against the arc-separation lower bound pi / kappa_bound (up to the mesh
    tolerance)."""
    h = TWO_PI / mesh_n
    table = np.empty((len(pairs), len(maps)))
    for i, (p, q) in enumerate(pairs):
        for k, d in enumerate(maps):
            table[i, k] = conformal_distance(d, p, q, n_boundary=mesh_n)
    verdicts = []
    gaps = []
    for i, (p, q) in enumerate(pairs):
        row = table[i]
        decreasing = bool(np.all(np.diff(row) < 0))
        if decreasing and abs(row[0] - row[-1]) < 2 * h * max(row[0], 1e-300):
            raise InconclusiveMesh(
                f"distance trend for pair {i} is within the mesh tolerance"
            )
        pinched = decreasing and row[-1] < 0.1 * row[0]
        verdicts.append(pinched)
        gap = abs(np.angle(complex(p) / complex(q)))
        gaps.append(gap)
        if pinched and kappa_bound is not None:
            if gap < np.pi / kappa_bound - 2 * h:
                raise TheoremViolation(
                    f"pinched pair {i} violates the arc-separation bound: "
                    f"gap {gap:.4f} < pi/kappa - tolerance"
                )
    return PinchReport(pairs=list(pairs), table=table, verdicts=verdicts, arc_gaps=gaps, mesh_n=mesh_n)


# --- Lambda audit ---------------------------------------------------------------

@dataclass
class AuditEntry:
    label: str
    Lambda: float
    slope: float
    residual_sup: float
    included: bool
    note: str = ""


@dataclass
class AuditReport:
    entries: list

    @property
    def included(self):
        return [e for e in self.entries if e.included]

    def to_json(self) -> dict:
        return {
            "entries": [
                {
                    "label": e.label,
                    "Lambda": e.Lambda,
                    "slope": e.slope,
                    "residual_sup": e.residual_sup,
                    "included": e.included,
                    "note": e.note,
                }
                for e in self.entries
            ]
        }


def lambda_audit(members, n: int = 512, residual_tol: float = 1e-4) -> AuditReport:
    """Total-curvature lower bound on verified solutions.

    Each member is (label, u, K) or a Bubble; members failing the residual
    precondition are excluded with a notice (the bound only covers genuine
    solutions).  For every verified member the measured Lambda must clear
    pi - 1e-3, and the far-field slope must agree with Lambda/pi within 5%.
    """
    entries = []
    for item in members:
        if isinstance(item, Bubble):
            label = f"bubble(mu={item.mu:g}, x0={item.x0:g})"
            u, K = item.u, (lambda x: np.ones_like(np.asarray(x, dtype=float)))
            kwargs = {"anchor_coeff": 0.0, "pole_value": -np.log(item.mu)}
        else:
            label, u, K = item
            kwargs = {}
        try:
            rep = verify_solution(u, K, n=n, **kwargs)
        except Exception as exc:
            entries.append(AuditEntry(label, np.nan, np.nan, np.inf, False, f"verify failed: {exc}"))
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            slope = asymptotic_slope(u)
        if rep.residual_sup >= residual_tol:
            entries.append(
                AuditEntry(label, rep.Lambda, slope, rep.residual_sup, False,
                           "excluded: residual above tolerance")
            )
            continue
        if rep.Lambda < np.pi - 1e-3:
            raise TheoremViolation(
                f"verified member {label} has Lambda = {rep.Lambda:.6f} < pi"
            )
        if abs(slope - rep.Lambda / np.pi) > 0.05 * abs(rep.Lambda / np.pi):
            note = "slope/Lambda mismatch beyond 5%"
        else:
            note = ""
        entries.append(AuditEntry(label, rep.Lambda, slope, rep.residual_sup, True, note))
    return AuditReport(entries=entries)
