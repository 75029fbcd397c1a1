"""Stereographic dictionary between the half-Laplacian Liouville equation on
the real line and its circle pullback with a point defect at -i.

The projection used throughout maps z on the unit circle (minus -i) to
x = Re z / (1 + Im z); its inverse sends x to (2x/(1+x^2), -1 + 2/(1+x^2)).
The key algebraic identity 1 + sin(theta(x)) = 2/(1+x^2) turns every line
integral into a circle integral with weight 1/(1+sin theta) and makes the
pullback

    lambda(theta) = u(x(theta)) - log(1 + sin theta)

carry the equation over with an exact Dirac defect (2*pi - Lambda) at -i,
where Lambda is the total curvature integral on the line.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from .errors import (
    FitWarning,
    InvalidInput,
    NotIntegrable,
    PoleOfProjection,
    SingularMismatch,
    TailError,
)
from .spectral import (
    TWO_PI,
    PeriodicGrid,
    SingularField,
    analyze,
    circle_trapezoid,
    eval_modes,
    grid_angles,
    log_profile,
    singular_half_laplacian,
)

POLE_ANGLE = -np.pi / 2

_GL_X, _GL_W = leggauss(10)


def _eval_vec(f, x: np.ndarray) -> np.ndarray:
    """Evaluate f on an array, falling back to a scalar loop."""
    try:
        out = np.asarray(f(x), dtype=float)
        if out.shape == x.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.asarray([float(f(xx)) for xx in x])


def stereo_project(z):
    """Project a circle point (complex) to the real line; -i is the pole."""
    z = np.asarray(z, dtype=complex)
    denom = 1.0 + z.imag
    if np.any(np.abs(denom) < 1e-15):
        raise PoleOfProjection("stereographic projection is undefined at -i")
    out = z.real / denom
    return float(out) if out.ndim == 0 else out


def stereo_inverse(x):
    """Inverse projection: x -> point on the unit circle."""
    x = np.asarray(x, dtype=float)
    out = 2 * x / (1 + x**2) + 1j * (-1 + 2 / (1 + x**2))
    return complex(out) if out.ndim == 0 else out


def angle_of_x(x):
    """Angle theta(x) in (-pi/2, 3pi/2) of the inverse projection; it decreases
    monotonically as x increases."""
    x = np.asarray(x, dtype=float)
    z = stereo_inverse(x)
    th = np.arctan2(np.imag(z), np.real(z))
    th = np.where(th < POLE_ANGLE, th + TWO_PI, th)
    return float(th) if th.ndim == 0 else th


def _pole_index(n: int) -> int:
    # theta_j = 2 pi j / n - pi hits -pi/2 at j = n/4
    if n % 4:
        raise InvalidInput("grid size must be divisible by 4 so -i is a grid point")
    return n // 4


def _fill_pole(values: np.ndarray, j: int) -> float:
    """Polynomial extrapolation to a single grid point from 4 symmetric
    neighbors on each side."""
    n = values.size
    offs = np.array([-4, -3, -2, -1, 1, 2, 3, 4])
    ys = values[(j + offs) % n]
    coef = np.polynomial.polynomial.polyfit(offs.astype(float), ys, 7)
    return float(np.polynomial.polynomial.polyval(0.0, coef))


@dataclass(frozen=True)
class LineField:
    """A line function u represented by its circle pullback lambda.

    field holds lambda as smooth grid + optional log anchors; the anchor at
    -pi/2 with coefficient beta encodes non-bubble decay of u, i.e.
    Lambda = 2*pi - beta.
    """

    field: SingularField

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def beta(self) -> float:
        """Declared defect coefficient: the anchor strength at -i."""
        return self.field.anchor_coefficient(POLE_ANGLE, tol=1e-9)

    def lambda_at(self, thetas):
        return self.field.evaluate(thetas)

    def lambda_grid(self) -> np.ndarray:
        return self.field.grid_values()

    def u_at(self, x):
        """Evaluate u(x) = lambda(theta(x)) + log(2/(1+x^2))."""
        x = np.asarray(x, dtype=float)
        th = angle_of_x(x)
        lam = np.real(self.field.evaluate(th))
        out = lam + np.log(2.0 / (1.0 + x**2))
        return float(out[0]) if np.ndim(x) == 0 else out

    def to_json(self) -> dict:
        obj = {"kind": "grid"}
        obj.update(self.field.smooth.to_json())
        obj["anchors"] = [[t, c] for t, c in self.field.anchors]
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "LineField":
        grid = PeriodicGrid.from_json(obj)
        anchors = tuple((t, c) for t, c in obj.get("anchors", []))
        return cls(SingularField(grid, anchors))


@dataclass(frozen=True)
class CurvatureData:
    """Line-side curvature K stored as kappa = K o Pi on the circle grid."""

    kappa: PeriodicGrid
    kappa_bound: float

    def __post_init__(self):
        sup = float(np.max(np.abs(self.kappa.values)))
        if sup > self.kappa_bound + 1e-12:
            raise InvalidInput(
                f"sup|kappa| = {sup:.6g} exceeds declared bound {self.kappa_bound:.6g}"
            )

    @classmethod
    def from_evaluator(cls, K, n: int, kappa_bound: float | None = None) -> "CurvatureData":
        th = grid_angles(n)
        jp = _pole_index(n)
        mask = np.arange(n) != jp
        x = stereo_project(np.exp(1j * th[mask]))
        vals = np.empty(n)
        vals[mask] = _eval_vec(K, x)
        vals[jp] = _fill_pole(np.where(mask, vals, 0.0), jp)
        g = PeriodicGrid(vals)
        bound = kappa_bound if kappa_bound is not None else float(np.max(np.abs(vals)))
        return cls(g, bound)

    @classmethod
    def constant(cls, value: float, n: int) -> "CurvatureData":
        return cls(PeriodicGrid(np.full(n, float(value))), abs(float(value)))


def asymptotic_slope(u, window=(1e2, 1e4), npts=64, warn_resid=0.1):
    """Least-squares slope of u(x) against -log(1+|x|) over the far field.

    For solutions the slope estimates Lambda/pi.  The additive constant in
    the representation formula is estimated jointly and discarded, so the
    estimate does not depend on it.
    """
    xs = np.concatenate([
        np.geomspace(window[0], window[1], npts),
        -np.geomspace(window[0], window[1], npts),
    ])
    ys = _eval_vec(u, xs)
    X = -np.log1p(np.abs(xs))
    A = np.column_stack([X, np.ones_like(X)])
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    slope = float(coef[0])
    resid = float(np.max(np.abs(A @ coef - ys)))
    # each tail should drift monotonically when the slope is meaningful
    monotone = True
    for side in (ys[:npts], ys[npts:]):
        d = np.diff(side)
        if not (np.all(d <= 1e-9) or np.all(d >= -1e-9)):
            monotone = False
    if slope > 0.2 and not monotone:
        warnings.warn(f"non-monotone tail, residual {resid:.3g}", FitWarning, stacklevel=2)
    elif resid > warn_resid:
        warnings.warn(f"tail fit residual {resid:.3g}", FitWarning, stacklevel=2)
    return slope


def pull_back(u, n: int, anchor_coeff: float | None = None, pole_value: float | None = None) -> LineField:
    """Sample lambda(theta) = u(Pi(theta)) - log(1+sin theta) on the grid.

    The defect coefficient at -i is detected by a tail fit of u unless
    supplied: beta = 2*pi - pi*slope, snapped to zero below 0.15 (the fit
    cannot resolve finer).  pole_value, when given, is the exact limit of
    lambda at -i, bypassing extrapolation.
    """
    th = grid_angles(n)
    jp = _pole_index(n)
    mask = np.arange(n) != jp
    x = stereo_project(np.exp(1j * th[mask]))
    lam = np.empty(n)
    lam[mask] = _eval_vec(u, x) - np.log1p(np.sin(th[mask]))
    if not np.all(np.isfinite(lam[mask])):
        raise InvalidInput("non-finite lambda samples away from -i")

    if anchor_coeff is None:
        slope = asymptotic_slope(u)
        beta = TWO_PI - np.pi * slope
        if abs(beta) < 0.15:
            beta = 0.0
    else:
        beta = float(anchor_coeff)

    if beta != 0.0:
        lam[mask] -= beta * log_profile(th[mask], POLE_ANGLE)
    lam[jp] = pole_value if pole_value is not None else _fill_pole(np.where(mask, lam, 0.0), jp)
    smooth = PeriodicGrid(lam)
    anchors = ((POLE_ANGLE, beta),) if beta != 0.0 else ()
    return LineField(SingularField(smooth, anchors))


def line_integral(f, n: int = 4096, restrict=None, pole_value: float | None = None) -> float:
    """Integrate f over the line through the circle substitution.

    \\int f dx = \\int f(Pi(theta)) (1+sin theta)^{-1} dtheta on the grid;
    no truncated improper integrals, no tail cutoff.  pole_value is the limit
    of f(x)(1+x^2)/2 as |x| -> infinity (defaults to extrapolation from
    neighbors).  restrict=(a, b) integrates over x in [a, b] only, with the
    cut points located exactly on the circle.
    """
    th = grid_angles(n)
    jp = _pole_index(n)
    mask = np.arange(n) != jp
    x = np.empty(n)
    x[mask] = stereo_project(np.exp(1j * th[mask]))
    g = np.empty(n)
    g[mask] = _eval_vec(f, x[mask]) / (1.0 + np.sin(th[mask]))
    if not np.all(np.isfinite(g[mask])):
        raise NotIntegrable("circle-side integrand is non-finite away from -i")
    g[jp] = pole_value if pole_value is not None else _fill_pole(np.where(mask, g, 0.0), jp)
    if not np.isfinite(g[jp]):
        raise NotIntegrable("circle-side integrand diverges at -i")

    if restrict is None:
        return float(g.sum() * TWO_PI / n)

    a, b = restrict
    if not a < b:
        raise InvalidInput("restrict interval must satisfy a < b")
    # x decreases as theta increases: the window [a, b] is the arc
    # [theta(b), theta(a)] in the unwrapped coordinate (-pi/2, 3pi/2)
    ta, tb = angle_of_x(b), angle_of_x(a)
    tau = np.where(th < POLE_ANGLE, th + TWO_PI, th)
    order = np.argsort(tau)
    tau_ext = np.concatenate([tau[order], [tau[order][0] + TWO_PI]])
    g_ext = np.concatenate([g[order], [g[order][0]]])
    return _piecewise_linear_integral(tau_ext, g_ext, ta, tb)


def _piecewise_linear_integral(xs, ys, a, b) -> float:
    """Integral over [a, b] of the piecewise-linear interpolant through (xs, ys)."""
    a = max(a, xs[0])
    b = min(b, xs[-1])
    if b <= a:
        return 0.0
    grid = np.concatenate([[a], xs[(xs > a) & (xs < b)], [b]])
    vals = np.interp(grid, xs, ys)
    return float(np.trapezoid(vals, grid))


def integrate_exp_singular(field: SingularField, extra: np.ndarray | None = None) -> float:
    """Integrate extra(theta) * e^{lambda(theta)} over the circle when lambda
    carries log anchors, i.e. the integrand has integrable power-law factors.

    Composite 10-point Gauss cells away from anchors; cells containing or
    adjacent to an anchor are handed to adaptive quadrature with the
    algebraic endpoint weight split off.
    """
    n = field.n
    h = TWO_PI / n
    th = grid_angles(n)
    spec = analyze(field.smooth)
    extra_spec = analyze(PeriodicGrid(extra)) if extra is not None else None

    def integrand(t, skip_anchor=None):
        t = np.atleast_1d(t)
        lam = np.real(eval_modes(spec, t))
        for t0, c in field.anchors:
            if skip_anchor is not None and t0 == skip_anchor:
                continue
            lam = lam + c * log_profile(t, t0)
        out = np.exp(lam)
        if extra_spec is not None:
            out = out * np.real(eval_modes(extra_spec, t))
        return out

    total = 0.0
    for j in range(n):
        lo = th[j] - h / 2
        hi = th[j] + h / 2
        mid = 0.5 * (lo + hi)
        near = None
        for t0, c in field.anchors:
            if abs((mid - t0 + np.pi) % TWO_PI - np.pi) <= 2.5 * h:
                near = (t0, t0 + TWO_PI * np.round((mid - t0) / TWO_PI), c)
                break
        if near is None:
            tt = 0.5 * (hi - lo) * (_GL_X + 1.0) + lo
            total += 0.5 * (hi - lo) * float(_GL_W @ integrand(tt))
        else:
            t0_orig, t0_local, c = near
            smooth_eval = lambda t: float(integrand(t, skip_anchor=t0_orig)[0])
            total += _singular_cell_integral(smooth_eval, lo, hi, t0_local, -c / np.pi)
    return total


def _singular_cell_integral(smooth_eval, lo, hi, t0, s) -> float:
    """Integral over [lo, hi] of smooth_eval(t) * |2 sin((t-t0)/2)|^s with the
    algebraic singularity at t0 (s > -1) handed to the weighted quadrature."""

    def raw(t):
        d = abs(t - t0)
        return smooth_eval(t) * (2.0 * np.sin(d / 2.0)) ** s

    def stable(t):
        # raw with |t - t0|^s divided out; the remaining (sin(d/2)/(d/2))^s
        # factor is evaluated through its series near the anchor
        d = abs(t - t0)
        ratio = 1.0 - d * d / 24.0 if d < 1e-6 else 2.0 * np.sin(d / 2.0) / d
        return smooth_eval(t) * ratio**s

    def piece(a, b):
        if b - a < 1e-15:
            return 0.0
        with warnings.catch_warnings():
            # QAWS reports roundoff at tight tolerances; accuracy is tested
            # against an independent adaptive oracle elsewhere
            warnings.simplefilter("ignore")
            if s == 0.0 or not (a - 1e-14 <= t0 <= b + 1e-14):
                val, _ = quad(raw, a, b, limit=200)
            elif abs(a - t0) < 1e-13:
                val, _ = quad(stable, a, b, weight="alg", wvar=(s, 0.0), limit=200)
            else:
                val, _ = quad(stable, a, b, weight="alg", wvar=(0.0, s), limit=200)
        return val

    if lo < t0 < hi:
        return piece(lo, t0) + piece(t0, hi)
    return piece(lo, hi)


@dataclass(frozen=True)
class TransferReport:
    """Residual report for the pulled-back equation."""

    Lambda: float
    beta_declared: float
    beta_required: float
    residual_sup: float
    residual_l2: float
    n: int
    excluded: int

    @property
    def dirac_mismatch(self) -> float:
        return abs(self.beta_declared - self.beta_required)

    def to_json(self) -> dict:
        return {
            "Lambda": self.Lambda,
            "beta_declared": self.beta_declared,
            "beta_required": self.beta_required,
            "dirac_mismatch": self.dirac_mismatch,
            "residual_sup": self.residual_sup,
            "residual_l2": self.residual_l2,
            "n": self.n,
            "excluded": self.excluded,
        }


def transfer_equation(
    lf: LineField, K: CurvatureData, dirac_tol: float = 1e-3, strict_dirac: bool = True
) -> TransferReport:
    """Check the pulled-back equation with defect (2*pi - Lambda) at -i.

    Lambda is measured by quadrature of kappa e^lambda; the required Dirac
    coefficient 2*pi - Lambda is then compared against the declared anchor.
    The data flow is one-directional: the anchor never feeds Lambda.  With
    strict_dirac a required-but-undeclared Dirac mass raises SingularMismatch;
    verification flows that only want the residual report disable it.
    """
    n = lf.n
    if K.kappa.n != n:
        raise InvalidInput("curvature grid size does not match field grid size")
    field = lf.field

    kap = np.asarray(K.kappa.values, dtype=float)
    if field.anchors:
        Lambda = integrate_exp_singular(field, extra=kap)
    else:
        lam = np.real(field.smooth.values)
        Lambda = float(circle_trapezoid(PeriodicGrid(kap * np.exp(lam))))

    beta_required = TWO_PI - Lambda
    beta_declared = lf.beta
    if strict_dirac and abs(beta_required) > dirac_tol and not field.anchors:
        raise SingularMismatch(
            f"equation requires a Dirac mass {beta_required:.4g} at -i but the "
            "field declares no anchor"
        )

    hl_smooth, _ = singular_half_laplacian(field)
    lam_grid = np.real(lf.lambda_grid())
    with np.errstate(over="ignore"):
        residual = np.real(hl_smooth.values) - (kap * np.exp(lam_grid) - 1.0)

    # exclude anchor grid points and immediate neighbors, where e^lambda blows up
    mask = np.ones(n, dtype=bool)
    th = grid_angles(n)
    for t0, _c in field.anchors:
        d = np.abs((th - t0 + np.pi) % TWO_PI - np.pi)
        mask &= d > 2.5 * TWO_PI / n
    res = residual[mask]
    return TransferReport(
        Lambda=float(Lambda),
        beta_declared=float(beta_declared),
        beta_required=float(beta_required),
        residual_sup=float(np.max(np.abs(res))),
        residual_l2=float(np.sqrt(np.sum(res**2) * TWO_PI / n)),
        n=n,
        excluded=int(n - mask.sum()),
    )


def pv_half_laplacian_line(u, x: float, eps_ladder=(1e-2, 5e-3, 2.5e-3), tail_tol: float = 1e-4):
    """Principal-value half-Laplacian on the line at a point.

    Symmetric pairing around the singularity gives the even integrand
    (2u(x) - u(x+t) - u(x-t))/t^2 on [eps, inf); the excision error is
    I(eps) = I(0) + a*eps + b*eps^3, removed by two Richardson stages over
    the halving ladder.  This is the cross-validation oracle; the production
    path for half-Laplacians is the spectral circle route.
    """
    ux = float(u(x))
    # tail of the paired integrand is ~ |u(T)|/T; reject near-linear growth of
    # u, for which the principal value diverges
    T = 1e6
    uT = max(abs(float(u(x + T))), abs(float(u(x - T))), 1e-12)
    uT2 = max(abs(float(u(x + 100 * T))), abs(float(u(x - 100 * T))), 1e-12)
    growth = np.log(uT2 / uT) / np.log(100.0)
    tail_bound = (2 * abs(ux) + 2 * uT) / T
    if growth > 0.9 or tail_bound > max(10 * tail_tol, 1e-2):
        raise TailError(
            f"slow decay: growth exponent {growth:.2f}, tail estimate {tail_bound:.3g}",
            bound=tail_bound,
        )

    def sym(t):
        return (2.0 * ux - float(u(x + t)) - float(u(x - t))) / (t * t)

    vals = []
    for e in eps_ladder:
        v, err = quad(sym, e, np.inf, limit=400, epsabs=1e-11, epsrel=1e-11)
        if not np.isfinite(v):
            raise TailError("quadrature failed to converge", bound=err)
        vals.append(v / np.pi)
    r1a = 2 * vals[1] - vals[0]
    r1b = 2 * vals[2] - vals[1]
    return (8 * r1b - r1a) / 7.0
