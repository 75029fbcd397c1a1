"""Exact-order spectral operators on the unit circle.

Grids sample 2*pi-periodic functions at theta_j = 2*pi*j/n - pi, so that for
n divisible by 4 the four points +-1, +-i land on the grid (the south pole -i
at theta = -pi/2 is where log-singular anchors live).

Fourier convention: u_hat(m) = (1/2pi) \\int u(theta) e^{-i m theta} dtheta,
for m = -n/2 .. n/2-1.  With this normalization Parseval reads
mean(|u|^2) = sum |u_hat(m)|^2.

Operators are diagonal in this basis:

    half-Laplacian      |m|
    Hilbert transform   -i sign(m)      (Nyquist mode zeroed: odd multiplier)
    d/dtheta            i m             (Nyquist mode zeroed)
    harmonic extension  r^{|m|}
    Green inverse       1/|m|, zero mean

Log-singular anchors (the fundamental-solution profile translated to an
anchor angle) are carried symbolically: their half-Laplacian is the exact
Dirac-minus-mean pair, never a finite difference of the singularity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import (
    BandLimitWarning,
    IllConditioned,
    InvalidInput,
    InvalidRadius,
    NotSolvable,
)

TWO_PI = 2.0 * np.pi

_GL_X, _GL_W = leggauss(24)


def _check_power_of_two(n: int) -> bool:
    return n >= 8 and (n & (n - 1)) == 0


def grid_angles(n: int) -> np.ndarray:
    """Sample angles theta_j = 2*pi*j/n - pi."""
    return TWO_PI * np.arange(n) / n - np.pi


@dataclass(frozen=True)
class PeriodicGrid:
    """Samples of a 2*pi-periodic function at n uniform angles.

    n must be a power of two, at least 8.  Values may be real or complex but
    must be finite.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.dtype.kind not in "fc":
            v = v.astype(float)
        if v.ndim != 1 or not _check_power_of_two(v.size):
            raise InvalidInput(
                f"grid length must be a power of two >= 8, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise InvalidInput("grid contains non-finite samples")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def thetas(self) -> np.ndarray:
        return grid_angles(self.n)

    @property
    def is_real(self) -> bool:
        return self.values.dtype.kind == "f"

    @classmethod
    def from_function(cls, f, n: int) -> "PeriodicGrid":
        return cls(np.asarray(f(grid_angles(n))))

    @classmethod
    def zeros(cls, n: int) -> "PeriodicGrid":
        return cls(np.zeros(n))

    def mean(self) -> float | complex:
        return self.values.mean()

    def __add__(self, other):
        if isinstance(other, PeriodicGrid):
            return PeriodicGrid(self.values + other.values)
        return PeriodicGrid(self.values + other)

    def __sub__(self, other):
        if isinstance(other, PeriodicGrid):
            return PeriodicGrid(self.values - other.values)
        return PeriodicGrid(self.values - other)

    def __mul__(self, other):
        if isinstance(other, PeriodicGrid):
            return PeriodicGrid(self.values * other.values)
        return PeriodicGrid(self.values * other)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        if self.is_real:
            vals = self.values.tolist()
        else:
            vals = [[z.real, z.imag] for z in self.values]
        return {"n": int(self.n), "values": vals}

    @classmethod
    def from_json(cls, obj: dict) -> "PeriodicGrid":
        vals = obj["values"]
        if vals and isinstance(vals[0], (list, tuple)):
            arr = np.array([complex(re, im) for re, im in vals])
        else:
            arr = np.asarray(vals, dtype=float)
        if int(obj["n"]) != arr.size:
            raise InvalidInput("declared n does not match number of values")
        return cls(arr)


@dataclass(frozen=True)
class SpectralRep:
    """Fourier coefficients u_hat(m), m = -n/2 .. n/2-1 ascending."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).copy()
        if not _check_power_of_two(c.size):
            raise InvalidInput("coefficient vector length must be a power of two >= 8")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self) -> int:
        return self.coeffs.size

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.n // 2, self.n // 2)

    def __getitem__(self, m: int):
        return self.coeffs[m + self.n // 2]

    def to_json(self) -> dict:
        return {"coeffs": [[z.real, z.imag] for z in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "SpectralRep":
        return cls(np.array([complex(re, im) for re, im in obj["coeffs"]]))


def analyze(g: PeriodicGrid) -> SpectralRep:
    """Forward transform of a grid to Fourier coefficients.

    The half-period offset of the grid shows up as an alternating phase:
    e^{-i m theta_j} = (-1)^m e^{-2 pi i m j / n}.
    """
    n = g.n
    m = np.arange(-n // 2, n // 2)
    c = np.fft.fftshift(np.fft.fft(g.values)) / n
    return SpectralRep(c * (-1.0) ** m)


def synthesize(s: SpectralRep) -> PeriodicGrid:
    """Inverse of :func:`analyze`; returns a real grid when symmetry allows."""
    n = s.n
    m = np.arange(-n // 2, n // 2)
    vals = np.fft.ifft(np.fft.ifftshift(s.coeffs * (-1.0) ** m)) * n
    if np.max(np.abs(vals.imag)) <= 1e-12 * max(1.0, np.max(np.abs(vals.real))):
        vals = vals.real
    return PeriodicGrid(vals)


def eval_modes(s: SpectralRep, thetas: np.ndarray) -> np.ndarray:
    """Trigonometric interpolation: sum of u_hat(m) e^{i m theta}."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    m = s.modes
    return np.exp(1j * np.outer(thetas, m)) @ s.coeffs


def resample(g: PeriodicGrid, n_new: int) -> PeriodicGrid:
    """Spectral resampling to a finer (or coarser band-limited) grid."""
    s = analyze(g)
    n = g.n
    if n_new == n:
        return g
    c = np.zeros(n_new, dtype=complex)
    if n_new > n:
        c[n_new // 2 - n // 2 : n_new // 2 + n // 2] = s.coeffs
    else:
        c = s.coeffs[n // 2 - n_new // 2 : n // 2 + n_new // 2]
    out = synthesize(SpectralRep(c))
    if g.is_real and not out.is_real:
        out = PeriodicGrid(out.values.real)
    return out


def band_limit_guard(g: PeriodicGrid, top_fraction=0.1, energy_fraction=0.01):
    """Warn when the top decile of the spectrum carries > 1% of the energy.

    Spectral differentiation of under-resolved data is silently wrong, so
    every multiplier operator calls this.
    """
    c = analyze(g).coeffs
    m = np.abs(np.arange(-g.n // 2, g.n // 2))
    cutoff = (1.0 - top_fraction) * (g.n // 2)
    total = np.sum(np.abs(c[m > 0]) ** 2)
    # ignore grids whose oscillatory part sits at the rounding floor
    if total <= g.n * (1e-13 * max(1.0, float(np.max(np.abs(g.values))))) ** 2:
        return
    top = np.sum(np.abs(c[m >= cutoff]) ** 2)
    if top > energy_fraction * total:
        warnings.warn(
            f"top {top_fraction:.0%} of spectrum carries {top / total:.2%} of energy",
            BandLimitWarning,
            stacklevel=3,
        )


def _apply_multiplier(g: PeriodicGrid, mult: np.ndarray) -> PeriodicGrid:
    s = analyze(g)
    out = synthesize(SpectralRep(s.coeffs * mult))
    if g.is_real and not out.is_real:
        out = PeriodicGrid(out.values.real)
    return out


def half_laplacian(g: PeriodicGrid) -> PeriodicGrid:
    """Multiplier |m|; annihilates constants and has zero mean."""
    band_limit_guard(g)
    m = np.arange(-g.n // 2, g.n // 2)
    return _apply_multiplier(g, np.abs(m).astype(float))


def hilbert(g: PeriodicGrid) -> PeriodicGrid:
    """Conjugation operator, multiplier -i sign(m); output has zero mean."""
    band_limit_guard(g)
    m = np.arange(-g.n // 2, g.n // 2)
    mult = -1j * np.sign(m)
    mult[0] = 0.0  # Nyquist: odd multiplier has no symmetric partner
    return _apply_multiplier(g, mult)


def derivative(g: PeriodicGrid) -> PeriodicGrid:
    """d/dtheta, multiplier i*m with the Nyquist mode zeroed."""
    band_limit_guard(g)
    m = np.arange(-g.n // 2, g.n // 2).astype(float)
    m[0] = 0.0
    return _apply_multiplier(g, 1j * m)


def poisson_extend(g: PeriodicGrid, r: float) -> PeriodicGrid:
    """Harmonic extension to radius r, multiplier r^{|m|}."""
    if not (0.0 <= r < 1.0):
        raise InvalidRadius(f"radius must lie in [0, 1), got {r}")
    m = np.arange(-g.n // 2, g.n // 2)
    return _apply_multiplier(g, np.power(float(r), np.abs(m)) if r > 0 else (np.abs(m) == 0).astype(float))


def green_convolve(f: PeriodicGrid, mean_tol: float = 1e-8) -> PeriodicGrid:
    """Solve the half-Laplacian equation on the zero-mean subspace.

    Coefficient division u_hat(m) = f_hat(m)/|m| with u_hat(0) = 0; requires
    mean(f) = 0 to tolerance (solvability).
    """
    mbar = abs(complex(f.mean()))
    if mbar > mean_tol:
        raise NotSolvable(f"|mean(f)| = {mbar:.3e} exceeds {mean_tol:.1e}")
    m = np.arange(-f.n // 2, f.n // 2).astype(float)
    inv = np.zeros_like(m)
    nz = m != 0
    inv[nz] = 1.0 / np.abs(m[nz])
    return _apply_multiplier(f, inv)


def circle_trapezoid(g: PeriodicGrid) -> float | complex:
    """Uniform-grid trapezoid rule, spectrally accurate for smooth periodic data."""
    return g.values.sum() * TWO_PI / g.n


# --- log-singular anchors ---------------------------------------------------

def log_profile(thetas, theta0: float):
    """Canonical log-singular profile -(1/2pi) log(2(1 - cos(theta - theta0))).

    Its half-Laplacian is the distribution delta_{theta0} - 1/2pi, and its
    Fourier coefficients are e^{-i m theta0}/(2 pi |m|).
    """
    thetas = np.asarray(thetas, dtype=float)
    d = 2.0 * (1.0 - np.cos(thetas - theta0))
    with np.errstate(divide="ignore"):
        return -np.log(d) / TWO_PI


def conjugate_profile(thetas, theta0: float):
    """Harmonic conjugate of :func:`log_profile`: the sawtooth (pi - phi)/(2 pi)
    with phi = (theta - theta0) mod 2 pi.  Mean zero; jumps by +1 across the
    anchor in the counter-clockwise direction.
    """
    thetas = np.asarray(thetas, dtype=float)
    phi = np.mod(thetas - theta0, TWO_PI)
    out = (np.pi - phi) / TWO_PI
    return np.where(phi == 0.0, np.nan, out)


def _int_log2sin_0_to(a: float) -> float:
    # integral of log(2 sin(t/2)) on [0, a], 0 < a <= pi; endpoint log split off
    t = 0.5 * a * (_GL_X + 1.0)
    smooth = np.log(2.0 * np.sin(t / 2.0) / t)
    return a * np.log(a) - a + 0.5 * a * float(_GL_W @ smooth)


def _log2sin_antiderivative(x: float) -> float:
    if x == 0.0:
        return 0.0
    return np.sign(x) * _int_log2sin_0_to(abs(x))


def log_profile_cell_integral(a: float, b: float, theta0: float = 0.0) -> float:
    """Exact integral of the log profile over [a, b] (closed form + Gauss split).

    The angular window, shifted by theta0, must fit inside one period around
    the singularity, i.e. a - theta0, b - theta0 in [-2 pi, 2 pi] after
    reduction.  Used for cell-integrated sampling of the profile.
    """
    lo = a - theta0
    hi = b - theta0
    # reduce so the window lies within [-pi, pi] possibly split at the wrap
    lo = (lo + np.pi) % TWO_PI - np.pi
    hi = lo + (b - a)
    if hi <= np.pi:
        val = _log2sin_antiderivative(hi) - _log2sin_antiderivative(lo)
    else:
        val = (_log2sin_antiderivative(np.pi) - _log2sin_antiderivative(lo)) + (
            _log2sin_antiderivative(hi - TWO_PI) - _log2sin_antiderivative(-np.pi)
        )
    # log(2(1-cos t)) = 2 log(2 sin(|t|/2)); profile carries -(1/2pi)
    return -val / np.pi


def cell_averaged_log_profile(n: int, theta0: float = 0.0) -> PeriodicGrid:
    """Cell averages of the log profile over the n grid cells."""
    h = TWO_PI / n
    th = grid_angles(n)
    vals = np.array(
        [log_profile_cell_integral(t - h / 2, t + h / 2, theta0) / h for t in th]
    )
    return PeriodicGrid(vals)


@dataclass(frozen=True)
class SingularField:
    """Circle function split as a smooth grid plus log-singular anchors.

    anchors is a tuple of (theta0, coefficient) pairs; evaluation away from
    every anchor is smooth(theta) + sum of c * log_profile(theta, theta0).
    """

    smooth: PeriodicGrid
    anchors: tuple = field(default_factory=tuple)

    def __post_init__(self):
        anchors = tuple((float(t), float(c)) for t, c in self.anchors)
        object.__setattr__(self, "anchors", anchors)
        h = TWO_PI / self.smooth.n
        for i in range(len(anchors)):
            for j in range(i + 1, len(anchors)):
                gap = abs((anchors[i][0] - anchors[j][0] + np.pi) % TWO_PI - np.pi)
                if gap < 2 * h:
                    warnings.warn(
                        f"anchors {i} and {j} are {gap:.2e} apart (< 2 grid cells)",
                        IllConditioned,
                        stacklevel=2,
                    )

    @property
    def n(self) -> int:
        return self.smooth.n

    @classmethod
    def from_grid(cls, g) -> "SingularField":
        if isinstance(g, SingularField):
            return g
        return cls(g, ())

    def evaluate(self, thetas) -> np.ndarray:
        """Value at arbitrary angles; smooth part by trigonometric interpolation."""
        thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
        out = eval_modes(analyze(self.smooth), thetas)
        if self.smooth.is_real:
            out = out.real
        for theta0, c in self.anchors:
            out = out + c * log_profile(thetas, theta0)
        return out

    def grid_values(self) -> np.ndarray:
        """Values at the grid angles (inf at anchor points that sit on the grid)."""
        vals = np.array(self.smooth.values, dtype=float if self.smooth.is_real else complex)
        th = self.smooth.thetas
        for theta0, c in self.anchors:
            vals = vals + c * log_profile(th, theta0)
        return vals

    def anchor_coefficient(self, theta0: float, tol: float = 1e-12) -> float:
        for t, c in self.anchors:
            if abs((t - theta0 + np.pi) % TWO_PI - np.pi) <= tol:
                return c
        return 0.0


def pv_half_laplacian_circle(u, theta: float, eps_ladder=(1e-2, 5e-3, 2.5e-3)) -> float:
    """Principal-value half-Laplacian on the circle at one angle.

    (1/pi) PV of (u(theta) - u(t)) / (2 - 2 cos(theta - t)); cross-validation
    oracle for the Fourier-multiplier route, not a production path (its
    discrete convergence for rough data is unspecified).  Symmetric pairing
    around the singularity plus two Richardson stages in the excision radius.
    """
    from scipy.integrate import quad

    u0 = float(u(theta))

    def sym(t):
        return (2 * u0 - float(u(theta + t)) - float(u(theta - t))) / (2 - 2 * np.cos(t))

    vals = []
    for e in eps_ladder:
        v, _ = quad(sym, e, np.pi, limit=200, epsabs=1e-12, epsrel=1e-12)
        vals.append(v / np.pi)
    r1a = 2 * vals[1] - vals[0]
    r1b = 2 * vals[2] - vals[1]
    return (8 * r1b - r1a) / 7.0


def singular_half_laplacian(sf: SingularField):
    """Half-Laplacian of a SingularField.

    Returns (smooth part, dirac masses): the grid half_laplacian of the
    smooth component shifted down by sum(c)/2pi, plus the exact masses
    [(theta0, c), ...] carried symbolically.
    """
    sf = SingularField.from_grid(sf)
    smooth_part = half_laplacian(sf.smooth)
    offset = sum(c for _, c in sf.anchors) / TWO_PI
    if offset:
        smooth_part = smooth_part - offset
    masses = [(theta0, c) for theta0, c in sf.anchors]
    return smooth_part, masses
