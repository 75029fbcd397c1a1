"""Disk-map construction checks: analytic completion, the explicit solution
family against its closed Moebius form, boundary curvature, recentering,
conformal distance on the graded mesh, and Blaschke fixtures.
"""

import numpy as np
import pytest
from scipy.integrate import quad

from liouville_disk.disk import (
    BoundaryTrace,
    DiskMap,
    analytic_completion,
    blaschke_fixture,
    boundary_curvature,
    boundary_polyline,
    build_phi,
    conformal_distance,
    curvature_mass,
    make_disk_map,
    mobius_recenter,
)
from liouville_disk.errors import InvalidInput, NotHolomorphic, UnderResolved
from liouville_disk.line import pull_back
from liouville_disk.spectral import (
    PeriodicGrid,
    SingularField,
    analyze,
    grid_angles,
    hilbert,
    log_profile,
)

TWO_PI = 2 * np.pi


def u_bubble(mu, x0=0.0):
    def u(x):
        return np.log(2 * mu / (1 + mu**2 * (np.asarray(x, dtype=float) - x0) ** 2))

    return u


def bubble_trace(mu, n=256, x0=0.0):
    lf = pull_back(u_bubble(mu, x0), n, anchor_coeff=0.0, pole_value=-np.log(mu))
    return analytic_completion(lf.field)


def mobius_oracle_coeffs(mu, M=96):
    """Closed form of the map built from the centered bubble: the disk
    automorphism (z - i t)/(1 + i t z) shifted to vanish at 1, t = (mu-1)/(mu+1).
    Series: (z - it)(1 + itz)^{-1} = (z - it) sum_k (-itz)^k."""
    t = (mu - 1) / (mu + 1)
    c = np.zeros(M + 1, dtype=complex)
    for k in range(M):
        c[k + 1] += (-1j * t) ** k
        c[k] += -1j * t * (-1j * t) ** k
    c[0] -= np.sum(c)
    return c


class TestAnalyticCompletion:
    def test_zero_gives_zero(self):
        bt = analytic_completion(PeriodicGrid.zeros(128))
        assert np.max(np.abs(bt.rho_grid())) < 1e-13
        assert np.max(np.abs(bt.phi_grid() - 1.0)) < 1e-13

    def test_cosine_conjugate(self):
        th = grid_angles(128)
        bt = analytic_completion(PeriodicGrid(np.cos(th)))
        assert np.max(np.abs(bt.rho_grid() - np.sin(th))) < 1e-12
        expect = np.exp(np.cos(th) + 1j * np.sin(th))
        assert np.max(np.abs(bt.phi_grid() - expect)) < 1e-11

    def test_pair_has_no_negative_frequencies(self):
        rng = np.random.default_rng(9)
        th = grid_angles(256)
        lam = sum(rng.normal() * np.cos(k * th) + rng.normal() * np.sin(k * th) for k in range(1, 9))
        bt = analytic_completion(PeriodicGrid(lam))
        pair = bt.lambda_grid() + 1j * bt.rho_grid()
        s = analyze(PeriodicGrid(pair))
        neg = np.sum(np.abs(s.coeffs[s.modes < 0]) ** 2)
        assert neg < 1e-10 * np.sum(np.abs(s.coeffs) ** 2)

    def test_under_resolved_guard(self):
        th = grid_angles(64)
        with pytest.raises(UnderResolved):
            analytic_completion(PeriodicGrid(np.cos(31 * th)))

    def test_anchor_conjugate_is_holomorphic_branch(self):
        # oracle: negative-frequency coefficients of the pair (profile,
        # sawtooth) vanish; checked by adaptive quadrature of the closed forms
        beta = np.pi / 2
        theta0 = -np.pi / 2

        def pair(t):
            phi = np.mod(t - theta0, TWO_PI)
            return beta * (log_profile(np.array([t]), theta0)[0] + 1j * (np.pi - phi) / TWO_PI)

        for m in (-1, -2, -3):
            re, _ = quad(lambda t: (pair(t) * np.exp(-1j * m * t)).real, theta0 + 1e-12, theta0 + TWO_PI - 1e-12, limit=400)
            im, _ = quad(lambda t: (pair(t) * np.exp(-1j * m * t)).imag, theta0 + 1e-12, theta0 + TWO_PI - 1e-12, limit=400)
            assert abs(re + 1j * im) / TWO_PI < 1e-8

    def test_modulus_identity(self):
        bt = bubble_trace(4.0)
        away = np.abs(grid_angles(256) + np.pi / 2) > 1e-9
        assert np.max(np.abs(np.abs(bt.phi_grid()[away]) - np.exp(bt.lambda_grid()[away]))) < 1e-10


class TestBuildPhi:
    def test_flat_map(self):
        bt = analytic_completion(PeriodicGrid.zeros(128))
        d = build_phi(bt)
        z = np.exp(1j * np.linspace(-np.pi, np.pi, 17))
        assert np.max(np.abs(d(z) - (z - 1))) < 1e-12
        assert d.immersed and d.min_deriv > 0.99

    @pytest.mark.parametrize("mu", [0.25, 4.0])
    def test_bubble_gives_mobius_map(self, mu):
        d = build_phi(bubble_trace(mu))
        oracle = mobius_oracle_coeffs(mu)
        z = np.exp(1j * np.linspace(-np.pi, np.pi, 101))
        got = d(z)
        expect = np.polynomial.polynomial.polyval(z, oracle)
        assert np.max(np.abs(got - expect)) < 1e-8

    def test_cosine_boundary_modulus(self):
        th = grid_angles(256)
        bt = analytic_completion(PeriodicGrid(np.cos(th)))
        d = build_phi(bt)
        z = np.exp(1j * th)
        assert np.max(np.abs(np.abs(d.derivative(z)) - np.exp(np.cos(th)))) < 1e-8

    def test_not_holomorphic_guard(self):
        # conjugate with the wrong sign has purely negative frequencies
        th = grid_angles(128)
        lam = SingularField(PeriodicGrid(np.cos(th)))
        rho = hilbert(PeriodicGrid(-np.cos(th)))
        bt = BoundaryTrace(lam=lam, rho_smooth=rho)
        with pytest.raises(NotHolomorphic):
            build_phi(bt)

    def test_normalization(self):
        d = build_phi(bubble_trace(2.0))
        assert abs(d(1.0)) < 1e-10


class TestBoundaryCurvature:
    def test_flat_is_unit(self):
        bt = analytic_completion(PeriodicGrid.zeros(64))
        k = boundary_curvature(bt)
        assert np.max(np.abs(k.values - 1.0)) < 1e-12

    @pytest.mark.parametrize("mu", [0.25, 1.0, 4.0])
    def test_bubble_curvature_unit(self, mu):
        bt = bubble_trace(mu, n=512)
        k = boundary_curvature(bt)
        jp = 128
        mask = np.arange(512) != jp
        assert np.max(np.abs(k.values[mask] - 1.0)) < 1e-6

    @pytest.mark.parametrize("beta", [np.pi / 4, np.pi / 2, 3 * np.pi / 4])
    def test_singular_family(self, beta):
        n = 512
        sf = SingularField(PeriodicGrid.zeros(n), ((-np.pi / 2, beta),))
        bt = analytic_completion(sf)
        k = boundary_curvature(bt).values
        lam = bt.lambda_grid()
        away = np.abs(grid_angles(n) + np.pi / 2) > 1e-9
        expect = (1 - beta / TWO_PI) * np.exp(-lam[away])
        assert np.max(np.abs(k[away] - expect)) < 1e-10
        # pointwise product check, then the total mass identity
        assert np.max(np.abs(k[away] * np.exp(lam[away]) - (1 - beta / TWO_PI))) < 1e-10
        assert abs(curvature_mass(bt) - (TWO_PI - beta)) < 1e-8


class TestMobiusRecenter:
    def test_t_zero_is_identity(self):
        d = build_phi(bubble_trace(2.0))
        d2 = mobius_recenter(d, 1j, 0.0)
        z = np.exp(1j * np.linspace(-np.pi, np.pi, 33))
        assert np.max(np.abs(d2(z) - d(z))) < 1e-9

    def test_flat_recentered_stays_circle(self):
        # the image of z - 1 is a unit circle; the automorphism reparametrizes
        # the boundary, and the Phi(1) = 0 normalization shifts the center to
        # -f(1)
        bt = analytic_completion(PeriodicGrid.zeros(256))
        d = mobius_recenter(build_phi(bt), 1j, 0.5)
        t, a = 0.5, 1j
        f1 = (1 - t * a) / (1 - t * np.conj(a))
        th = grid_angles(512)
        w = d(np.exp(1j * th))
        assert np.max(np.abs(np.abs(w + f1) - 1.0)) < 1e-6
        assert d.immersed

    def test_length_invariance(self):
        # periodic trapezoid of |Phi' o f times f'| is the image length,
        # which reparametrization preserves
        d = build_phi(bubble_trace(4.0))
        n = 1024
        z = np.exp(1j * grid_angles(n))
        base_len = np.abs(d.derivative(z)).mean() * TWO_PI
        for t in (0.3, 0.7):
            d2 = mobius_recenter(d, 1j, t)
            new_len = np.abs(d2.derivative(z)).mean() * TWO_PI
            assert abs(new_len - base_len) < 1e-6 * base_len

    def test_invalid_inputs(self):
        d = build_phi(bubble_trace(1.0))
        with pytest.raises(InvalidInput):
            mobius_recenter(d, 0.5, 0.5)
        with pytest.raises(InvalidInput):
            mobius_recenter(d, 1j, 1.0)


class TestBlaschke:
    def test_identity_factor(self):
        d = blaschke_fixture([0.0])
        z = np.exp(1j * np.linspace(-np.pi, np.pi, 9))
        assert np.max(np.abs(d(z) - z)) < 1e-12
        assert d.immersed

    def test_squared(self):
        d = blaschke_fixture([0.0, 0.0])
        z = np.exp(1j * np.linspace(-np.pi, np.pi, 9))
        assert np.max(np.abs(d(z) - z**2)) < 1e-12
        assert not d.immersed  # derivative vanishes at the origin

    def test_generic_degree_two_not_immersed(self):
        d = blaschke_fixture([0.3, -0.3])
        assert not d.immersed

    def test_boundary_zero_rejected(self):
        with pytest.raises(InvalidInput):
            blaschke_fixture([1.0])


class TestConformalDistance:
    def test_flat_chord(self):
        d = build_phi(analytic_completion(PeriodicGrid.zeros(256)))
        h = TWO_PI / 256
        val = conformal_distance(d, 1.0, -1.0, n_boundary=256)
        assert abs(val - 2.0) <= 2 * h

    def test_degenerating_family(self):
        # concentration needs series order ~ mu; the full ladder to 4096 runs
        # in the acceptance suite
        vals = []
        for mu in (1.0, 16.0, 256.0):
            n = max(256, 1 << int(np.ceil(np.log2(20 * mu))))
            d = build_phi(bubble_trace(mu, n=n))
            vals.append(conformal_distance(d, 1.0, -1.0, n_boundary=256))
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 0.1 * vals[0]

    def test_symmetry(self):
        d = build_phi(bubble_trace(4.0))
        rng = np.random.default_rng(3)
        for _ in range(20):
            i, j = rng.integers(0, 256, size=2)
            if i == j:
                continue
            p = np.exp(1j * (TWO_PI * i / 256 - np.pi))
            q = np.exp(1j * (TWO_PI * j / 256 - np.pi))
            assert abs(
                conformal_distance(d, p, q) - conformal_distance(d, q, p)
            ) < 1e-12

    def test_monotone_under_refinement(self):
        # finer meshes admit every coarse path up to O(h) deviations
        d = build_phi(bubble_trace(4.0))
        vals = {n: conformal_distance(d, 1.0, -1.0, n_boundary=n) for n in (128, 256, 512)}
        assert vals[256] <= vals[128] + 2 * (TWO_PI / 128)
        assert vals[512] <= vals[256] + 2 * (TWO_PI / 256)

    def test_triangle_inequality(self):
        d = build_phi(bubble_trace(16.0, n=512))
        h = TWO_PI / 256
        rng = np.random.default_rng(4)
        for _ in range(10):
            a, b, c = (np.exp(1j * (TWO_PI * k / 256 - np.pi)) for k in rng.integers(0, 256, 3))
            if len({a, b, c}) < 3:
                continue
            dab = conformal_distance(d, a, b)
            dbc = conformal_distance(d, b, c)
            dac = conformal_distance(d, a, c)
            assert dac <= dab + dbc + 2 * h


class TestBoundaryPolyline:
    def test_flat_polyline_is_shifted_circle(self):
        d = build_phi(analytic_completion(PeriodicGrid.zeros(128)))
        verts, corners = boundary_polyline(d, 128)
        assert corners == {}
        z = verts[:, 0] + 1j * verts[:, 1]
        assert np.max(np.abs(np.abs(z + 1.0) - 1.0)) < 1e-10

    @pytest.mark.parametrize("beta", [np.pi / 4, np.pi / 2, 3 * np.pi / 4])
    def test_singular_corner_tangents(self, beta):
        n = 512
        sf = SingularField(PeriodicGrid.zeros(n), ((-np.pi / 2, beta),))
        bt = analytic_completion(sf)
        verts, corners = boundary_polyline(bt, n)
        assert list(corners) == [n // 4]
        tin, tout = corners[n // 4]
        # tangent angle is theta + pi/2 + rho; the sawtooth gives -+ beta/2
        wrap = lambda x: np.angle(np.exp(1j * x))
        assert abs(wrap(tin - (-beta / 2))) < 2e-3
        assert abs(wrap(tout - (+beta / 2))) < 2e-3
        # exterior angle at the corner equals the defect coefficient
        assert abs(wrap(tout - tin) - beta) < 3e-3

    def test_singular_polyline_closes_and_total_turn(self):
        n = 512
        beta = np.pi / 2
        sf = SingularField(PeriodicGrid.zeros(n), ((-np.pi / 2, beta),))
        bt = analytic_completion(sf)
        verts, _ = boundary_polyline(bt, n)
        z = verts[:, 0] + 1j * verts[:, 1]
        edges = np.diff(np.concatenate([z, z[:1]]))
        assert np.min(np.abs(edges)) > 0
        turn = np.angle(np.exp(1j * np.diff(np.angle(edges))))
        # away from the corner the discrete turning stays below the C^1 proxy
        jc = n // 4
        mask = np.ones(n - 1, dtype=bool)
        mask[max(0, jc - 3): jc + 3] = False
        assert np.max(np.abs(turn[mask])) < 0.3


def test_disk_map_json_roundtrip():
    d = build_phi(bubble_trace(2.0))
    d2 = DiskMap.from_json(d.to_json())
    z = np.exp(1j * np.linspace(-np.pi, np.pi, 33))
    assert np.max(np.abs(d2(z) - d(z))) < 1e-12


def test_make_disk_map_rejects_bad_normalization():
    with pytest.raises(InvalidInput):
        make_disk_map(np.array([1.0, 1.0]), normalized_at_one=True)
