"""Stereographic dictionary checks: projection round trips, the forced
pullback identities of the explicit solution family, mass invariance, the
transferred-equation residual, and the PV oracle against the circle route.
"""

import numpy as np
import pytest

from liouville_disk.errors import (
    InvalidInput,
    PoleOfProjection,
    SingularMismatch,
)
from liouville_disk.line import (
    CurvatureData,
    LineField,
    angle_of_x,
    asymptotic_slope,
    integrate_exp_singular,
    line_integral,
    pull_back,
    pv_half_laplacian_line,
    stereo_inverse,
    stereo_project,
    transfer_equation,
)
from liouville_disk.spectral import (
    PeriodicGrid,
    SingularField,
    grid_angles,
    half_laplacian,
)

TWO_PI = 2 * np.pi


def u_bubble(mu, x0=0.0):
    def u(x):
        return np.log(2 * mu / (1 + mu**2 * (np.asarray(x, dtype=float) - x0) ** 2))

    return u


class TestStereo:
    def test_origin_maps_to_i(self):
        assert abs(stereo_inverse(0.0) - 1j) < 1e-15

    def test_one_maps_to_one(self):
        assert abs(stereo_inverse(1.0) - (1.0 + 0.0j)) < 1e-15
        assert abs(stereo_project(1j) - 0.0) < 1e-15
        assert abs(stereo_project(1.0 + 0j) - 1.0) < 1e-15

    def test_round_trip(self):
        rng = np.random.default_rng(0)
        xs = rng.uniform(-50, 50, size=100)
        back = stereo_project(stereo_inverse(xs))
        assert np.max(np.abs(back - xs)) < 1e-12 * np.maximum(1, np.abs(xs)).max()

    def test_pole_raises(self):
        with pytest.raises(PoleOfProjection):
            stereo_project(-1j)

    def test_sintheta_identity(self):
        rng = np.random.default_rng(1)
        xs = rng.uniform(-30, 30, size=200)
        th = angle_of_x(xs)
        assert np.max(np.abs((1 + np.sin(th)) - 2 / (1 + xs**2))) < 1e-12


class TestPullBack:
    def test_standard_bubble_pulls_to_zero(self):
        # the identity 1 + sin(theta(x)) = 2/(1+x^2) forces exact cancellation
        lf = pull_back(u_bubble(1.0), 256, anchor_coeff=0.0, pole_value=0.0)
        assert np.max(np.abs(lf.lambda_grid())) < 1e-13

    def test_bubble_lambda_closed_form(self):
        mu = 4.0
        lf = pull_back(u_bubble(mu), 256, anchor_coeff=0.0, pole_value=-np.log(mu))
        th = grid_angles(256)
        jp = 64  # -pi/2 index
        mask = np.arange(256) != jp
        Pi = stereo_project(np.exp(1j * th[mask]))
        expect = np.log(mu) + np.log((1 + Pi**2) / (1 + mu**2 * Pi**2))
        assert np.max(np.abs(lf.lambda_grid()[mask] - expect)) < 1e-10
        assert abs(lf.lambda_grid()[jp] - (-np.log(mu))) < 1e-9

    def test_tail_fit_detects_no_anchor_for_bubble(self):
        lf = pull_back(u_bubble(2.0), 128)
        assert lf.beta == 0.0

    def test_constant_u_carries_full_anchor(self):
        lf = pull_back(lambda x: 1.5 * np.ones_like(np.asarray(x, float)), 128)
        assert abs(lf.beta - TWO_PI) < 1e-6
        # smooth part is the constant 1.5 + log 2 once the profile is removed
        assert np.max(np.abs(lf.field.smooth.values - (1.5 + np.log(2)))) < 1e-8

    def test_u_at_consistency(self):
        mu = 0.5
        lf = pull_back(u_bubble(mu), 512, anchor_coeff=0.0, pole_value=-np.log(mu))
        xs = np.array([-3.0, -0.2, 0.0, 1.7, 40.0])
        assert np.max(np.abs(lf.u_at(xs) - u_bubble(mu)(xs))) < 1e-10

    def test_nonfinite_rejected(self):
        def u(x):
            with np.errstate(invalid="ignore"):
                return np.sqrt(np.asarray(x, dtype=float))  # nan on the negative axis

        with pytest.raises(InvalidInput):
            pull_back(u, 64, anchor_coeff=0.0)


class TestLineIntegral:
    def test_bubble_mass_is_2pi(self):
        for mu in (0.25, 1.0, 4.0):
            val = line_integral(lambda x: np.exp(u_bubble(mu)(x)), n=2048)
            assert abs(val - TWO_PI) < 1e-8

    def test_arctan_primitive(self):
        val = line_integral(lambda x: 2 / (1 + np.asarray(x) ** 2) / np.pi, n=1024)
        assert abs(val - 2.0) < 1e-10

    def test_total_curvature_matches_flat_defect(self):
        # K = 1, u the standard bubble: Lambda = 2*pi, i.e. beta = 0
        val = line_integral(lambda x: np.exp(u_bubble(1.0)(x)), n=1024)
        assert abs(val - TWO_PI) < 1e-10

    def test_mass_invariance_under_translation_and_scaling(self):
        rng = np.random.default_rng(5)
        for _ in range(6):
            mu = float(np.exp(rng.uniform(-2, 2)))
            x0 = float(rng.uniform(-5, 5))
            val = line_integral(lambda x: np.exp(u_bubble(mu, x0)(x)), n=4096)
            assert abs(val - TWO_PI) < 1e-8

    def test_restricted_integral_matches_arctan(self):
        # int_{|x|<r} 2 mu/(1+mu^2 x^2) dx = 4 arctan(mu r)
        mu, r = 16.0, 0.3
        val = line_integral(lambda x: np.exp(u_bubble(mu)(x)), n=8192, restrict=(-r, r))
        assert abs(val - 4 * np.arctan(mu * r)) < 1e-5


class TestTransferEquation:
    def test_standard_bubble_residual_vanishes(self):
        lf = pull_back(u_bubble(1.0), 512, anchor_coeff=0.0, pole_value=0.0)
        rep = transfer_equation(lf, CurvatureData.constant(1.0, 512))
        assert rep.residual_sup < 1e-8
        assert abs(rep.Lambda - TWO_PI) < 1e-8
        assert rep.dirac_mismatch < 1e-8

    @pytest.mark.parametrize("mu,x0", [(4.0, 0.0), (0.25, 0.0), (4.0, 1.0)])
    def test_family_residual(self, mu, x0):
        lf = pull_back(u_bubble(mu, x0), 512, anchor_coeff=0.0, pole_value=-np.log(mu))
        rep = transfer_equation(lf, CurvatureData.constant(1.0, 512))
        assert rep.residual_sup < 1e-6
        assert abs(rep.Lambda - TWO_PI) < 1e-6

    def test_recomputed_curvature_makes_residual_zero(self):
        # u = bubble + smooth bump, K := e^{-u} (-Delta)^{1/2} u by construction
        n = 512
        base = pull_back(u_bubble(1.0), n, anchor_coeff=0.0, pole_value=0.0)
        th = grid_angles(n)
        bump = 0.1 * np.cos(th)  # smooth circle-side perturbation of lambda
        lam = PeriodicGrid(np.real(base.lambda_grid()) + bump)
        lf = LineField(SingularField(lam))
        kappa = (half_laplacian(lam).values + 1.0) * np.exp(-lam.values)
        rep = transfer_equation(lf, CurvatureData(PeriodicGrid(kappa), float(np.max(np.abs(kappa)))))
        assert rep.residual_sup < 1e-10

    def test_singular_mismatch_raised(self):
        # e^u integrates to less than 2*pi but no anchor is declared
        n = 256
        lam = PeriodicGrid(np.full(n, -0.5))
        lf = LineField(SingularField(lam))
        with pytest.raises(SingularMismatch):
            transfer_equation(lf, CurvatureData.constant(1.0, n))

    @pytest.mark.parametrize("beta", [np.pi / 4, np.pi / 2, 3 * np.pi / 4])
    def test_singular_field_lambda_quadrature(self, beta):
        # e^{beta * profile} at the pole anchor is (2(1+sin theta))^{-beta/2pi};
        # oracle: adaptive quadrature with the singular point declared
        from scipy.integrate import quad

        n = 256
        sf = SingularField(PeriodicGrid.zeros(n), ((-np.pi / 2, beta),))
        val = integrate_exp_singular(sf)
        ref, _ = quad(
            lambda t: (2 * (1 + np.sin(t))) ** (-beta / TWO_PI),
            -np.pi / 2,
            3 * np.pi / 2,
            points=[-np.pi / 2, np.pi / 2],
            limit=500,
        )
        assert abs(val - ref) < 1e-7


class TestPVHalfLaplacian:
    def test_bubble_at_zero(self):
        # solution of the unit-curvature equation: value e^{u(0)} = 2
        val = pv_half_laplacian_line(lambda x: float(u_bubble(1.0)(x)), 0.0)
        assert abs(val - 2.0) < 1e-6

    def test_constant_is_zero(self):
        val = pv_half_laplacian_line(lambda x: 3.3, 0.7)
        assert abs(val) < 1e-9

    def test_bubble_at_one(self):
        val = pv_half_laplacian_line(lambda x: float(u_bubble(1.0)(x)), 1.0)
        assert abs(val - 1.0) < 1e-6

    def test_dictionary_soundness(self):
        # PV value at grid images of circle points vs the circle route
        # (-Delta)^{1/2} u (x) = ((-Delta)^{1/2} lambda (theta) + 1)(1 + sin theta)
        rng = np.random.default_rng(42)
        n = 512
        th = grid_angles(n)
        checked = 0
        for trial in range(50):
            k1, k2 = rng.integers(1, 6, size=2)
            a1, a2 = 0.2 * rng.normal(size=2)
            bump = a1 * np.cos(k1 * th) + a2 * np.sin(k2 * th)
            lam = PeriodicGrid(bump)
            lf = LineField(SingularField(lam))
            hl = half_laplacian(lam).values

            def u(x):
                return float(lf.u_at(float(x)))

            j = int(rng.integers(0, n))
            if j == n // 4:  # skip the pole
                j += 1
            x = stereo_project(np.exp(1j * th[j]))
            if abs(x) > 30:  # far-field points stress the quadrature, not the dictionary
                continue
            circle_route = (hl[j] + 1.0) * (1 + np.sin(th[j]))
            pv = pv_half_laplacian_line(u, x)
            assert abs(pv - circle_route) < 1e-4
            checked += 1
        assert checked >= 40


def test_pv_tail_error_on_near_linear_growth():
    from liouville_disk.errors import TailError

    with pytest.raises(TailError):
        pv_half_laplacian_line(lambda x: abs(x) ** 0.95, 0.0)


class TestAsymptoticSlope:
    def test_bubble_slope_two(self):
        for mu in (0.25, 1.0, 4.0):
            s = asymptotic_slope(u_bubble(mu))
            assert abs(s - 2.0) < 0.1  # Lambda/pi = 2 within 5%

    def test_exact_log_fit(self):
        s = asymptotic_slope(lambda x: -3 * np.log1p(np.abs(x)))
        assert abs(s - 3.0) < 1e-12

    def test_translated_bubble(self):
        s = asymptotic_slope(u_bubble(2.0, x0=1.5))
        assert abs(s - 2.0) < 0.1


def test_linefield_json_roundtrip():
    lf = pull_back(u_bubble(2.0), 128, anchor_coeff=0.0, pole_value=-np.log(2.0))
    lf2 = LineField.from_json(lf.to_json())
    assert np.max(np.abs(lf2.lambda_grid() - lf.lambda_grid())) < 1e-15
    assert lf2.beta == lf.beta
