"""
Unit tests for Curve Zoo module
"""

import math
import unittest
import numpy as np
from hypothesis import given, settings, strategies as st

from successor_curves.errors import DomainError, ValidationError
from successor_curves.geomcore import E3, successor_transform
from successor_curves.natural import IntegrationConfig, integrate_frenet
from successor_curves.profiles import (
    ConstantProfile, HarmonicProfile, Interval, PhaseFunction, SalkowskiProfile,
)
from successor_curves.zoo import (
    SLANT_REFLECTION, SlantHelixParams, circular_helix_theta, constant_precession_profile,
    helix_apparatus, phase_curvature_identity_check, plane_apparatus, salkowski_profile,
    slant_helix_apparatus, slant_slope_estimate, torsion_from_curvature,
)


class TestPlaneAndHelix(unittest.TestCase):
    """Test cases for plane curves and general helices"""

    def test_plane_tangent_angle(self):
        """Test T = (cos W, sin W, 0) with W = omega0 + integral of kappa"""
        app = plane_apparatus(ConstantProfile(2.0), omega0=0.5)
        np.testing.assert_allclose(app.tangent(1.0)[0], [math.cos(2.5), math.sin(2.5), 0.0], atol=1e-15)
        self.assertEqual(app.tau(3.0), 0.0)

    def test_helix_slope_constant(self):
        """Test <T, e3> = cos(theta) and <N, e3> = 0 for a varying curvature"""
        theta = math.pi / 5
        helix = helix_apparatus(ConstantProfile(2.0) + HarmonicProfile(1.0, 0.5), theta)
        grid = np.linspace(-5.0, 5.0, 501)
        np.testing.assert_allclose(helix.tangent(grid) @ E3, math.cos(theta), atol=1e-12)
        np.testing.assert_allclose(helix.normal(grid) @ E3, 0.0, atol=1e-15)
        np.testing.assert_allclose(helix.tau(grid), helix.kappa(grid) / math.tan(theta), atol=1e-12)

    def test_helix_theta_range(self):
        """Test slope angles outside (0, pi/2)"""
        for theta in (0.0, math.pi / 2, -0.3, math.nan):
            with self.assertRaises(ValidationError):
                helix_apparatus(ConstantProfile(1.0), theta)

    def test_circular_helix_theta(self):
        """Test tan(theta) = kappa / tau"""
        self.assertAlmostEqual(math.tan(circular_helix_theta(3.0, 4.0)), 0.75, places=15)
        with self.assertRaises(ValidationError):
            circular_helix_theta(3.0, 0.0)

    def test_plane_successor_is_helix(self):
        """Test the successor of the unit circle at pi/2 - theta is a circular helix"""
        circle = plane_apparatus(ConstantProfile(1.0))
        grid = np.linspace(0.0, 10.0, 101)
        theta = math.pi / 3
        succ = successor_transform(circle, 0.5 * math.pi - theta)
        np.testing.assert_allclose(succ.kappa(grid), math.sin(theta), atol=1e-14)
        np.testing.assert_allclose(succ.tau(grid), math.cos(theta), atol=1e-14)


class TestSlantHelix(unittest.TestCase):
    """Test cases for the closed-form slant helix"""

    def setUp(self):
        """Set up test fixtures"""
        self.params = SlantHelixParams(math.pi / 3)
        self.slant = slant_helix_apparatus(self.params)
        self.grid = np.linspace(0.0, 20.0, 2001)

    def test_params(self):
        """Test m = cot(theta), n = cos(theta) and the lambdas"""
        self.assertAlmostEqual(self.params.m, 1.0 / math.sqrt(3.0), places=15)
        self.assertAlmostEqual(self.params.n, 0.5, places=15)
        self.assertAlmostEqual(self.params.lambda1, 0.5, places=15)
        self.assertAlmostEqual(self.params.lambda2, 1.5, places=15)

    def test_tangent_at_start(self):
        """Test Omega = 0 gives T = (1, 0, 0)"""
        np.testing.assert_allclose(self.slant.tangent(0.0)[0], [1.0, 0.0, 0.0], atol=1e-15)

    def test_tangent_at_full_turn(self):
        """Test theta = pi/3, Omega = 2 pi gives T = (-1, 0, 0)"""
        s = math.pi / self.params.m
        self.assertAlmostEqual(float(self.slant.omega(s)), 2 * math.pi, places=12)
        np.testing.assert_allclose(self.slant.tangent(s)[0], [-1.0, 0.0, 0.0], atol=1e-12)

    def test_unit_tangent(self):
        """Test the closed-form tangent has unit length"""
        np.testing.assert_allclose(np.linalg.norm(self.slant.tangent(self.grid), axis=1), 1.0, atol=1e-14)

    def test_tangent_derivative_law(self):
        """Test T' = kappa * (reflected helix tangent) by central differences"""
        grid = np.linspace(0.0, 20.0, 20001)
        dt = np.gradient(self.slant.tangent(grid), grid, axis=0, edge_order=2)[1:-1]
        kappa = self.slant.kappa(grid)[1:-1, None]
        helix_t = self.slant.helix().tangent(grid)[1:-1]
        np.testing.assert_allclose(dt, kappa * (helix_t @ SLANT_REFLECTION.T), atol=1e-5)
        self.assertGreater(np.max(np.abs(dt - kappa * helix_t)), 0.1)

    def test_profiles(self):
        """Test kappa = (1/m) phi' cos(phi), tau = (1/m) phi' sin(phi) for phi = m s"""
        m = self.params.m
        np.testing.assert_allclose(self.slant.kappa(self.grid), np.cos(m * self.grid), atol=1e-14)
        np.testing.assert_allclose(self.slant.tau(self.grid), np.sin(m * self.grid), atol=1e-14)

    def test_frenet_matches_closed_form(self):
        """Test the successor construction reproduces the closed-form tangent"""
        app = self.slant.frenet()
        np.testing.assert_allclose(app.tangent(self.grid), self.slant.tangent(self.grid), atol=1e-9)
        np.testing.assert_allclose(app.normal(self.grid) @ E3, self.params.n, atol=1e-12)
        self.assertEqual(app.label, "slant-helix")

    def test_helix_is_predecessor(self):
        """Test the slant normal is the tangent of the companion helix"""
        helix = self.slant.helix()
        succ = successor_transform(helix, self.params.phase.phi0)
        np.testing.assert_allclose(succ.normal(self.grid), helix.tangent(self.grid), atol=1e-12)

    def test_integrated_tangent(self):
        """Test integrating (kappa, tau) from the closed-form frame"""
        initial = self.slant.frenet().frame_at(0.0)
        app = integrate_frenet(self.slant.kappa, self.slant.tau, initial, (0.0, 10.0),
                               IntegrationConfig(step=1e-3))
        np.testing.assert_allclose(app.tangent(app.grid), self.slant.tangent(app.grid), atol=1e-7)

    def test_varying_phase_rate(self):
        """Test a non-constant phase rate keeps the normal slope"""
        phase = PhaseFunction(0.2, ConstantProfile(1.0) + HarmonicProfile(0.3, 1.0))
        params = SlantHelixParams(math.pi / 4, phase)
        app = slant_helix_apparatus(params).frenet()
        grid = np.linspace(-3.0, 3.0, 301)
        np.testing.assert_allclose(app.normal(grid) @ E3, params.n, atol=1e-12)

    @given(st.floats(min_value=0.1, max_value=1.4), st.floats(min_value=-3.0, max_value=3.0))
    @settings(max_examples=30, deadline=None)
    def test_unit_tangent_any_theta(self, theta, phi0):
        """Property: the closed-form tangent is a unit vector for every theta"""
        params = SlantHelixParams(theta, PhaseFunction(phi0, ConstantProfile(1.0)))
        tangent = slant_helix_apparatus(params).tangent(np.linspace(-5.0, 5.0, 11))
        np.testing.assert_allclose(np.linalg.norm(tangent, axis=1), 1.0, atol=1e-12)


class TestNamedFamilies(unittest.TestCase):
    """Test cases for Salkowski curves and constant precession"""

    def test_salkowski_profiles(self):
        """Test kappa = 1 and tau = m s / sqrt(1 - m^2 s^2) on (-1/m, 1/m)"""
        sal = salkowski_profile(0.5)
        self.assertEqual(sal.tau.domain, Interval.open(-2.0, 2.0))
        self.assertEqual(sal.kappa(1.0), 1.0)
        self.assertAlmostEqual(sal.tau(1.0), 0.5 / math.sqrt(0.75), places=15)
        self.assertAlmostEqual(sal.phase(1.0), math.asin(0.5), places=12)
        with self.assertRaises(DomainError):
            sal.kappa(2.0)

    def test_salkowski_rejects_zero(self):
        """Test m = 0"""
        with self.assertRaises(ValidationError):
            salkowski_profile(0.0)

    def test_constant_precession_profiles(self):
        """Test kappa = omega cos(mu s), tau = omega sin(mu s)"""
        cp = constant_precession_profile(3.0, 4.0)
        s = np.linspace(0.0, 2.0, 21)
        np.testing.assert_allclose(cp.kappa(s), 3.0 * np.cos(4.0 * s), atol=1e-15)
        np.testing.assert_allclose(cp.tau(s), 3.0 * np.sin(4.0 * s), atol=1e-15)
        self.assertAlmostEqual(cp.cos_theta, 0.8, places=15)
        self.assertAlmostEqual(cp.m, 4.0 / 3.0, places=15)

    def test_helix_successor_is_precession(self):
        """Test the successor of the circular helix (3, 4) at phi0 = 0"""
        helix = helix_apparatus(ConstantProfile(3.0), circular_helix_theta(3.0, 4.0))
        succ = successor_transform(helix, 0.0)
        cp = constant_precession_profile(3.0, 4.0)
        grid = np.linspace(0.0, 10.0, 1001)
        np.testing.assert_allclose(succ.kappa(grid), cp.kappa(grid), atol=1e-12)
        np.testing.assert_allclose(succ.tau(grid), cp.tau(grid), atol=1e-12)

    def test_constant_precession_rejects_zero(self):
        """Test omega = 0 or mu = 0"""
        with self.assertRaises(ValidationError):
            constant_precession_profile(0.0, 1.0)
        with self.assertRaises(ValidationError):
            constant_precession_profile(1.0, 0.0)


class TestTorsionFromCurvature(unittest.TestCase):
    """Test cases for torsion_from_curvature"""

    def test_recovers_salkowski(self):
        """Test kappa = 1, m = 1/2 gives the Salkowski torsion"""
        tau = torsion_from_curvature(ConstantProfile(1.0), 0.5)
        grid = np.linspace(-1.9, 1.9, 381)
        np.testing.assert_allclose(tau(grid), SalkowskiProfile(0.5)(grid), atol=1e-12)
        self.assertAlmostEqual(tau.domain.lo, -2.0, delta=1e-5)
        self.assertAlmostEqual(tau.domain.hi, 2.0, delta=1e-5)
        self.assertFalse(tau.domain.hi_closed)

    def test_recovers_constant_precession(self):
        """Test the constant precession torsion near s = 0"""
        cp = constant_precession_profile(3.0, 4.0)
        tau = torsion_from_curvature(cp.kappa, cp.m)
        grid = np.linspace(-0.35, 0.35, 71)
        np.testing.assert_allclose(tau(grid), cp.tau(grid), atol=1e-9)

    def test_zero_curvature(self):
        """Test kappa = 0 gives zero torsion"""
        tau = torsion_from_curvature(ConstantProfile(0.0), 0.5)
        self.assertEqual(tau(3.0), 0.0)

    def test_empty_domain(self):
        """Test (m C)^2 >= 1 at the anchor"""
        with self.assertRaises(DomainError):
            torsion_from_curvature(ConstantProfile(1.0), 0.5, constant=3.0)
        with self.assertRaises(DomainError):
            torsion_from_curvature(ConstantProfile(0.0), 0.5, constant=2.0)

    def test_search_limit(self):
        """Test bounded K keeps the domain up to the search limit"""
        tau = torsion_from_curvature(HarmonicProfile(1.0, 1.0), 0.5, search_limit=10.0)
        self.assertEqual(tau.domain, Interval.closed(-10.0, 10.0))

    def test_invalid_m(self):
        """Test m = 0"""
        with self.assertRaises(ValidationError):
            torsion_from_curvature(ConstantProfile(1.0), 0.0)


class TestSlantDiagnostics(unittest.TestCase):
    """Test cases for the slope estimate and the phase identity check"""

    def test_slope_estimate_salkowski(self):
        """Test the estimate is m for the Salkowski curve"""
        sal = salkowski_profile(0.5)
        grid = np.linspace(-1.5, 1.5, 30001)
        np.testing.assert_allclose(slant_slope_estimate(sal.kappa, sal.tau, grid), 0.5, atol=1e-5)

    def test_slope_estimate_slant_helix(self):
        """Test the estimate is m for kappa = cos(m s), tau = sin(m s)"""
        params = SlantHelixParams(math.pi / 3)
        slant = slant_helix_apparatus(params)
        grid = np.linspace(0.0, 1.5, 15001)
        np.testing.assert_allclose(slant_slope_estimate(slant.kappa, slant.tau, grid), params.m, atol=1e-6)

    def test_slope_estimate_zero_curvature(self):
        """Test vanishing curvature is rejected"""
        with self.assertRaises(DomainError):
            slant_slope_estimate(ConstantProfile(0.0), ConstantProfile(1.0), np.linspace(0.0, 1.0, 5))

    def test_phase_identity_salkowski(self):
        """Test sin(phi) = m K and cos(phi) = -m T for the Salkowski curve"""
        sal = salkowski_profile(0.5)
        result = phase_curvature_identity_check(sal.kappa, sal.tau, sal.m,
                                                np.linspace(-1.9, 1.9, 381), sal.phase)
        self.assertTrue(result.applicable)
        self.assertLess(result.residual, 1e-10)

    def test_phase_identity_precession(self):
        """Test the identities for constant precession"""
        cp = constant_precession_profile(3.0, 4.0)
        result = phase_curvature_identity_check(cp.kappa, cp.tau, cp.m,
                                                np.linspace(0.0, 10.0, 1001), cp.phase, reference_index=500)
        self.assertLess(result.residual, 1e-10)

    def test_phase_identity_wrong_m(self):
        """Test a wrong slant parameter breaks the identities"""
        cp = constant_precession_profile(3.0, 4.0)
        result = phase_curvature_identity_check(cp.kappa, cp.tau, 1.0,
                                                np.linspace(0.0, 2.0, 201), cp.phase)
        self.assertGreater(result.residual, 1e-3)

    def test_phase_identity_not_applicable(self):
        """Test kappa = tau = 0 is reported as not applicable"""
        result = phase_curvature_identity_check(ConstantProfile(0.0), ConstantProfile(0.0), 1.0,
                                                np.linspace(0.0, 1.0, 11),
                                                PhaseFunction(0.0, ConstantProfile(0.0)))
        self.assertFalse(result.applicable)
        self.assertTrue(math.isnan(result.residual))


if __name__ == '__main__':
    unittest.main()
