"""
Unit tests for Natural Equations module
"""

import math
import unittest
from fractions import Fraction
import numpy as np

from successor_curves.errors import DomainError, FrameError, IntegrationError, ValidationError
from successor_curves.geomcore import Frame, frame_defect
from successor_curves.natural import (
    CurveSamples, IntegrationConfig, approximate_rational, convergence_ratio,
    estimate_curvature_torsion, frame_periodicity_check, integrate_frenet, integrate_position,
    sample_apparatus, successor_frame_period, successor_periodicity, total_torsion,
    uniform_grid,
)
from successor_curves.profiles import ConstantProfile, HarmonicProfile, Interval
from successor_curves.zoo import (
    constant_precession_profile, helix_apparatus, plane_apparatus, salkowski_profile,
)


class TestIntegrationConfig(unittest.TestCase):
    """Test cases for IntegrationConfig and grids"""

    def test_defaults(self):
        """Test default settings"""
        cfg = IntegrationConfig()
        self.assertEqual(cfg.step, 1e-3)
        self.assertEqual(cfg.renorm_every, 1)
        self.assertEqual(cfg.method, "rk4-classic")

    def test_invalid_settings(self):
        """Test invalid steps, intervals and methods"""
        with self.assertRaises(IntegrationError):
            IntegrationConfig(step=0.0)
        with self.assertRaises(IntegrationError):
            IntegrationConfig(renorm_every=0)
        with self.assertRaises(IntegrationError):
            IntegrationConfig(method="euler")

    def test_uniform_grid_node_count(self):
        """Test node count is range/step + 1"""
        grid = uniform_grid((0.0, 10.0), 1e-3)
        self.assertEqual(grid.size, 10001)
        self.assertEqual(grid[0], 0.0)
        self.assertEqual(grid[-1], 10.0)

    def test_uniform_grid_non_dividing_step(self):
        """Test a step that does not divide the range is shrunk"""
        grid = uniform_grid((0.0, 1.0), 0.3)
        self.assertEqual(grid.size, 5)
        self.assertLessEqual(grid[1] - grid[0], 0.3)

    def test_step_larger_than_range(self):
        """Test step longer than the interval"""
        with self.assertRaises(IntegrationError):
            uniform_grid((0.0, 1.0), 2.0)


class TestIntegrateFrenet(unittest.TestCase):
    """Test cases for integrate_frenet"""

    def test_unit_circle_tangent(self):
        """Test T(s) = (cos s, sin s, 0) for kappa = 1, tau = 0"""
        app = integrate_frenet(ConstantProfile(1.0), ConstantProfile(0.0), Frame.canonical(),
                               (0.0, 2 * math.pi))
        grid = app.grid
        expected = np.stack([np.cos(grid), np.sin(grid), np.zeros_like(grid)], axis=1)
        np.testing.assert_allclose(app.tangent(grid), expected, atol=1e-8)
        self.assertLessEqual(frame_defect(app.frames.values), 1e-12)
        self.assertTrue(app.sampled)

    def test_zero_profiles_keep_frame(self):
        """Test a zero right-hand side leaves the frame constant"""
        app = integrate_frenet(ConstantProfile(0.0), ConstantProfile(0.0), Frame.canonical(),
                               (0.0, 1.0), IntegrationConfig(step=0.01))
        np.testing.assert_allclose(app.frames.values, np.broadcast_to(np.eye(3), (101, 3, 3)), atol=1e-15)

    def test_circular_helix_matches_closed_form(self):
        """Test kappa = sin(theta), tau = cos(theta) against the helix frame"""
        theta = math.pi / 5
        helix = helix_apparatus(ConstantProfile(math.sin(theta)), theta)
        app = integrate_frenet(ConstantProfile(math.sin(theta)), ConstantProfile(math.cos(theta)),
                               helix.frame_at(0.0), (0.0, 10.0))
        np.testing.assert_allclose(app.tangent(app.grid), helix.tangent(app.grid), atol=1e-8)

    def test_convergence_order(self):
        """Test halving the step cuts the tangent error by at least 12"""
        def error(step):
            app = integrate_frenet(ConstantProfile(1.0), ConstantProfile(0.0), Frame.canonical(),
                                   (0.0, 10.0), IntegrationConfig(step=step))
            exact = plane_apparatus(ConstantProfile(1.0)).tangent(app.grid)
            return np.max(np.abs(app.tangent(app.grid) - exact))

        self.assertGreaterEqual(convergence_ratio(error(0.1), error(0.05)), 12.0)

    def test_helix_convergence_order(self):
        """Test the fourth-order error reduction on the circular helix (3, 4)"""
        helix = helix_apparatus(ConstantProfile(3.0), math.atan2(3.0, 4.0))

        def error(step):
            app = integrate_frenet(helix.kappa, helix.tau, helix.frame_at(0.0),
                                   (0.0, 5.0), IntegrationConfig(step=step))
            return np.max(np.abs(app.frames.values - helix.frame_matrices(app.grid)))

        coarse, fine = error(0.05), error(0.025)
        self.assertGreater(fine, 1e-10)
        self.assertGreaterEqual(convergence_ratio(coarse, fine), 12.0)

    def test_domain_failure(self):
        """Test profile evaluation outside its domain"""
        sal = salkowski_profile(0.5)
        with self.assertRaises(DomainError):
            integrate_frenet(sal.kappa, sal.tau, Frame.canonical(), (-2.0, 2.0))

    def test_drift_without_renormalization(self):
        """Test large steps without re-orthonormalization are reported"""
        with self.assertRaises(FrameError):
            integrate_frenet(ConstantProfile(5.0), ConstantProfile(5.0), Frame.canonical(),
                             (0.0, 50.0), IntegrationConfig(step=0.2, renorm_every=10_000))


class TestPositions(unittest.TestCase):
    """Test cases for integrate_position and CurveSamples"""

    def test_circle_closure(self):
        """Test the unit circle closes"""
        app = integrate_frenet(ConstantProfile(1.0), ConstantProfile(0.0), Frame.canonical(),
                               (0.0, 2 * math.pi))
        samples = integrate_position(app)
        self.assertLess(samples.closure_residual(), 1e-7)
        self.assertLess(samples.unit_speed_defect(), 1e-8)

    def test_straight_line(self):
        """Test constant tangent gives x0 + s T"""
        app = integrate_frenet(ConstantProfile(0.0), ConstantProfile(0.0), Frame.canonical(),
                               (0.0, 2.0), IntegrationConfig(step=0.1))
        samples = integrate_position(app, x0=(1.0, 2.0, 3.0))
        np.testing.assert_allclose(samples.points[:, 0], 1.0 + samples.s_grid, atol=1e-12)
        np.testing.assert_allclose(samples.points[:, 1:], np.tile([2.0, 3.0], (21, 1)), atol=1e-12)

    def test_constant_precession_unit_speed(self):
        """Test chord lengths match the grid over one frame period"""
        app = integrate_frenet(HarmonicProfile(3.0, 4.0), HarmonicProfile(3.0, 4.0, mode="sin"),
                               Frame.canonical(), (0.0, 2 * math.pi))
        self.assertLess(integrate_position(app).unit_speed_defect(), 1e-8)

    def test_closed_form_apparatus_needs_sampling(self):
        """Test positions need a sampled tangent field"""
        circle = plane_apparatus(ConstantProfile(1.0))
        with self.assertRaises(IntegrationError):
            integrate_position(circle)
        samples = integrate_position(sample_apparatus(circle, np.linspace(0.0, math.pi, 1001)))
        np.testing.assert_allclose(samples.points[-1], [0.0, 2.0, 0.0], atol=1e-9)

    def test_too_few_nodes(self):
        """Test quadrature with two nodes"""
        app = sample_apparatus(plane_apparatus(ConstantProfile(1.0)), [0.0, 1.0])
        with self.assertRaises(IntegrationError):
            integrate_position(app)

    def test_samples_validation(self):
        """Test CurveSamples shape checks"""
        with self.assertRaises(ValidationError):
            CurveSamples(np.array([0.0, 1.0]), np.zeros((3, 3)))
        with self.assertRaises(ValidationError):
            CurveSamples(np.array([1.0, 0.0]), np.zeros((2, 3)))


class TestTotalTorsion(unittest.TestCase):
    """Test cases for total_torsion and periodicity"""

    def test_constant_torsion(self):
        """Test tau = mu on [0, L] gives mu L"""
        self.assertAlmostEqual(total_torsion(ConstantProfile(4.0), (0.0, 2.5)), 10.0, places=14)

    def test_helix_period(self):
        """Test total torsion per helix period is 2 pi cos(theta)"""
        omega, mu = 3.0, 4.0
        cos_theta = mu / math.hypot(omega, mu)
        period = 2 * math.pi * cos_theta / mu
        self.assertAlmostEqual(total_torsion(ConstantProfile(mu), (0.0, period)),
                               2 * math.pi * cos_theta, places=14)

    def test_sine_full_period(self):
        """Test integral of sin over a full period"""
        tau = HarmonicProfile(1.0, 1.0, mode="sin")
        self.assertAlmostEqual(total_torsion(tau, (0.0, 2 * math.pi)), 0.0, delta=1e-12)

    def test_interval_outside_domain(self):
        """Test intervals leaving the domain"""
        with self.assertRaises(DomainError):
            total_torsion(salkowski_profile(0.5).tau, Interval.closed(0.0, 3.0))

    def test_helix_frame_periodic(self):
        """Test the circular-helix frame repeats after 2 pi cos(theta) / mu"""
        helix = helix_apparatus(ConstantProfile(3.0), math.atan2(3.0, 4.0))
        period = 2 * math.pi * 0.8 / 4.0
        result = frame_periodicity_check(helix, period, 1e-7, grid=np.linspace(0.0, 5.0, 2001))
        self.assertTrue(result.periodic)
        self.assertLess(result.residual, 1e-7)

    def test_constant_frame_periodic(self):
        """Test a constant frame is periodic for any period"""
        app = integrate_frenet(ConstantProfile(0.0), ConstantProfile(0.0), Frame.canonical(),
                               (0.0, 1.0), IntegrationConfig(step=0.01))
        result = frame_periodicity_check(app, 0.37, 1e-12)
        self.assertTrue(result.periodic)
        self.assertLess(result.residual, 1e-12)

    def test_period_equal_to_range(self):
        """Test a circle sampled over exactly one period compares its end frames"""
        app = integrate_frenet(ConstantProfile(1.0), ConstantProfile(0.0), Frame.canonical(),
                               (0.0, 2 * math.pi), IntegrationConfig(step=1e-3))
        result = frame_periodicity_check(app, 2 * math.pi, 1e-7)
        self.assertTrue(result.periodic)
        self.assertEqual(result.nodes_compared, 1)

    def test_precession_successor_frame_periodic(self):
        """Test the constant precession frame with cos(theta) = 4/5 repeats after 2 pi"""
        cp = constant_precession_profile(3.0, 4.0)
        period = successor_frame_period(3.0, 4.0)
        app = integrate_frenet(cp.kappa, cp.tau, Frame.canonical(), (0.0, period),
                               IntegrationConfig(step=period / 6000))
        result = frame_periodicity_check(app, period, 1e-6)
        self.assertTrue(result.periodic, result.residual)

    def test_period_exceeds_range(self):
        """Test periods longer than the sampled range"""
        app = integrate_frenet(ConstantProfile(1.0), ConstantProfile(0.0), Frame.canonical(),
                               (0.0, 1.0), IntegrationConfig(step=0.01))
        with self.assertRaises(DomainError):
            frame_periodicity_check(app, 2.0, 1e-6)


class TestEstimation(unittest.TestCase):
    """Test cases for estimate_curvature_torsion"""

    def test_circle_roundtrip(self):
        """Test kappa = 1, tau = 0 are recovered at interior nodes"""
        app = integrate_frenet(ConstantProfile(1.0), ConstantProfile(0.0), Frame.canonical(), (0.0, 3.0))
        kappa, tau = estimate_curvature_torsion(integrate_position(app))
        inner = kappa.grid[1:-1]
        np.testing.assert_allclose(kappa(inner), 1.0, atol=1e-5)
        np.testing.assert_allclose(tau(inner), 0.0, atol=1e-5)

    def test_straight_line_from_positions(self):
        """Test line samples: zero curvature, torsion reported as 0"""
        s = np.linspace(0.0, 1.0, 11)
        samples = CurveSamples(s, np.outer(s, [0.6, 0.8, 0.0]))
        kappa, tau = estimate_curvature_torsion(samples)
        np.testing.assert_allclose(kappa.values, 0.0, atol=1e-12)
        np.testing.assert_array_equal(tau.values, np.zeros(11))

    def test_helix_from_positions(self):
        """Test the position-based estimator on a closed-form helix"""
        s = np.linspace(0.0, 2.0, 2001)
        r, c = 3.0 / 25.0, 4.0 / 25.0
        points = np.stack([r * np.cos(5 * s), r * np.sin(5 * s), c * 5 * s], axis=1)
        kappa, tau = estimate_curvature_torsion(CurveSamples(s, points))
        np.testing.assert_allclose(kappa.values[5:-5], 3.0, rtol=1e-3)
        np.testing.assert_allclose(tau.values[5:-5], 4.0, rtol=1e-3)

    def test_salkowski_roundtrip(self):
        """Test kappa = 1 is recovered on the Salkowski interior"""
        sal = salkowski_profile(0.5)
        app = integrate_frenet(sal.kappa, sal.tau, Frame.canonical(), (-1.5, 1.5))
        kappa, _ = estimate_curvature_torsion(integrate_position(app))
        np.testing.assert_allclose(kappa.values[1:-1], 1.0, atol=1e-4)

    def test_requirements(self):
        """Test node count and uniformity requirements"""
        s = np.linspace(0.0, 1.0, 4)
        with self.assertRaises(IntegrationError):
            estimate_curvature_torsion(CurveSamples(s, np.outer(s, [1.0, 0.0, 0.0])))
        s = np.array([0.0, 0.1, 0.3, 0.4, 0.5, 0.6])
        with self.assertRaises(IntegrationError):
            estimate_curvature_torsion(CurveSamples(s, np.outer(s, [1.0, 0.0, 0.0])))


class TestRationality(unittest.TestCase):
    """Test cases for the rationality verdict and successor frame periods"""

    def test_exact_fraction(self):
        """Test exact inputs are rational by construction"""
        verdict = approximate_rational(Fraction(4, 5))
        self.assertTrue(verdict.exact)
        self.assertTrue(verdict.approximately_rational)
        self.assertEqual(verdict.fraction, Fraction(4, 5))

    def test_float_input(self):
        """Test floats are only approximately rational"""
        verdict = approximate_rational(0.8)
        self.assertFalse(verdict.exact)
        self.assertTrue(verdict.approximately_rational)
        self.assertEqual(verdict.fraction, Fraction(4, 5))

    def test_irrational_input(self):
        """Test 1/sqrt(2) is not rational with denominator <= 1000"""
        self.assertFalse(approximate_rational(1 / math.sqrt(2)).approximately_rational)

    def test_successor_frame_period(self):
        """Test cos(theta) = 4/5 gives period 2 pi"""
        self.assertAlmostEqual(successor_frame_period(3.0, 4.0), 2 * math.pi, places=14)
        self.assertIsNone(successor_frame_period(1.0, 1.0))
        with self.assertRaises(ValidationError):
            successor_frame_period(0.0, 1.0)

    def test_successor_periodicity(self):
        """Test total torsion per helix frame period against multiples of pi"""
        rational = helix_apparatus(ConstantProfile(3.0), math.atan2(3.0, 4.0))
        verdict = successor_periodicity(rational, 2 * math.pi * 0.8 / 4.0)
        self.assertTrue(verdict.approximately_rational)
        self.assertEqual(verdict.fraction, Fraction(8, 5))

        irrational = helix_apparatus(ConstantProfile(1.0), math.pi / 4)
        verdict = successor_periodicity(irrational, 2 * math.pi / math.sqrt(2))
        self.assertFalse(verdict.approximately_rational)

        with self.assertRaises(ValidationError):
            successor_periodicity(rational, 0.0)

    def test_convergence_ratio(self):
        """Test the error reduction ratio"""
        self.assertAlmostEqual(convergence_ratio(1.6e-5, 1e-6), 16.0, places=12)
        self.assertEqual(convergence_ratio(1.0, 0.0), math.inf)


if __name__ == '__main__':
    unittest.main()
