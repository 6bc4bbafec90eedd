"""
Verification Module
Invariant suites behind the `verify` command
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.transform import Rotation

from config.default_config import RANDOM_PROFILE_COUNT, RANDOM_PROFILE_SEED, RATIONAL_TOL
from .errors import CurveGeometryError, ValidationError
from .geomcore import (
    E3, Frame, FrenetApparatus, bishop_transform, darboux_vectors, frame_defect,
    rotate_frame, successor_transform, transform_coefficients,
)
from .natural import (
    IntegrationConfig, convergence_ratio, estimate_curvature_torsion, frame_periodicity_check,
    integrate_frenet, integrate_position, successor_frame_period, successor_periodicity,
    total_torsion, uniform_grid,
)
from .profiles import ConstantProfile, HarmonicProfile, ScalarProfile
from .utilities import CheckTimer
from .zoo import (
    SLANT_REFLECTION, SlantHelixParams, circular_helix_theta, constant_precession_profile,
    helix_apparatus, phase_curvature_identity_check, plane_apparatus, salkowski_profile,
    slant_helix_apparatus, slant_slope_estimate, torsion_from_curvature,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    """One verified property: residual compared against a bound"""

    name: str
    residual: float
    tolerance: float
    passed: bool
    comparison: str = "<="
    detail: str = ""

    @classmethod
    def at_most(cls, name: str, residual: float, tolerance: float) -> 'CheckResult':
        residual = float(residual)
        return cls(name, residual, tolerance, bool(residual <= tolerance), "<=")

    @classmethod
    def at_least(cls, name: str, value: float, bound: float) -> 'CheckResult':
        value = float(value)
        return cls(name, value, bound, bool(value >= bound), ">=")

    @classmethod
    def error(cls, name: str, exc: Exception) -> 'CheckResult':
        return cls(name, math.nan, math.nan, False, "<=", f"{type(exc).__name__}: {exc}")

    def report_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{self.name} {self.residual:.6e} {self.comparison} {self.tolerance:.1e} {status}"
        return f"{line} # {self.detail}" if self.detail else line


Check = Callable[[], List[CheckResult]]


def _circular_helix(kappa: float = 3.0, tau: float = 4.0) -> FrenetApparatus:
    return helix_apparatus(ConstantProfile(kappa), circular_helix_theta(kappa, tau))


def _max_abs(values) -> float:
    return float(np.max(np.abs(values)))


def _random_profiles(count: int, seed: int) -> List[Tuple[ScalarProfile, ScalarProfile, Frame]]:
    """Smooth (kappa, tau) pairs with a random initial frame"""
    rng = np.random.default_rng(seed)
    profiles = []
    for _ in range(count):
        kappa = (ConstantProfile(rng.uniform(0.5, 1.0))
                 + HarmonicProfile(rng.uniform(-0.2, 0.2), rng.uniform(0.5, 1.5),
                                   rng.uniform(0.0, 2 * math.pi), "cos"))
        tau = (ConstantProfile(rng.uniform(-0.5, 0.5))
               + HarmonicProfile(rng.uniform(-0.2, 0.2), rng.uniform(0.5, 1.5),
                                 rng.uniform(0.0, 2 * math.pi), "sin"))
        rotation = Rotation.random(random_state=rng).as_matrix()
        profiles.append((kappa, tau, Frame.from_matrix(rotation)))
    return profiles


# ---------------------------------------------------------------- geomcore

def _check_frame_rotation() -> List[CheckResult]:
    rng = np.random.default_rng(RANDOM_PROFILE_SEED)
    frame_res, norm_res = 0.0, 0.0
    for _ in range(50):
        frame = Frame.from_matrix(Rotation.random(random_state=rng).as_matrix())
        phi = rng.uniform(-math.pi, math.pi)
        rotated = rotate_frame(frame, phi)
        frame_res = max(frame_res, frame_defect(rotated), _max_abs(rotated.t - frame.t))
        k1, k2, k3 = rng.normal(size=3)
        a, b, _ = transform_coefficients(k1, k2, k3, phi, rng.normal())
        norm_res = max(norm_res, abs(math.hypot(a, b) - math.hypot(k1, k2)))
    return [CheckResult.at_most("frame-rotation-identity", frame_res, 1e-12),
            CheckResult.at_most("coefficient-norm-preservation", norm_res, 1e-12)]


def _check_successor_identities() -> List[CheckResult]:
    helix = _circular_helix()
    grid = np.linspace(0.0, 10.0, 2001)
    succ = successor_transform(helix, 0.3)
    normal_res = _max_abs(succ.normal(grid) - helix.tangent(grid))
    kappa_b = helix.kappa(grid)[:, None] * helix.binormal(grid)
    darboux_res = _max_abs(darboux_vectors(succ, grid) - kappa_b)
    return [CheckResult.at_most("successor-normal-identity", normal_res, 1e-12),
            CheckResult.at_most("successor-darboux-identity", darboux_res, 1e-12),
            CheckResult.at_most("successor-frame-defect", frame_defect(succ.frame_matrices(grid)), 1e-12)]


def _check_successor_composition() -> List[CheckResult]:
    helix = _circular_helix()
    grid = np.linspace(0.0, 10.0, 2001)
    a, b = 0.3, 1.1
    first = successor_transform(helix, a).frame_matrices(grid)
    second = successor_transform(helix, b).frame_matrices(grid)
    c, s = math.cos(b - a), math.sin(b - a)
    mix = np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    return [CheckResult.at_most("successor-composition-law", _max_abs(mix @ first - second), 1e-12)]


def _check_bishop_closed_form() -> List[CheckResult]:
    helix = _circular_helix()
    grid = np.linspace(0.0, 10.0, 2001)
    bishop = bishop_transform(helix, 0.7)
    norm_res = _max_abs(np.hypot(bishop.k1(grid), bishop.k2(grid)) - helix.kappa(grid))
    tangent_res = _max_abs(bishop.frame_matrices(grid)[:, 0] - helix.tangent(grid))
    return [CheckResult.at_most("bishop-coefficient-norm", norm_res, 1e-12),
            CheckResult.at_most("bishop-tangent-kept", tangent_res, 1e-15)]


# ----------------------------------------------------------------- natural

def _check_circle_closure() -> List[CheckResult]:
    app = integrate_frenet(ConstantProfile(1.0), ConstantProfile(0.0), Frame.canonical(),
                           (0.0, 2 * math.pi), IntegrationConfig(step=1e-3))
    samples = integrate_position(app)
    return [CheckResult.at_most("circle-closure", samples.closure_residual(), 1e-7),
            CheckResult.at_most("circle-unit-speed", samples.unit_speed_defect(), 1e-8),
            CheckResult.at_most("frame-drift", frame_defect(app.frames.values), 1e-12)]


def _check_curvature_roundtrip() -> List[CheckResult]:
    app = integrate_frenet(ConstantProfile(3.0), ConstantProfile(4.0), Frame.canonical(),
                           (0.0, 5.0), IntegrationConfig(step=1e-3))
    kappa_hat, tau_hat = estimate_curvature_torsion(integrate_position(app))
    inner = kappa_hat.grid[2:-2]
    return [CheckResult.at_most("curvature-roundtrip", _max_abs(kappa_hat(inner) - 3.0), 1e-4),
            CheckResult.at_most("torsion-roundtrip", _max_abs(tau_hat(inner) - 4.0), 1e-4)]


def _check_total_torsion() -> List[CheckResult]:
    cp = constant_precession_profile(3.0, 4.0)
    helix_total = total_torsion(ConstantProfile(4.0), (0.0, 2 * math.pi))
    return [CheckResult.at_most("total-torsion-constant", abs(helix_total - 8 * math.pi), 1e-12),
            CheckResult.at_most("total-torsion-precession-period",
                                abs(total_torsion(cp.tau, (0.0, 0.5 * math.pi))), 1e-10)]


# --------------------------------------------------------------------- zoo

def _check_helix_slope() -> List[CheckResult]:
    theta = math.pi / 5
    helix = helix_apparatus(HarmonicProfile(1.0, 0.5, 0.0, "cos") + ConstantProfile(2.0), theta)
    grid = np.linspace(-10.0, 10.0, 4001)
    frames = helix.frame_matrices(grid)
    return [CheckResult.at_most("helix-slope", _max_abs(frames[:, 0] @ E3 - math.cos(theta)), 1e-12),
            CheckResult.at_most("helix-normal-horizontal", _max_abs(frames[:, 1] @ E3), 1e-15)]


def _check_slant_helix() -> List[CheckResult]:
    params = SlantHelixParams(math.pi / 3)
    sh = slant_helix_apparatus(params)
    app = sh.frenet()
    grid = np.linspace(0.0, 20.0, 4001)
    speed = sh.kappa(grid) ** 2 + sh.tau(grid) ** 2 - sh.helix_kappa(grid) ** 2
    return [
        CheckResult.at_most("slant-normal-slope", _max_abs(app.normal(grid) @ E3 - params.n), 1e-12),
        CheckResult.at_most("slant-successor-consistency",
                            _max_abs(app.tangent(grid) - sh.tangent(grid)), 1e-9),
        CheckResult.at_most("slant-angular-speed", _max_abs(speed), 1e-10),
    ]


def _check_tangent_derivative_law() -> List[CheckResult]:
    sh = slant_helix_apparatus(SlantHelixParams(math.pi / 3))
    grid = uniform_grid((0.0, 20.0), 1e-3)
    dt = np.gradient(sh.tangent(grid), grid, axis=0, edge_order=2)
    # the slant normal is the reflected helix tangent
    expected = sh.kappa(grid)[:, None] * (sh.helix().tangent(grid) @ SLANT_REFLECTION.T)
    return [CheckResult.at_most("tangent-derivative-law", _max_abs((dt - expected)[1:-1]), 1e-5)]


def _check_torsion_recovery() -> List[CheckResult]:
    sal = salkowski_profile(0.5)
    recovered = torsion_from_curvature(ConstantProfile(1.0), 0.5)
    grid = np.linspace(-1.9, 1.9, 3801)
    cp = constant_precession_profile(3.0, 4.0)
    cp_tau = torsion_from_curvature(cp.kappa, cp.m)
    cp_grid = np.linspace(-0.35, 0.35, 701)
    return [CheckResult.at_most("salkowski-torsion-recovery", _max_abs(recovered(grid) - sal.tau(grid)), 1e-9),
            CheckResult.at_most("precession-torsion-recovery",
                                _max_abs(cp_tau(cp_grid) - cp.tau(cp_grid)), 1e-9)]


# -------------------------------------------------------------- acceptance

def _slant_tangent_error(step: float) -> float:
    sh = slant_helix_apparatus(SlantHelixParams(math.pi / 3))
    initial = sh.frenet().frame_at(0.0)
    app = integrate_frenet(sh.kappa, sh.tau, initial, (0.0, 20.0), IntegrationConfig(step=step))
    return _max_abs(app.frames.values[:, 0] - sh.tangent(app.grid))


def _accept_plane_to_helix() -> List[CheckResult]:
    circle = plane_apparatus(ConstantProfile(1.0))
    grid = np.linspace(0.0, 10.0, 1001)
    residual = 0.0
    for theta in (math.pi / 6, math.pi / 4, math.pi / 3):
        succ = successor_transform(circle, 0.5 * math.pi - theta)
        residual = max(residual, _max_abs(succ.kappa(grid) - math.sin(theta)),
                       _max_abs(succ.tau(grid) - math.cos(theta)))
    return [CheckResult.at_most("plane-to-helix-successor", residual, 1e-14)]


def _accept_helix_to_precession() -> List[CheckResult]:
    succ = successor_transform(_circular_helix(), 0.0)
    cp = constant_precession_profile(3.0, 4.0)
    grid = uniform_grid((0.0, 10.0), 1e-3)
    residual = max(_max_abs(succ.kappa(grid) - cp.kappa(grid)), _max_abs(succ.tau(grid) - cp.tau(grid)))
    return [CheckResult.at_most("helix-to-precession-successor", residual, 1e-12)]


def _accept_closed_form_vs_ode() -> List[CheckResult]:
    return [CheckResult.at_most("slant-helix-ode-tangent", _slant_tangent_error(1e-3), 1e-7)]


def _accept_convergence_order() -> List[CheckResult]:
    # at steps 1e-3 and 5e-4 both errors sit at the roundoff floor (about 1e-13)
    ratio = convergence_ratio(_slant_tangent_error(0.1), _slant_tangent_error(0.05))
    return [CheckResult.at_least("rk4-convergence-ratio", ratio, 12.0)]


def _accept_normal_slope() -> List[CheckResult]:
    app = slant_helix_apparatus(SlantHelixParams(math.pi / 3)).frenet()
    slope = app.normal(np.linspace(0.0, 20.0, 20001)) @ E3
    return [CheckResult.at_most("slant-normal-slope-variation", np.ptp(slope), 1e-10)]


def _accept_slope_estimate() -> List[CheckResult]:
    cp = constant_precession_profile(3.0, 4.0)
    # cos(4s) vanishes at s = pi/8; the finite-difference estimate degrades near it
    cp_grid = np.linspace(-0.15, 0.15, 3001)
    sal = salkowski_profile(0.5)
    sal_grid = np.linspace(-1.9, 1.9, 38001)
    return [
        CheckResult.at_most("slope-estimate-precession",
                            _max_abs(slant_slope_estimate(cp.kappa, cp.tau, cp_grid) - 4.0 / 3.0), 1e-6),
        CheckResult.at_most("slope-estimate-salkowski",
                            _max_abs(slant_slope_estimate(sal.kappa, sal.tau, sal_grid) - 0.5), 1e-5),
    ]


def _accept_circle_identity() -> List[CheckResult]:
    sal = salkowski_profile(0.5)
    sal_check = phase_curvature_identity_check(sal.kappa, sal.tau, sal.m,
                                               np.linspace(-1.9, 1.9, 3801), sal.phase)
    cp = constant_precession_profile(3.0, 4.0)
    cp_check = phase_curvature_identity_check(cp.kappa, cp.tau, cp.m,
                                              np.linspace(0.0, 10.0, 10001), cp.phase)
    return [CheckResult.at_most("phase-identity-salkowski", sal_check.residual, 1e-10),
            CheckResult.at_most("phase-identity-precession", cp_check.residual, 1e-10)]


def _accept_periodicity() -> List[CheckResult]:
    period = successor_frame_period(3.0, 4.0)
    if period is None:
        return [CheckResult("successor-frame-period", math.inf, 1e-6, False, detail="no rational period")]
    cp = constant_precession_profile(3.0, 4.0)
    app = integrate_frenet(cp.kappa, cp.tau, Frame.canonical(), (0.0, 2 * period),
                           IntegrationConfig(step=period / 6000))
    periodic = frame_periodicity_check(app, period, 1e-6)
    phase_period = 2 * math.pi / 4.0
    totals = max(abs(total_torsion(cp.kappa, (0.0, phase_period))),
                 abs(total_torsion(cp.tau, (0.0, phase_period))))
    helix_period = 2 * math.pi * 0.8 / 4.0
    verdict = successor_periodicity(_circular_helix(), helix_period)
    return [CheckResult.at_most("successor-frame-period", periodic.residual, 1e-6),
            CheckResult.at_most("precession-period-totals", totals, 1e-10),
            CheckResult.at_most("successor-periodicity-rational", verdict.error, RATIONAL_TOL)]


def _random_transforms() -> Iterable[Tuple[FrenetApparatus, np.ndarray]]:
    cfg = IntegrationConfig(step=2e-3)
    for kappa, tau, initial in _random_profiles(RANDOM_PROFILE_COUNT, RANDOM_PROFILE_SEED):
        app = integrate_frenet(kappa, tau, initial, (0.0, 2.0), cfg)
        yield app, app.grid


def _accept_darboux_and_bishop() -> List[CheckResult]:
    darboux_res, norm_res, k3_res = 0.0, 0.0, 0.0
    for app, grid in _random_transforms():
        succ = successor_transform(app, 0.0)
        kappa = app.kappa(grid)
        darboux_res = max(darboux_res, _max_abs(darboux_vectors(succ, grid)
                                                - kappa[:, None] * app.binormal(grid)))

        bishop = bishop_transform(app, 0.0)
        norm_res = max(norm_res, _max_abs(bishop.k1(grid) ** 2 + bishop.k2(grid) ** 2 - kappa ** 2))
        frames = bishop.frame_matrices(grid)
        dn1 = np.gradient(frames[:, 1], grid, axis=0, edge_order=2)
        k3 = np.sum(dn1 * frames[:, 2], axis=1)
        k3_res = max(k3_res, _max_abs(k3[1:-1]))
    return [CheckResult.at_most("random-darboux-identity", darboux_res, 1e-9),
            CheckResult.at_most("random-bishop-norm", norm_res, 1e-10),
            CheckResult.at_most("random-bishop-k3", k3_res, 1e-5)]


SUITES: Dict[str, Sequence[Check]] = {
    "geomcore": (_check_frame_rotation, _check_successor_identities, _check_successor_composition,
                 _check_bishop_closed_form),
    "natural": (_check_circle_closure, _check_curvature_roundtrip, _check_total_torsion),
    "zoo": (_check_helix_slope, _check_slant_helix, _check_tangent_derivative_law,
            _check_torsion_recovery),
    "acceptance": (
        _accept_plane_to_helix,
        _accept_helix_to_precession,
        _accept_closed_form_vs_ode,
        _accept_convergence_order,
        _accept_normal_slope,
        _accept_slope_estimate,
        _accept_circle_identity,
        _accept_periodicity,
        _accept_darboux_and_bishop,
    ),
}


def resolve_suites(names: Iterable[str]) -> List[str]:
    """Expand "all", drop duplicates and reject unknown suite names"""
    resolved: List[str] = []
    for name in names:
        expanded = list(SUITES) if name == "all" else [name]
        for suite in expanded:
            if suite not in SUITES:
                raise ValidationError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")
            if suite not in resolved:
                resolved.append(suite)
    return resolved


def run_suite(name: str) -> List[CheckResult]:
    """Run every check of one suite; geometry errors become failed checks"""
    if name not in SUITES:
        raise ValidationError(f"unknown suite {name!r}")
    timer = CheckTimer()
    results: List[CheckResult] = []
    for check in SUITES[name]:
        timer.start()
        try:
            results.extend(check())
        except CurveGeometryError as e:
            logger.error(f"{name}: {check.__name__} raised {e}")
            results.append(CheckResult.error(check.__name__.lstrip('_'), e))
        logger.debug(f"{name}: {check.__name__} took {timer.stop():.1f} ms")
    logger.info(f"Suite {name}: {sum(r.passed for r in results)}/{len(results)} checks passed "
                f"in {timer.get_total_duration():.0f} ms")
    return results


def run_suites(names: Iterable[str], max_workers: Optional[int] = None) -> Dict[str, List[CheckResult]]:
    """Run suites concurrently; results keep the requested order"""
    suites = resolve_suites(names)
    with ThreadPoolExecutor(max_workers=max_workers or len(suites) or 1) as pool:
        futures = {name: pool.submit(run_suite, name) for name in suites}
        return {name: futures[name].result() for name in suites}
