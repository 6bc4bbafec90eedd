"""
Curve Zoo Module
Closed-form families: plane curves, general helices, slant helices,
Salkowski curves and curves of constant precession
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from config.default_config import (
    DEGENERATE_CURVATURE, DOMAIN_MARGIN, DOMAIN_SEARCH_LIMIT, DOMAIN_SEARCH_STEP,
)
from .errors import DomainError, ValidationError
from .geomcore import (
    ClosedFormFrameField, FrenetApparatus, rigid_motion, successor_transform,
)
from .profiles import (
    ArrayLike, ConstantProfile, HarmonicProfile, Interval, PhaseFunction,
    SalkowskiProfile, ScalarProfile, SlantTorsionProfile, modulate,
)

logger = logging.getLogger(__name__)

# Flips the first two components; the printed slant-helix tangent uses this orientation
SLANT_REFLECTION = np.diag([-1.0, -1.0, 1.0])


def _check_theta(theta: float) -> None:
    if not (math.isfinite(theta) and 0.0 < theta < 0.5 * math.pi):
        raise ValidationError(f"slope angle theta must lie in (0, pi/2) radians, got {theta}")


def plane_apparatus(kappa: ScalarProfile, omega0: float = 0.0) -> FrenetApparatus:
    """
    Frenet apparatus of the plane curve with signed curvature kappa

    Args:
        kappa: Curvature profile
        omega0: Initial tangent angle

    Returns:
        Apparatus with T = (cos W, sin W, 0), W = omega0 + integral of kappa, tau = 0
    """
    def rule(s):
        omega = omega0 + kappa._primitive(s)
        c, sn = np.cos(omega), np.sin(omega)
        zero, one = np.zeros_like(omega), np.ones_like(omega)
        return np.stack([
            np.stack([c, sn, zero], axis=-1),
            np.stack([-sn, c, zero], axis=-1),
            np.stack([zero, zero, one], axis=-1),
        ], axis=-2)

    frames = ClosedFormFrameField(rule, kappa.domain, label="plane")
    return FrenetApparatus(frames, kappa, ConstantProfile(0.0, kappa.domain),
                           generic=True, label="plane")


def helix_apparatus(kappa_h: ScalarProfile, theta: float, omega0: float = 0.0) -> FrenetApparatus:
    """
    Frenet apparatus of a general helix with slope angle theta about e3

    Args:
        kappa_h: Curvature profile of the helix
        theta: Slope angle in (0, pi/2), radians
        omega0: Integration constant of W = omega0 + (1/sin theta) * integral of kappa_h

    Returns:
        Apparatus with tau = cot(theta) * kappa_h
    """
    _check_theta(theta)
    st, ct = math.sin(theta), math.cos(theta)

    def rule(s):
        omega = omega0 + kappa_h._primitive(s) / st
        c, sn = np.cos(omega), np.sin(omega)
        zero = np.zeros_like(omega)
        return np.stack([
            np.stack([st * sn, -st * c, np.full_like(omega, ct)], axis=-1),
            np.stack([c, sn, zero], axis=-1),
            np.stack([-ct * sn, ct * c, np.full_like(omega, st)], axis=-1),
        ], axis=-2)

    frames = ClosedFormFrameField(rule, kappa_h.domain, label="helix")
    return FrenetApparatus(frames, kappa_h, kappa_h.scaled(ct / st),
                           generic=True, label="helix")


def circular_helix_theta(kappa: float, tau: float) -> float:
    """Slope angle of the circular helix with constant kappa > 0 and tau > 0"""
    if kappa <= 0.0 or tau <= 0.0:
        raise ValidationError(f"circular helix needs kappa > 0 and tau > 0, got {kappa}, {tau}")
    return math.atan2(kappa, tau)


@dataclass(frozen=True, eq=False)
class SlantHelixParams:
    """Slope angle theta of the principal normal and the phase phi(s)"""

    theta: float
    phase: Optional[PhaseFunction] = None

    def __post_init__(self):
        _check_theta(self.theta)
        if self.phase is None:
            object.__setattr__(self, 'phase', PhaseFunction(0.0, ConstantProfile(self.m)))

    @property
    def m(self) -> float:
        return 1.0 / math.tan(self.theta)

    @property
    def n(self) -> float:
        return math.cos(self.theta)

    @property
    def lambda1(self) -> float:
        return 1.0 - self.n

    @property
    def lambda2(self) -> float:
        return 1.0 + self.n


@dataclass(frozen=True, eq=False)
class SlantHelixApparatus:
    """Closed-form slant helix: tangent, profiles and the underlying helix profiles"""

    params: SlantHelixParams
    kappa: ScalarProfile
    tau: ScalarProfile
    helix_kappa: ScalarProfile
    helix_tau: ScalarProfile

    @property
    def domain(self) -> Interval:
        return self.kappa.domain.intersect(self.tau.domain)

    def omega(self, s: ArrayLike):
        return self.params.phase(s) / self.params.n

    def tangent(self, s: ArrayLike) -> np.ndarray:
        """Closed-form unit tangent, shape (N, 3)"""
        p = self.params
        omega = np.atleast_1d(self.omega(s))
        l1, l2, n = p.lambda1, p.lambda2, p.n
        return np.stack([
            0.5 * (l1 * np.cos(l2 * omega) + l2 * np.cos(l1 * omega)),
            0.5 * (l1 * np.sin(l2 * omega) + l2 * np.sin(l1 * omega)),
            (n / p.m) * np.sin(n * omega),
        ], axis=-1)

    def helix(self) -> FrenetApparatus:
        """Helix whose successor this slant helix is (W0 = phi0 / n)"""
        p = self.params
        return helix_apparatus(self.helix_kappa, p.theta, omega0=p.phase.phi0 / p.n)

    def frenet(self) -> FrenetApparatus:
        """Full Frenet apparatus, oriented like the closed-form tangent"""
        successor = successor_transform(self.helix(), self.params.phase.phi0)
        app = rigid_motion(successor, SLANT_REFLECTION)
        return FrenetApparatus(app.frames, app.kappa, app.tau, app.generic, "slant-helix")


def slant_helix_apparatus(params: SlantHelixParams) -> SlantHelixApparatus:
    """
    Slant helix with principal normal at constant angle theta to e3

    kappa = (1/m) phi' cos(phi), tau = (1/m) phi' sin(phi); the companion
    helix has kappa_H = phi'/m and tau_H = phi'.
    """
    rate = params.phase.rate
    helix_kappa = rate.scaled(1.0 / params.m)
    logger.debug(f"Slant helix theta={params.theta:g}, m={params.m:g}, phase rate {rate.name}")
    return SlantHelixApparatus(
        params=params,
        kappa=modulate(helix_kappa, params.phase, "cos"),
        tau=modulate(helix_kappa, params.phase, "sin"),
        helix_kappa=helix_kappa,
        helix_tau=rate,
    )


@dataclass(frozen=True, eq=False)
class SalkowskiProfiles:
    kappa: ScalarProfile
    tau: ScalarProfile
    helix_kappa: ScalarProfile
    helix_tau: ScalarProfile
    phase: PhaseFunction
    m: float


def salkowski_profile(m: float) -> SalkowskiProfiles:
    """
    Constant-curvature slant helix with phi = arcsin(m s)

    Args:
        m: Non-zero slant parameter; the domain is (-1/|m|, 1/|m|)
    """
    if m == 0.0 or not math.isfinite(m):
        raise ValidationError(f"Salkowski parameter m must be finite and non-zero, got {m}")
    tau = SalkowskiProfile(m, "torsion")
    helix_kappa = SalkowskiProfile(m, "helix-curvature")
    helix_tau = helix_kappa.scaled(m)
    return SalkowskiProfiles(
        kappa=ConstantProfile(1.0, tau.domain),
        tau=tau,
        helix_kappa=helix_kappa,
        helix_tau=helix_tau,
        phase=PhaseFunction(0.0, helix_tau),
        m=m,
    )


@dataclass(frozen=True, eq=False)
class ConstantPrecessionProfiles:
    kappa: ScalarProfile
    tau: ScalarProfile
    cos_theta: float
    helix_kappa: ScalarProfile
    helix_tau: ScalarProfile
    phase: PhaseFunction
    m: float


def constant_precession_profile(omega: float, mu: float) -> ConstantPrecessionProfiles:
    """
    Natural equations kappa = omega cos(mu s), tau = omega sin(mu s)

    The curve is the successor of the circular helix (omega, mu) with phi = mu s;
    it closes iff cos(theta) = mu / sqrt(omega^2 + mu^2) is rational.
    """
    if omega == 0.0 or mu == 0.0:
        raise ValidationError(f"constant precession needs non-zero omega and mu, got {omega}, {mu}")
    helix_tau = ConstantProfile(mu)
    return ConstantPrecessionProfiles(
        kappa=HarmonicProfile(omega, mu, 0.0, "cos"),
        tau=HarmonicProfile(omega, mu, 0.0, "sin"),
        cos_theta=mu / math.hypot(omega, mu),
        helix_kappa=ConstantProfile(omega),
        helix_tau=helix_tau,
        phase=PhaseFunction(0.0, helix_tau),
        m=mu / omega,
    )


def _restricted_bound(margin: Callable[[np.ndarray], np.ndarray], start: float,
                      domain: Interval, direction: int,
                      step: float, limit: float) -> Tuple[float, bool]:
    """Walk from start until margin turns non-positive; return (bound, closed)"""
    end = domain.hi if direction > 0 else domain.lo
    end_closed = domain.hi_closed if direction > 0 else domain.lo_closed
    if not math.isfinite(end):
        end, end_closed = start + direction * limit, True
        truncated = True
    else:
        truncated = False

    count = max(1, int(math.ceil(abs(end - start) / step)))
    candidates = start + direction * step * np.arange(1, count + 1)
    candidates = candidates[direction * (end - candidates) > 0.0]
    if end_closed:
        candidates = np.append(candidates, end)
    values = margin(candidates) if candidates.size else np.empty(0)

    bad = np.nonzero(values <= 0.0)[0]
    if bad.size == 0:
        if truncated:
            logger.warning(f"Torsion domain truncated at s={end:g} (search limit)")
        return end, end_closed
    inner = start if bad[0] == 0 else candidates[bad[0] - 1]
    outer = candidates[bad[0]]
    if values[bad[0]] == 0.0:
        return float(outer), False
    return float(brentq(lambda x: float(margin(np.asarray(x))), inner, outer)), False


def torsion_from_curvature(kappa: ScalarProfile, m: float, constant: float = 0.0,
                           anchor: Optional[float] = None,
                           search_step: float = DOMAIN_SEARCH_STEP,
                           search_limit: float = DOMAIN_SEARCH_LIMIT) -> ScalarProfile:
    """
    Torsion making (kappa, tau) a slant-helix development

    tau = kappa m K / sqrt(1 - m^2 K^2), K = integral of kappa + constant,
    on the component around the anchor where m^2 K^2 < 1 - DOMAIN_MARGIN.

    Args:
        kappa: Curvature profile
        m: Non-zero slant parameter
        constant: Integration constant of K
        anchor: Point inside the returned domain (defaults to the kappa anchor)
        search_step: Probe spacing for the domain boundary search
        search_limit: Search distance on unbounded sides

    Returns:
        Torsion profile on the restricted domain
    """
    if m == 0.0 or not math.isfinite(m):
        raise ValidationError(f"slant parameter m must be finite and non-zero, got {m}")
    if isinstance(kappa, ConstantProfile) and kappa.value == 0.0:
        if (m * constant) ** 2 >= 1.0 - DOMAIN_MARGIN:
            raise DomainError(f"restricted torsion domain is empty for m={m:g}, constant={constant:g}")
        return ConstantProfile(0.0, kappa.domain)

    def margin(s):
        return 1.0 - DOMAIN_MARGIN - (m * (kappa._primitive(s) + constant)) ** 2

    start = kappa.domain.anchor() if anchor is None else float(anchor)
    kappa.domain.require(start, kappa.name)
    if margin(np.asarray(start)) <= 0.0:
        raise DomainError(f"restricted torsion domain is empty around s={start:g}")

    lo, lo_closed = _restricted_bound(margin, start, kappa.domain, -1, search_step, search_limit)
    hi, hi_closed = _restricted_bound(margin, start, kappa.domain, +1, search_step, search_limit)
    domain = Interval(lo, hi, lo_closed, hi_closed)
    logger.info(f"Torsion from {kappa.name} with m={m:g} restricted to {domain}")
    return SlantTorsionProfile(kappa, m, constant, domain)


def _grid(grid: ArrayLike, minimum: int) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < minimum:
        raise ValidationError(f"need a 1-D grid with at least {minimum} nodes")
    if np.any(np.diff(grid) <= 0.0):
        raise ValidationError("grid must be strictly increasing")
    return grid


def slant_slope_estimate(kappa: ScalarProfile, tau: ScalarProfile, grid: ArrayLike) -> np.ndarray:
    """
    kappa^2 / (kappa^2 + tau^2)^(3/2) * (tau / kappa)' on the grid

    Constant and equal to m for a slant helix; the derivative uses central
    differences (one-sided second order at the ends).
    """
    grid = _grid(grid, 3)
    k = kappa(grid)
    t = tau(grid)
    flat = np.abs(k) < DEGENERATE_CURVATURE
    if np.any(flat):
        raise DomainError(f"curvature vanishes at s={grid[flat][0]:.17g}")
    slope = np.gradient(t / k, grid, edge_order=2)
    return k ** 2 / (k ** 2 + t ** 2) ** 1.5 * slope


@dataclass(frozen=True)
class PhaseIdentityResult:
    applicable: bool
    sin_residual: float
    cos_residual: float
    circle_residual: float

    @property
    def residual(self) -> float:
        return max(self.sin_residual, self.cos_residual, self.circle_residual)


def phase_curvature_identity_check(kappa: ScalarProfile, tau: ScalarProfile, m: float,
                                   grid: ArrayLike, phase: PhaseFunction,
                                   reference_index: int = 0) -> PhaseIdentityResult:
    """
    Check sin(phi) = m * integral(kappa) and cos(phi) = -m * integral(tau)

    The integration constants are fixed so both identities hold at the
    reference node; the circle residual is max |(m K)^2 + (m T)^2 - 1|.
    Degenerate input (kappa and tau both zero on the grid) is not applicable.
    """
    grid = _grid(grid, 2)
    k, t = kappa(grid), tau(grid)
    if np.all(k == 0.0) and np.all(t == 0.0):
        return PhaseIdentityResult(False, math.nan, math.nan, math.nan)
    if m == 0.0:
        raise ValidationError("slant parameter m must be non-zero")

    phi = phase(grid)
    ref = grid[reference_index]
    phi_ref = phi[reference_index]
    total_kappa = kappa.antiderivative(grid) - kappa.antiderivative(ref) + math.sin(phi_ref) / m
    total_tau = tau.antiderivative(grid) - tau.antiderivative(ref) - math.cos(phi_ref) / m

    sin_res = float(np.max(np.abs(np.sin(phi) - m * total_kappa)))
    cos_res = float(np.max(np.abs(np.cos(phi) + m * total_tau)))
    circle_res = float(np.max(np.abs((m * total_kappa) ** 2 + (m * total_tau) ** 2 - 1.0)))
    return PhaseIdentityResult(True, sin_res, cos_res, circle_res)
