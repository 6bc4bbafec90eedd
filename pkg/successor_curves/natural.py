"""
Natural Equations Module
Integrates the Frenet equations for given curvature and torsion, recovers
positions, estimates curvature and torsion back and checks periodicity
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

import numpy as np
from scipy.integrate import cumulative_simpson

from config.default_config import (
    DEFAULT_METHOD, DEFAULT_RENORM_EVERY, DEFAULT_STEP, DEGENERATE_CURVATURE,
    ORTHO_TOL, RATIONAL_MAX_DENOMINATOR, RATIONAL_TOL,
)
from .errors import DomainError, FrameError, IntegrationError, ValidationError
from .geomcore import (
    Frame, FrenetApparatus, SampledFrameField, as_vec3, frame_defect, orthonormalize,
)
from .profiles import ArrayLike, Interval, SampledProfile, ScalarProfile

logger = logging.getLogger(__name__)

RangeLike = Union[Tuple[float, float], Interval]


@dataclass(frozen=True)
class IntegrationConfig:
    """Fixed-step integrator settings"""

    step: float = DEFAULT_STEP
    renorm_every: int = DEFAULT_RENORM_EVERY
    method: str = DEFAULT_METHOD

    def __post_init__(self):
        if not (math.isfinite(self.step) and self.step > 0.0):
            raise IntegrationError(f"integration step must be positive, got {self.step}")
        if int(self.renorm_every) != self.renorm_every or self.renorm_every < 1:
            raise IntegrationError(f"renorm_every must be a positive integer, got {self.renorm_every}")
        if self.method != DEFAULT_METHOD:
            raise IntegrationError(f"unsupported integration method {self.method!r}")


@dataclass(frozen=True, eq=False)
class CurveSamples:
    """Arc-length grid with positions and optional frames, curvature and torsion"""

    s_grid: np.ndarray
    points: np.ndarray
    frames: Optional[np.ndarray] = None
    kappa: Optional[np.ndarray] = None
    tau: Optional[np.ndarray] = None

    def __post_init__(self):
        grid = np.asarray(self.s_grid, dtype=float)
        points = np.asarray(self.points, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise ValidationError("curve samples need a 1-D grid with at least 2 nodes")
        if np.any(np.diff(grid) <= 0.0):
            raise ValidationError("curve sample grid must be strictly increasing")
        if points.shape != (grid.size, 3):
            raise ValidationError(f"expected points of shape {(grid.size, 3)}, got {points.shape}")
        object.__setattr__(self, 's_grid', grid)
        object.__setattr__(self, 'points', points)
        if self.frames is not None:
            frames = np.asarray(self.frames, dtype=float)
            if frames.shape != (grid.size, 3, 3):
                raise ValidationError(f"expected frames of shape {(grid.size, 3, 3)}")
            object.__setattr__(self, 'frames', frames)
        for name in ('kappa', 'tau'):
            values = getattr(self, name)
            if values is not None:
                values = np.asarray(values, dtype=float)
                if values.shape != grid.shape:
                    raise ValidationError(f"{name} samples must match the grid length")
                object.__setattr__(self, name, values)

    def __len__(self) -> int:
        return self.s_grid.size

    def unit_speed_defect(self) -> float:
        """Largest |chord length - grid spacing| between consecutive nodes"""
        chords = np.linalg.norm(np.diff(self.points, axis=0), axis=1)
        return float(np.max(np.abs(chords - np.diff(self.s_grid))))

    def closure_residual(self) -> float:
        """Distance between the first and the last point"""
        return float(np.linalg.norm(self.points[-1] - self.points[0]))


@dataclass(frozen=True)
class PeriodicityResult:
    periodic: bool
    residual: float
    period: float
    nodes_compared: int


@dataclass(frozen=True)
class RationalVerdict:
    """Outcome of the rationality test; never an exact verdict for floats"""

    fraction: Fraction
    exact: bool
    approximately_rational: bool
    error: float


def _bounds(s_range: RangeLike) -> Tuple[float, float]:
    if isinstance(s_range, Interval):
        return s_range.lo, s_range.hi
    lo, hi = s_range
    return float(lo), float(hi)


def uniform_grid(s_range: RangeLike, step: float) -> np.ndarray:
    """
    Uniform arc-length grid covering s_range

    Args:
        s_range: (start, end) or closed Interval
        step: Target spacing; shrunk slightly when it does not divide the range

    Returns:
        Node array including both ends
    """
    lo, hi = _bounds(s_range)
    length = hi - lo
    if not (math.isfinite(length) and length > 0.0):
        raise IntegrationError(f"arc-length range [{lo}, {hi}] is empty or unbounded")
    if step > length:
        raise IntegrationError(f"step {step} exceeds the range length {length}")
    count = length / step
    intervals = int(round(count))
    if abs(count - intervals) > 1e-9 * max(1.0, count):
        intervals = int(math.ceil(count))
        logger.debug(f"Step {step} does not divide [{lo}, {hi}], using {length / intervals}")
    return np.linspace(lo, hi, intervals + 1)


def _frenet_rhs(kappa: float, tau: float, frame: np.ndarray) -> np.ndarray:
    """T' = kN, N' = -kT + tB, B' = -tN on the row stack (T, N, B)"""
    t, n, b = frame
    return np.array([kappa * n, -kappa * t + tau * b, -tau * n])


def integrate_frenet(kappa: ScalarProfile, tau: ScalarProfile, initial: Frame,
                     s_range: RangeLike,
                     cfg: Optional[IntegrationConfig] = None) -> FrenetApparatus:
    """
    Solve the natural equations with the classical 4th-order one-step method

    Args:
        kappa: Curvature profile defined on s_range
        tau: Torsion profile defined on s_range
        initial: Frame at the start of s_range
        s_range: (start, end) arc-length interval
        cfg: Integration settings (default step 1e-3, renorm every step)

    Returns:
        FrenetApparatus with a sampled frame field on the uniform grid
    """
    cfg = cfg or IntegrationConfig()
    grid = uniform_grid(s_range, cfg.step)
    mids = 0.5 * (grid[:-1] + grid[1:])

    k_nodes, t_nodes = kappa(grid), tau(grid)
    k_mids, t_mids = kappa(mids), tau(mids)
    for values, name in ((k_nodes, kappa.name), (t_nodes, tau.name),
                         (k_mids, kappa.name), (t_mids, tau.name)):
        if not np.all(np.isfinite(values)):
            raise DomainError(f"profile {name} is not finite on [{grid[0]:g}, {grid[-1]:g}]")

    logger.info(f"Integrating Frenet equations on [{grid[0]:g}, {grid[-1]:g}] "
                f"with {grid.size} nodes, renorm every {cfg.renorm_every}")

    frames = np.empty((grid.size, 3, 3))
    current = initial.matrix
    frames[0] = current
    for i in range(grid.size - 1):
        h = grid[i + 1] - grid[i]
        k1 = _frenet_rhs(k_nodes[i], t_nodes[i], current)
        k2 = _frenet_rhs(k_mids[i], t_mids[i], current + 0.5 * h * k1)
        k3 = _frenet_rhs(k_mids[i], t_mids[i], current + 0.5 * h * k2)
        k4 = _frenet_rhs(k_nodes[i + 1], t_nodes[i + 1], current + h * k3)
        current = current + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if (i + 1) % cfg.renorm_every == 0:
            current = orthonormalize(current)
        frames[i + 1] = current

    defect = frame_defect(frames)
    if defect > ORTHO_TOL:
        raise FrameError(f"frame drift {defect:.3e} exceeds {ORTHO_TOL:.0e}; "
                         f"lower renorm_every or the step")
    logger.debug(f"Integration finished, max frame defect {defect:.3e}")
    return FrenetApparatus(SampledFrameField(grid, frames), kappa, tau,
                           generic=True, label="integrated")


def sample_apparatus(app: FrenetApparatus, grid: ArrayLike) -> FrenetApparatus:
    """Freeze an apparatus on a grid as a sampled frame field"""
    grid = np.asarray(grid, dtype=float)
    return FrenetApparatus(SampledFrameField(grid, app.frame_matrices(grid)),
                           app.kappa, app.tau, app.generic, app.label)


def integrate_position(apparatus: FrenetApparatus, x0: ArrayLike = (0.0, 0.0, 0.0)) -> CurveSamples:
    """
    Recover positions x(s) = x0 + integral of T by cumulative Simpson quadrature

    Args:
        apparatus: Apparatus with a sampled frame field
        x0: Position at the first grid node

    Returns:
        CurveSamples with positions, frames, curvature and torsion on the grid
    """
    if not apparatus.sampled:
        raise IntegrationError("integrate_position needs a sampled frame field; "
                               "use sample_apparatus first")
    grid = apparatus.grid
    if grid.size < 3:
        raise IntegrationError(f"position quadrature needs at least 3 nodes, got {grid.size}")

    frames = apparatus.frames.values
    points = as_vec3(x0) + cumulative_simpson(frames[:, 0, :], x=grid, axis=0, initial=0.0)
    return CurveSamples(grid, points, frames, apparatus.kappa(grid), apparatus.tau(grid))


def total_torsion(tau: ScalarProfile, interval: RangeLike) -> float:
    """Integral of tau over the interval (radians)"""
    lo, hi = _bounds(interval)
    ends = tau.antiderivative(np.array([lo, hi]))
    return float(ends[1] - ends[0])


def frame_periodicity_check(apparatus: FrenetApparatus, period_hint: float, tol: float,
                            grid: Optional[ArrayLike] = None) -> PeriodicityResult:
    """
    Compare frames at s and s + period over the overlap of the sampled range

    Args:
        apparatus: Apparatus (its own grid is used when it is sampled)
        period_hint: Candidate period
        tol: Largest accepted component difference
        grid: Evaluation grid for closed-form apparatuses

    Returns:
        PeriodicityResult with the max component residual
    """
    if grid is None:
        if not apparatus.sampled:
            raise ValidationError("closed-form apparatus needs an explicit grid")
        grid = apparatus.grid
    grid = np.asarray(grid, dtype=float)
    span = grid[-1] - grid[0]
    slack = 1e-12 * max(1.0, abs(grid[0]), abs(grid[-1]))
    if not (0.0 < period_hint <= span + slack):
        raise DomainError(f"period {period_hint:g} does not fit the sampled range of length {span:g}")

    base = grid[grid + period_hint <= grid[-1] + slack]
    if base.size == 0:
        raise DomainError(f"no node of the sampled range has a partner at distance {period_hint:g}")
    shifted = np.minimum(base + period_hint, grid[-1])
    residual = float(np.max(np.abs(apparatus.frame_matrices(shifted)
                                   - apparatus.frame_matrices(base))))
    logger.debug(f"Periodicity residual {residual:.3e} for period {period_hint:g}")
    return PeriodicityResult(residual <= tol, residual, float(period_hint), int(base.size))


def estimate_curvature_torsion(samples: CurveSamples) -> Tuple[SampledProfile, SampledProfile]:
    """
    Central-difference estimates of curvature and torsion

    Uses the frames when present (kappa = <T', N>, tau = <N', B>), otherwise
    the position derivatives. Torsion is reported as 0 wherever the curvature
    estimate is below DEGENERATE_CURVATURE.
    """
    grid = samples.s_grid
    if grid.size < 5:
        raise IntegrationError(f"curvature estimation needs at least 5 nodes, got {grid.size}")
    spacing = np.diff(grid)
    if not np.allclose(spacing, spacing[0], rtol=1e-6, atol=0.0):
        raise IntegrationError("curvature estimation needs a uniform grid")

    if samples.frames is not None:
        t, n, b = samples.frames[:, 0], samples.frames[:, 1], samples.frames[:, 2]
        dt = np.gradient(t, grid, axis=0, edge_order=2)
        dn = np.gradient(n, grid, axis=0, edge_order=2)
        kappa = np.sum(dt * n, axis=1)
        tau = np.sum(dn * b, axis=1)
    else:
        d1 = np.gradient(samples.points, grid, axis=0, edge_order=2)
        d2 = np.gradient(d1, grid, axis=0, edge_order=2)
        d3 = np.gradient(d2, grid, axis=0, edge_order=2)
        cross = np.cross(d1, d2)
        cross_sq = np.sum(cross * cross, axis=1)
        kappa = np.sqrt(cross_sq) / np.linalg.norm(d1, axis=1) ** 3
        tau = np.divide(np.sum(cross * d3, axis=1), cross_sq,
                        out=np.zeros_like(cross_sq), where=cross_sq > 0.0)

    tau = np.where(np.abs(kappa) < DEGENERATE_CURVATURE, 0.0, tau)
    return (SampledProfile(grid, kappa, label="estimated-kappa"),
            SampledProfile(grid, tau, label="estimated-tau"))


def approximate_rational(x: Union[float, Fraction],
                         max_denominator: int = RATIONAL_MAX_DENOMINATOR,
                         tol: float = RATIONAL_TOL) -> RationalVerdict:
    """
    Rationality test for the periodicity criterion

    Exact Fraction/int inputs are rational by construction; floats go through
    continued-fraction reconstruction and are at best approximately rational.
    """
    if isinstance(x, (Fraction, int)):
        return RationalVerdict(Fraction(x), True, True, 0.0)
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError(f"cannot test {x} for rationality")
    fraction = Fraction(x).limit_denominator(max_denominator)
    error = abs(float(fraction) - x)
    return RationalVerdict(fraction, False, error <= tol, error)


def successor_frame_period(omega: float, mu: float,
                           max_denominator: int = RATIONAL_MAX_DENOMINATOR,
                           tol: float = RATIONAL_TOL) -> Optional[float]:
    """
    Period of the successor frame of the circular helix (kappa=omega, tau=mu)

    With cos(theta) = mu / sqrt(omega^2 + mu^2) = p/q the helix frame period
    L = 2 pi cos(theta) / mu repeats q times: q L = 2 pi p / mu.

    Returns:
        The period, or None when cos(theta) is not approximately rational
    """
    if omega == 0.0 or mu == 0.0:
        raise ValidationError("omega and mu must be non-zero")
    verdict = approximate_rational(mu / math.hypot(omega, mu), max_denominator, tol)
    if not verdict.approximately_rational:
        return None
    return 2.0 * math.pi * abs(verdict.fraction.numerator) / abs(mu)


def successor_periodicity(apparatus: FrenetApparatus, period: float,
                          s0: Optional[float] = None,
                          max_denominator: int = RATIONAL_MAX_DENOMINATOR,
                          tol: float = RATIONAL_TOL) -> RationalVerdict:
    """
    Periodicity test for the successor of a periodic Frenet frame

    The successor frames are periodic iff the total torsion over one period
    of the source frame is a rational multiple of pi.

    Args:
        apparatus: Source apparatus whose frame has the given period
        period: Frame period of the source
        s0: Start of the period window (domain start, or 0 on an unbounded domain)

    Returns:
        RationalVerdict for total_torsion / pi
    """
    if not (math.isfinite(period) and period > 0.0):
        raise ValidationError(f"period must be positive, got {period}")
    if s0 is None:
        lo = apparatus.tau.domain.lo
        s0 = lo if math.isfinite(lo) else 0.0
    ratio = total_torsion(apparatus.tau, (s0, s0 + period)) / math.pi
    verdict = approximate_rational(ratio, max_denominator, tol)
    logger.debug(f"Total torsion over one period is {ratio:.12g} pi, "
                 f"approximately rational: {verdict.approximately_rational}")
    return verdict


def convergence_ratio(coarse_error: float, fine_error: float) -> float:
    """Error reduction factor when halving the step (16 for a 4th-order method)"""
    if fine_error == 0.0:
        return math.inf
    return coarse_error / fine_error
