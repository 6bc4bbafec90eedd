"""
Profiles Module
Scalar functions of arc length (curvature, torsion, phase) with domains and primitives
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline

from config.default_config import QUADRATURE_STEP
from .errors import DomainError, ValidationError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]

MODES = ("cos", "sin")


@dataclass(frozen=True)
class Interval:
    """Real interval of arc-length values; infinite ends are always open"""

    lo: float = -math.inf
    hi: float = math.inf
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValidationError("interval bounds must not be NaN")
        if lo > hi:
            raise ValidationError(f"interval lower bound {lo} exceeds upper bound {hi}")
        object.__setattr__(self, 'lo', lo)
        object.__setattr__(self, 'hi', hi)
        if math.isinf(lo):
            object.__setattr__(self, 'lo_closed', False)
        if math.isinf(hi):
            object.__setattr__(self, 'hi_closed', False)
        if lo == hi and not (self.lo_closed and self.hi_closed):
            raise ValidationError(f"interval ({lo}, {hi}) is empty")

    @classmethod
    def real_line(cls) -> 'Interval':
        return cls()

    @classmethod
    def open(cls, lo: float, hi: float) -> 'Interval':
        return cls(lo, hi, False, False)

    @classmethod
    def closed(cls, lo: float, hi: float) -> 'Interval':
        return cls(lo, hi, True, True)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def contains(self, s: ArrayLike) -> np.ndarray:
        """
        Vectorized membership test

        Args:
            s: Scalar or array of arc-length values

        Returns:
            Boolean array of the same shape
        """
        s = np.asarray(s, dtype=float)
        lower = s >= self.lo if self.lo_closed else s > self.lo
        upper = s <= self.hi if self.hi_closed else s < self.hi
        return lower & upper & np.isfinite(s)

    def require(self, s: ArrayLike, what: str = "profile") -> None:
        """Raise DomainError unless every value of s lies in the interval"""
        inside = self.contains(s)
        if not np.all(inside):
            bad = np.asarray(s, dtype=float)[~inside].ravel()[0]
            raise DomainError(f"{what} evaluated at s={bad:.17g} outside {self}")

    def intersect(self, other: 'Interval') -> 'Interval':
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed

        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed

        if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
            raise DomainError(f"domains {self} and {other} do not overlap")
        return Interval(lo, hi, lo_closed, hi_closed)

    def anchor(self) -> float:
        """Reference point for numeric primitives (0 whenever it is inside)"""
        if self.contains(0.0):
            return 0.0
        if math.isfinite(self.lo) and self.lo_closed:
            return self.lo
        if math.isfinite(self.hi) and self.hi_closed:
            return self.hi
        if self.bounded:
            return 0.5 * (self.lo + self.hi)
        if math.isfinite(self.lo):
            return self.lo + 1.0
        return self.hi - 1.0

    def __str__(self) -> str:
        left = '[' if self.lo_closed else '('
        right = ']' if self.hi_closed else ')'
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


def numeric_primitive(func: Callable[[np.ndarray], np.ndarray], s: ArrayLike,
                      anchor: float, max_step: float = QUADRATURE_STEP) -> np.ndarray:
    """
    Composite Simpson primitive of func, zero at anchor

    Every gap between consecutive evaluation points is split into panels no
    wider than max_step; each panel uses its midpoint as the Simpson node.

    Args:
        func: Vectorized integrand (called without domain checks)
        s: Evaluation points
        anchor: Point where the primitive vanishes
        max_step: Maximum panel width

    Returns:
        Array shaped like s
    """
    s = np.asarray(s, dtype=float)
    flat = s.ravel()
    nodes = np.unique(np.append(flat, anchor))
    if nodes.size == 1:
        return np.zeros_like(s)

    gaps = np.diff(nodes)
    pieces = np.maximum(1, np.ceil(gaps / max_step).astype(int))
    widths = np.repeat(gaps / pieces, pieces)
    starts = np.cumsum(pieces) - pieces
    offsets = np.arange(pieces.sum()) - np.repeat(starts, pieces)
    left = np.repeat(nodes[:-1], pieces) + offsets * widths
    right = left + widths

    panels = widths / 6.0 * (func(left) + 4.0 * func(left + 0.5 * widths) + func(right))
    cumulative = np.concatenate(([0.0], np.cumsum(panels)))
    at_nodes = cumulative[np.concatenate(([0], np.cumsum(pieces)))]
    at_nodes = at_nodes - at_nodes[np.searchsorted(nodes, anchor)]
    return at_nodes[np.searchsorted(nodes, flat)].reshape(s.shape)


class ScalarProfile(ABC):
    """Scalar function of arc length with a domain and an antiderivative"""

    domain: Interval

    @property
    def name(self) -> str:
        return type(self).__name__

    def __call__(self, s: ArrayLike):
        arr = np.asarray(s, dtype=float)
        self.domain.require(arr, self.name)
        values = np.broadcast_to(self._evaluate(arr), arr.shape).astype(float)
        return float(values) if arr.ndim == 0 else values

    def antiderivative(self, s: ArrayLike):
        """
        Evaluate a fixed primitive of the profile

        Analytic kinds use their natural closed form (the constant term of
        c*s, (a/w)*sin(ws+p), ... is zero); sampled kinds vanish at the
        first node; numeric kinds vanish at the domain anchor.
        """
        arr = np.asarray(s, dtype=float)
        self.domain.require(arr, self.name)
        values = np.broadcast_to(self._primitive(arr), arr.shape).astype(float)
        return float(values) if arr.ndim == 0 else values

    @abstractmethod
    def _evaluate(self, s: np.ndarray) -> np.ndarray:
        """Values on s without domain checks"""

    @abstractmethod
    def _primitive(self, s: np.ndarray) -> np.ndarray:
        """Primitive on s without domain checks"""

    def scaled(self, factor: float) -> 'ScalarProfile':
        return ScaledProfile(self, float(factor))

    def __add__(self, other: 'ScalarProfile') -> 'ScalarProfile':
        if not isinstance(other, ScalarProfile):
            return NotImplemented
        terms = []
        for term in (self, other):
            terms.extend(term.terms if isinstance(term, SumProfile) else (term,))
        return SumProfile(tuple(terms))


@dataclass(frozen=True)
class ConstantProfile(ScalarProfile):
    value: float
    domain: Interval = field(default_factory=Interval)

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValidationError(f"constant profile value must be finite, got {self.value}")
        object.__setattr__(self, 'value', float(self.value))

    @property
    def name(self) -> str:
        return f"constant({self.value:g})"

    def _evaluate(self, s):
        return np.full(s.shape, self.value)

    def _primitive(self, s):
        return self.value * s

    def scaled(self, factor: float) -> 'ConstantProfile':
        return ConstantProfile(self.value * factor, self.domain)


@dataclass(frozen=True)
class HarmonicProfile(ScalarProfile):
    """a*cos(w*s + p) or a*sin(w*s + p)"""

    amplitude: float
    frequency: float
    phase: float = 0.0
    mode: str = "cos"
    domain: Interval = field(default_factory=Interval)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"harmonic mode must be one of {MODES}, got {self.mode!r}")
        if self.frequency == 0.0:
            raise ValidationError("harmonic frequency must be non-zero")

    @property
    def name(self) -> str:
        return f"harmonic({self.amplitude:g}*{self.mode}({self.frequency:g}s+{self.phase:g}))"

    def _argument(self, s):
        return self.frequency * s + self.phase

    def _evaluate(self, s):
        wave = np.cos if self.mode == "cos" else np.sin
        return self.amplitude * wave(self._argument(s))

    def _primitive(self, s):
        ratio = self.amplitude / self.frequency
        if self.mode == "cos":
            return ratio * np.sin(self._argument(s))
        return -ratio * np.cos(self._argument(s))

    def scaled(self, factor: float) -> 'HarmonicProfile':
        return HarmonicProfile(self.amplitude * factor, self.frequency,
                               self.phase, self.mode, self.domain)


@dataclass(frozen=True)
class SalkowskiProfile(ScalarProfile):
    """
    Profiles of the constant-curvature slant helix on (-1/|m|, 1/|m|)

    variant "torsion":          m*s / sqrt(1 - m^2 s^2)
    variant "helix-curvature":  1 / sqrt(1 - m^2 s^2)
    """

    m: float
    variant: str = "torsion"
    domain: Interval = field(init=False)

    def __post_init__(self):
        if self.m == 0.0 or not math.isfinite(self.m):
            raise ValidationError("Salkowski parameter m must be finite and non-zero")
        if self.variant not in ("torsion", "helix-curvature"):
            raise ValidationError(f"unknown Salkowski variant {self.variant!r}")
        bound = 1.0 / abs(self.m)
        object.__setattr__(self, 'domain', Interval.open(-bound, bound))

    @property
    def name(self) -> str:
        return f"salkowski-{self.variant}(m={self.m:g})"

    def _root(self, s):
        return np.sqrt(1.0 - (self.m * s) ** 2)

    def _evaluate(self, s):
        if self.variant == "torsion":
            return self.m * s / self._root(s)
        return 1.0 / self._root(s)

    def _primitive(self, s):
        if self.variant == "torsion":
            return -self._root(s) / self.m
        return np.arcsin(self.m * s) / self.m


class SampledProfile(ScalarProfile):
    """
    Profile given by node values; cubic spline between nodes

    Node values are returned exactly. The primitive is the exact primitive of
    the cubic interpolant, which is what composite Simpson at half the grid
    step yields on it.
    """

    def __init__(self, grid: ArrayLike, values: ArrayLike, label: str = "sampled"):
        grid = np.array(grid, dtype=float)
        values = np.array(values, dtype=float)
        if grid.ndim != 1 or values.shape != grid.shape:
            raise ValidationError("sampled profile needs 1-D grid and values of equal length")
        if grid.size < 2:
            raise ValidationError("sampled profile needs at least 2 nodes")
        if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(values))):
            raise ValidationError("sampled profile nodes and values must be finite")
        if np.any(np.diff(grid) <= 0.0):
            raise ValidationError("sampled profile grid must be strictly increasing")

        grid.setflags(write=False)
        values.setflags(write=False)
        self.grid = grid
        self.values = values
        self.label = label
        self.domain = Interval.closed(grid[0], grid[-1])
        self._spline = CubicSpline(grid, values)
        self._spline_primitive = self._spline.antiderivative()

    @property
    def name(self) -> str:
        return f"{self.label}[{self.grid.size} nodes]"

    def _evaluate(self, s):
        flat = np.atleast_1d(s).ravel()
        out = self._spline(flat)
        idx = np.clip(np.searchsorted(self.grid, flat), 0, self.grid.size - 1)
        on_node = self.grid[idx] == flat
        out[on_node] = self.values[idx[on_node]]
        return out.reshape(np.shape(s))

    def _primitive(self, s):
        return self._spline_primitive(s)


@dataclass(frozen=True, eq=False)
class ScaledProfile(ScalarProfile):
    base: ScalarProfile
    factor: float

    @property
    def domain(self) -> Interval:
        return self.base.domain

    @property
    def name(self) -> str:
        return f"{self.factor:g}*{self.base.name}"

    def _evaluate(self, s):
        return self.factor * self.base._evaluate(s)

    def _primitive(self, s):
        return self.factor * self.base._primitive(s)


@dataclass(frozen=True, eq=False)
class SumProfile(ScalarProfile):
    terms: Tuple[ScalarProfile, ...]

    def __post_init__(self):
        if not self.terms:
            raise ValidationError("sum profile needs at least one term")

    @property
    def domain(self) -> Interval:
        domain = self.terms[0].domain
        for term in self.terms[1:]:
            domain = domain.intersect(term.domain)
        return domain

    @property
    def name(self) -> str:
        return " + ".join(term.name for term in self.terms)

    def _evaluate(self, s):
        return sum(term._evaluate(s) for term in self.terms)

    def _primitive(self, s):
        return sum(term._primitive(s) for term in self.terms)


@dataclass(frozen=True, eq=False)
class PhaseFunction:
    """phi(s) = phi0 + accumulated(s), accumulated being the primitive of rate"""

    phi0: float
    rate: ScalarProfile

    @property
    def domain(self) -> Interval:
        return self.rate.domain

    def __call__(self, s: ArrayLike):
        return self.phi0 + self.rate.antiderivative(s)

    def accumulated(self, s: ArrayLike):
        return self.rate.antiderivative(s)

    def derivative(self, s: ArrayLike):
        return self.rate(s)

    def shifted(self, delta: float) -> 'PhaseFunction':
        return PhaseFunction(self.phi0 + delta, self.rate)

    def _evaluate(self, s: np.ndarray) -> np.ndarray:
        return self.phi0 + self.rate._primitive(s)


@dataclass(frozen=True, eq=False)
class ModulatedProfile(ScalarProfile):
    """
    amplitude(s) * cos(phi(s)) or amplitude(s) * sin(phi(s))

    When amplitude == ratio * phi' the primitive is ratio*sin(phi) (cos mode)
    or -ratio*cos(phi) (sin mode); otherwise it is computed numerically.
    """

    amplitude: ScalarProfile
    phase: PhaseFunction
    mode: str = "cos"
    ratio: Optional[float] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"modulation mode must be one of {MODES}, got {self.mode!r}")

    @property
    def domain(self) -> Interval:
        return self.amplitude.domain.intersect(self.phase.domain)

    @property
    def name(self) -> str:
        return f"{self.amplitude.name}*{self.mode}(phi)"

    def _evaluate(self, s):
        wave = np.cos if self.mode == "cos" else np.sin
        return self.amplitude._evaluate(s) * wave(self.phase._evaluate(s))

    def _primitive(self, s):
        if self.ratio is not None:
            phi = self.phase._evaluate(s)
            if self.mode == "cos":
                return self.ratio * np.sin(phi)
            return -self.ratio * np.cos(phi)
        return numeric_primitive(self._evaluate, s, self.domain.anchor())


@dataclass(frozen=True, eq=False)
class SlantTorsionProfile(ScalarProfile):
    """
    Torsion that turns a curvature into a slant-helix development

    tau = kappa * m*K / sqrt(1 - m^2 K^2) with K = primitive(kappa) + constant,
    defined on a domain where m^2 K^2 stays below 1.
    """

    kappa: ScalarProfile
    m: float
    constant: float
    domain: Interval

    @property
    def name(self) -> str:
        return f"slant-torsion(m={self.m:g}, {self.kappa.name})"

    def total_curvature(self, s: np.ndarray) -> np.ndarray:
        return self.kappa._primitive(s) + self.constant

    def _evaluate(self, s):
        scaled = self.m * self.total_curvature(s)
        return self.kappa._evaluate(s) * scaled / np.sqrt(1.0 - scaled ** 2)

    def _primitive(self, s):
        scaled = self.m * self.total_curvature(s)
        return -np.sqrt(1.0 - scaled ** 2) / self.m


def _proportionality(amplitude: ScalarProfile, rate: ScalarProfile) -> Optional[float]:
    """Return r with amplitude == r * rate when that follows from construction"""
    if amplitude is rate:
        return 1.0
    if isinstance(rate, ScaledProfile) and rate.base is amplitude and rate.factor != 0.0:
        return 1.0 / rate.factor
    if isinstance(amplitude, ScaledProfile) and amplitude.base is rate:
        return amplitude.factor
    if (isinstance(amplitude, ScaledProfile) and isinstance(rate, ScaledProfile)
            and amplitude.base is rate.base and rate.factor != 0.0):
        return amplitude.factor / rate.factor
    return None


def modulate(amplitude: ScalarProfile, phase: PhaseFunction, mode: str = "cos") -> ScalarProfile:
    """
    Build amplitude*cos(phi) or amplitude*sin(phi) in the cheapest exact form

    Args:
        amplitude: Profile multiplying the wave
        phase: Phase function phi
        mode: "cos" or "sin"

    Returns:
        A constant, harmonic, scaled or modulated profile
    """
    if mode not in MODES:
        raise ValidationError(f"modulation mode must be one of {MODES}, got {mode!r}")

    rate = phase.rate
    domain = amplitude.domain.intersect(rate.domain)
    if isinstance(rate, ConstantProfile):
        if rate.value == 0.0 and domain == amplitude.domain:
            wave = math.cos if mode == "cos" else math.sin
            return amplitude.scaled(wave(phase.phi0))
        if isinstance(amplitude, ConstantProfile):
            if rate.value == 0.0:
                wave = math.cos if mode == "cos" else math.sin
                return ConstantProfile(amplitude.value * wave(phase.phi0), domain)
            return HarmonicProfile(amplitude.value, rate.value, phase.phi0, mode, domain)

    ratio = _proportionality(amplitude, rate)
    if ratio is None:
        logger.debug(f"Numeric primitive for {amplitude.name}*{mode}(phi)")
    return ModulatedProfile(amplitude, phase, mode, ratio)
