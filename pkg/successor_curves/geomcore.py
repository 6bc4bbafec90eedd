"""
Geometry Core Module
Frame algebra: vectors, frames, frame fields, Frenet/Bishop apparatuses and their transforms
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from config.default_config import DEGENERATE_CURVATURE, ORTHO_TOL
from .errors import DomainError, FrameError
from .profiles import ArrayLike, Interval, PhaseFunction, ScalarProfile, modulate

logger = logging.getLogger(__name__)

Vec3 = np.ndarray

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


def as_vec3(v: ArrayLike) -> Vec3:
    """
    Validate and freeze a 3-vector

    Args:
        v: Three finite components

    Returns:
        Read-only float array of shape (3,)
    """
    arr = np.array(v, dtype=float)
    if arr.shape != (3,):
        raise FrameError(f"expected a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise FrameError(f"vector components must be finite, got {arr}")
    arr.setflags(write=False)
    return arr


def frame_defect(frame) -> float:
    """
    Largest deviation from a positively oriented orthonormal frame

    Args:
        frame: Frame, a (3, 3) row matrix or a stack of them (N, 3, 3)

    Returns:
        max over |norm - 1|, |<vi, vj>| (i != j) and |det - 1|; 0 for a perfect frame
    """
    m = frame.matrix if isinstance(frame, Frame) else np.asarray(frame, dtype=float)
    m = m.reshape(-1, 3, 3)
    norms = np.abs(np.linalg.norm(m, axis=2) - 1.0)
    gram = m @ np.swapaxes(m, 1, 2)
    rows, cols = np.triu_indices(3, k=1)
    inner = np.abs(gram[:, rows, cols])
    det = np.abs(np.linalg.det(m) - 1.0)
    return float(max(norms.max(), inner.max(), det.max()))


def orthonormalize(matrices: np.ndarray) -> np.ndarray:
    """
    Modified Gram-Schmidt anchored at the tangent row

    Normalizes T, removes the T component from the first normal and
    rebuilds the second normal as T x N1.
    """
    m = np.asarray(matrices, dtype=float)
    t = m[..., 0, :] / np.linalg.norm(m[..., 0, :], axis=-1, keepdims=True)
    n = m[..., 1, :] - np.sum(m[..., 1, :] * t, axis=-1, keepdims=True) * t
    n = n / np.linalg.norm(n, axis=-1, keepdims=True)
    b = np.cross(t, n)
    return np.stack([t, n, b], axis=-2)


@dataclass(frozen=True, eq=False)
class Frame:
    """Positively oriented orthonormal triple (t, n1, n2) at one arc length"""

    t: Vec3
    n1: Vec3
    n2: Vec3

    def __post_init__(self):
        for name in ('t', 'n1', 'n2'):
            object.__setattr__(self, name, as_vec3(getattr(self, name)))
        defect = frame_defect(self.matrix)
        if defect > ORTHO_TOL:
            raise FrameError(f"frame defect {defect:.3e} exceeds tolerance {ORTHO_TOL:.0e}")

    @classmethod
    def from_matrix(cls, matrix: ArrayLike) -> 'Frame':
        m = np.asarray(matrix, dtype=float)
        if m.shape != (3, 3):
            raise FrameError(f"frame matrix must be 3x3, got {m.shape}")
        return cls(m[0], m[1], m[2])

    @classmethod
    def canonical(cls) -> 'Frame':
        return cls(E1, E2, E3)

    @property
    def matrix(self) -> np.ndarray:
        """Rows t, n1, n2"""
        return np.vstack([self.t, self.n1, self.n2])

    def allclose(self, other: 'Frame', atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol))


def normal_rotation_matrix(phi: ArrayLike) -> np.ndarray:
    """Rotation in the normal plane that keeps the tangent; shape phi.shape + (3, 3)"""
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    zero, one = np.zeros_like(phi), np.ones_like(phi)
    return np.stack([
        np.stack([one, zero, zero], axis=-1),
        np.stack([zero, c, -s], axis=-1),
        np.stack([zero, s, c], axis=-1),
    ], axis=-2)


def successor_matrix(phi: ArrayLike) -> np.ndarray:
    """Maps (T, N, B) to (T*, N*, B*); shape phi.shape + (3, 3)"""
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    zero, one = np.zeros_like(phi), np.ones_like(phi)
    return np.stack([
        np.stack([zero, -c, s], axis=-1),
        np.stack([one, zero, zero], axis=-1),
        np.stack([zero, s, c], axis=-1),
    ], axis=-2)


class FrameField(ABC):
    """Map from arc length to frames, evaluated in batches as (N, 3, 3) row matrices"""

    domain: Interval

    def matrices(self, s: ArrayLike) -> np.ndarray:
        arr = np.atleast_1d(np.asarray(s, dtype=float)).ravel()
        self.domain.require(arr, "frame field")
        return self._matrices(arr)

    def frame_at(self, s: float) -> Frame:
        return Frame.from_matrix(self.matrices([s])[0])

    @abstractmethod
    def _matrices(self, s: np.ndarray) -> np.ndarray:
        """Frames on a 1-D array inside the domain"""


class ClosedFormFrameField(FrameField):
    def __init__(self, rule: Callable[[np.ndarray], np.ndarray], domain: Interval,
                 label: str = "closed-form"):
        self.rule = rule
        self.domain = domain
        self.label = label

    def _matrices(self, s):
        return self.rule(s)


class SampledFrameField(FrameField):
    """
    Frames stored on a grid

    Off-node values blend the two neighbouring frames linearly and
    re-orthonormalize (second-order accurate in the grid step).
    """

    def __init__(self, grid: ArrayLike, matrices: ArrayLike):
        grid = np.array(grid, dtype=float)
        matrices = np.array(matrices, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise FrameError("sampled frame field needs a 1-D grid with at least 2 nodes")
        if matrices.shape != (grid.size, 3, 3):
            raise FrameError(f"expected frames of shape {(grid.size, 3, 3)}, got {matrices.shape}")
        if np.any(np.diff(grid) <= 0.0):
            raise FrameError("sampled frame grid must be strictly increasing")
        defect = frame_defect(matrices)
        if defect > ORTHO_TOL:
            raise FrameError(f"sampled frames have defect {defect:.3e} > {ORTHO_TOL:.0e}")

        grid.setflags(write=False)
        matrices.setflags(write=False)
        self.grid = grid
        self.values = matrices
        self.domain = Interval.closed(grid[0], grid[-1])

    def _matrices(self, s):
        idx = np.clip(np.searchsorted(self.grid, s), 1, self.grid.size - 1)
        on_node = self.grid[idx] == s
        on_prev = self.grid[idx - 1] == s
        out = np.empty((s.size, 3, 3))
        out[on_node] = self.values[idx[on_node]]
        out[on_prev] = self.values[idx[on_prev] - 1]

        between = ~(on_node | on_prev)
        if np.any(between):
            i = idx[between]
            lo, hi = self.grid[i - 1], self.grid[i]
            w = ((s[between] - lo) / (hi - lo))[:, None, None]
            out[between] = orthonormalize((1.0 - w) * self.values[i - 1] + w * self.values[i])
        return out


class TransformedFrameField(FrameField):
    """
    left(s) @ base(s) @ right.T

    left mixes the frame vectors (coefficient matrices of equivalent frames),
    right is a constant rigid motion applied to every vector.
    """

    def __init__(self, base: FrameField,
                 left: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                 right: Optional[np.ndarray] = None,
                 domain: Optional[Interval] = None):
        self.base = base
        self.left = left
        self.right = None if right is None else np.asarray(right, dtype=float)
        self.domain = base.domain if domain is None else base.domain.intersect(domain)

    def _matrices(self, s):
        m = self.base._matrices(s)
        if self.left is not None:
            m = self.left(s) @ m
        if self.right is not None:
            m = m @ self.right.T
        return m


@dataclass(frozen=True, eq=False)
class FrenetApparatus:
    """Frame field (T, N, B) together with curvature and torsion profiles"""

    frames: FrameField
    kappa: ScalarProfile
    tau: ScalarProfile
    generic: bool = True
    label: str = "apparatus"

    @property
    def domain(self) -> Interval:
        return self.frames.domain.intersect(self.kappa.domain).intersect(self.tau.domain)

    @property
    def sampled(self) -> bool:
        return isinstance(self.frames, SampledFrameField)

    @property
    def grid(self) -> Optional[np.ndarray]:
        return self.frames.grid if self.sampled else None

    def frame_matrices(self, s: ArrayLike) -> np.ndarray:
        arr = np.atleast_1d(np.asarray(s, dtype=float)).ravel()
        self.domain.require(arr, self.label)
        return self.frames._matrices(arr)

    def frame_at(self, s: float) -> Frame:
        return Frame.from_matrix(self.frame_matrices([s])[0])

    def tangent(self, s: ArrayLike) -> np.ndarray:
        return self.frame_matrices(s)[:, 0, :]

    def normal(self, s: ArrayLike) -> np.ndarray:
        return self.frame_matrices(s)[:, 1, :]

    def binormal(self, s: ArrayLike) -> np.ndarray:
        return self.frame_matrices(s)[:, 2, :]

    def is_generic_on(self, grid: ArrayLike, tol: float = DEGENERATE_CURVATURE) -> bool:
        """True if torsion vanishes at every grid node where curvature vanishes"""
        kappa = np.atleast_1d(self.kappa(grid))
        tau = np.atleast_1d(self.tau(grid))
        flat = np.abs(kappa) < tol
        return bool(np.all(np.abs(tau[flat]) < tol))


@dataclass(frozen=True, eq=False)
class BishopApparatus:
    """Frame field (T, N1, N2) with k1, k2; k3 vanishes by construction"""

    frames: FrameField
    k1: ScalarProfile
    k2: ScalarProfile
    phase: PhaseFunction

    @property
    def domain(self) -> Interval:
        return self.frames.domain.intersect(self.k1.domain).intersect(self.k2.domain)

    def frame_matrices(self, s: ArrayLike) -> np.ndarray:
        arr = np.atleast_1d(np.asarray(s, dtype=float)).ravel()
        self.domain.require(arr, "Bishop apparatus")
        return self.frames._matrices(arr)

    def frame_at(self, s: float) -> Frame:
        return Frame.from_matrix(self.frame_matrices([s])[0])


def rotate_frame(frame: Frame, phi: float) -> Frame:
    """Equivalent frame: tangent kept, normals rotated by phi"""
    return Frame.from_matrix(normal_rotation_matrix(phi) @ frame.matrix)


def transform_coefficients(k1: float, k2: float, k3: float,
                           phi: float, phi_prime: float) -> Tuple[float, float, float]:
    """
    Moving-frame coefficients after rotating the normals by phi

    Returns:
        (k1 cos phi - k2 sin phi, k1 sin phi + k2 cos phi, k3 - phi')
    """
    c, s = np.cos(phi), np.sin(phi)
    return (float(k1 * c - k2 * s), float(k1 * s + k2 * c), float(k3 - phi_prime))


def _transform_domain(src: FrenetApparatus) -> Interval:
    try:
        return src.kappa.domain.intersect(src.tau.domain).intersect(src.frames.domain)
    except DomainError as e:
        raise DomainError(f"curvature and torsion domains of {src.label} do not overlap: {e}") from e


def bishop_transform(src: FrenetApparatus, phi0: float) -> BishopApparatus:
    """
    Equivalent Bishop apparatus with phi(s) = phi0 + integral of tau

    Args:
        src: Frenet apparatus
        phi0: Integration constant (radians)

    Returns:
        BishopApparatus with k1 = kappa cos phi, k2 = kappa sin phi
    """
    domain = _transform_domain(src)
    phase = PhaseFunction(float(phi0), src.tau)
    frames = TransformedFrameField(
        src.frames, left=lambda s: normal_rotation_matrix(phase._evaluate(s)), domain=domain
    )
    logger.debug(f"Bishop transform of {src.label} with phi0={phi0:g}")
    return BishopApparatus(frames, modulate(src.kappa, phase, "cos"),
                           modulate(src.kappa, phase, "sin"), phase)


def successor_transform(src: FrenetApparatus, phi0: float) -> FrenetApparatus:
    """
    Successor apparatus whose principal normal is the source tangent

    T* = -cos(phi) N + sin(phi) B, N* = T, B* = sin(phi) N + cos(phi) B,
    kappa* = kappa cos(phi), tau* = kappa sin(phi), phi = phi0 + integral of tau.
    """
    domain = _transform_domain(src)
    phase = PhaseFunction(float(phi0), src.tau)
    frames = TransformedFrameField(
        src.frames, left=lambda s: successor_matrix(phase._evaluate(s)), domain=domain
    )
    logger.debug(f"Successor transform of {src.label} with phi0={phi0:g}")
    return FrenetApparatus(
        frames,
        modulate(src.kappa, phase, "cos"),
        modulate(src.kappa, phase, "sin"),
        generic=src.generic,
        label=f"successor({src.label})",
    )


def successor_chain(src: FrenetApparatus, phi0s: Sequence[float]) -> FrenetApparatus:
    """Apply successor_transform once per phi0, in order"""
    app = src
    for phi0 in phi0s:
        app = successor_transform(app, phi0)
    return app


def rigid_motion(app: FrenetApparatus, rotation: ArrayLike) -> FrenetApparatus:
    """Rotate every frame vector by a constant proper rotation; profiles are unchanged"""
    rotation = np.asarray(rotation, dtype=float)
    if rotation.shape != (3, 3) or frame_defect(rotation) > ORTHO_TOL:
        raise FrameError("rigid motion needs a proper 3x3 rotation matrix")
    return FrenetApparatus(TransformedFrameField(app.frames, right=rotation),
                           app.kappa, app.tau, app.generic, app.label)


def darboux_vectors(app: FrenetApparatus, s: ArrayLike) -> np.ndarray:
    """tau*T + kappa*B on an array of arc lengths; shape (N, 3)"""
    arr = np.atleast_1d(np.asarray(s, dtype=float)).ravel()
    m = app.frame_matrices(arr)
    kappa = np.atleast_1d(app.kappa(arr))[:, None]
    tau = np.atleast_1d(app.tau(arr))[:, None]
    return tau * m[:, 0, :] + kappa * m[:, 2, :]


def darboux_vector(app: FrenetApparatus, s: float) -> Vec3:
    """Angular-velocity vector tau*T + kappa*B of the frame at s"""
    return as_vec3(darboux_vectors(app, [s])[0])


def angular_speed(app: FrenetApparatus, s: ArrayLike):
    return np.hypot(app.kappa(s), app.tau(s))


def centrode(app: FrenetApparatus, s: float) -> Vec3:
    """Unit direction of the Darboux vector (momentary axis of the frame)"""
    d = darboux_vector(app, s)
    norm = np.linalg.norm(d)
    if norm == 0.0:
        raise DomainError(f"centrode undefined at s={s:g}: the frame is stationary")
    return as_vec3(d / norm)
