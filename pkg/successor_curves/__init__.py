"""
Successor Curves Package
Natural equations of space curves, successor transformations and slant helices
"""

__version__ = "1.0.0"
__author__ = "Successor Curves Team"
__license__ = "MIT"

from .errors import (
    CurveGeometryError, DomainError, FrameError, IntegrationError, ValidationError,
)
from .profiles import (
    ConstantProfile, HarmonicProfile, Interval, PhaseFunction, SalkowskiProfile,
    SampledProfile, ScalarProfile, modulate,
)
from .geomcore import (
    BishopApparatus, Frame, FrenetApparatus, bishop_transform, darboux_vector,
    frame_defect, rotate_frame, successor_chain, successor_transform, transform_coefficients,
)
from .natural import (
    CurveSamples, IntegrationConfig, estimate_curvature_torsion, frame_periodicity_check,
    integrate_frenet, integrate_position, successor_periodicity, total_torsion,
)
from .zoo import (
    SlantHelixParams, constant_precession_profile, helix_apparatus,
    phase_curvature_identity_check, plane_apparatus, salkowski_profile,
    slant_helix_apparatus, slant_slope_estimate, torsion_from_curvature,
)
from .cli import main

__all__ = [
    'CurveGeometryError',
    'DomainError',
    'FrameError',
    'IntegrationError',
    'ValidationError',
    'ConstantProfile',
    'HarmonicProfile',
    'Interval',
    'PhaseFunction',
    'SalkowskiProfile',
    'SampledProfile',
    'ScalarProfile',
    'modulate',
    'BishopApparatus',
    'Frame',
    'FrenetApparatus',
    'bishop_transform',
    'darboux_vector',
    'frame_defect',
    'rotate_frame',
    'successor_chain',
    'successor_transform',
    'transform_coefficients',
    'CurveSamples',
    'IntegrationConfig',
    'estimate_curvature_torsion',
    'frame_periodicity_check',
    'integrate_frenet',
    'integrate_position',
    'successor_periodicity',
    'total_torsion',
    'SlantHelixParams',
    'constant_precession_profile',
    'helix_apparatus',
    'phase_curvature_identity_check',
    'plane_apparatus',
    'salkowski_profile',
    'slant_helix_apparatus',
    'slant_slope_estimate',
    'torsion_from_curvature',
    'main'
]
