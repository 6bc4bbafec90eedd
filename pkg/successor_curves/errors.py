"""
Errors Module
Exception hierarchy shared by the geometry, integration and CLI layers
"""


class CurveGeometryError(Exception):
    """Base class for all library errors"""


class DomainError(CurveGeometryError, ValueError):
    """Evaluation outside a profile domain or at a singular boundary"""


class FrameError(CurveGeometryError, ValueError):
    """A frame violates orthonormality or orientation beyond ORTHO_TOL"""


class IntegrationError(CurveGeometryError):
    """Invalid integration setup or a failed quadrature"""


class ValidationError(CurveGeometryError, ValueError):
    """Invalid user input: job specs, family parameters, suite names"""
