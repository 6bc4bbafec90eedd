"""
Configuration Package
Provides default configuration constants and utilities
"""

from .default_config import *

__all__ = [
    'DEFAULT_STEP',
    'DEFAULT_RENORM_EVERY',
    'DEFAULT_METHOD',
    'QUADRATURE_STEP',
    'ORTHO_TOL',
    'DOMAIN_MARGIN',
    'DEGENERATE_CURVATURE',
    'DOMAIN_SEARCH_STEP',
    'DOMAIN_SEARCH_LIMIT',
    'RATIONAL_MAX_DENOMINATOR',
    'RATIONAL_TOL',
    'CSV_SIGNIFICANT_DIGITS',
    'CSV_COLUMNS',
    'DEFAULT_OUTPUTS',
    'DEFAULT_OUTPUT_PREFIX',
    'DEFAULT_RANGE',
    'DEFAULT_LOG_LEVEL',
    'DEFAULT_LOG_FILE',
    'CONFIG_ENV_VAR',
    'DEFAULT_CONFIG_FILE',
    'DEFAULT_SUITES',
    'RANDOM_PROFILE_COUNT',
    'RANDOM_PROFILE_SEED',
    'FAMILY_PRESETS',
]
