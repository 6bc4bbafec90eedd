"""
Default Configuration Constants
Provides fallback values for integration, tolerances and export
"""

# Integration Configuration
DEFAULT_STEP = 1e-3  # Arc-length step of the fixed-step integrator
DEFAULT_RENORM_EVERY = 1  # Steps between re-orthonormalizations
DEFAULT_METHOD = "rk4-classic"  # Only supported one-step method
QUADRATURE_STEP = 5e-4  # Max Simpson panel width for numeric primitives (h/2)

# Frame and Domain Tolerances
ORTHO_TOL = 1e-9  # Frame invariant tolerance (unit norms, orthogonality, det)
DOMAIN_MARGIN = 1e-6  # Exclusion band where (m K)^2 approaches 1 in torsion recovery
DEGENERATE_CURVATURE = 1e-8  # Below this, estimated torsion is reported as 0
DOMAIN_SEARCH_STEP = 1e-2  # Probe step when restricting a torsion domain
DOMAIN_SEARCH_LIMIT = 1e3  # Probe distance for unbounded curvature domains

# Rationality Test (periodicity criterion)
RATIONAL_MAX_DENOMINATOR = 1000
RATIONAL_TOL = 1e-9

# Export Configuration
CSV_SIGNIFICANT_DIGITS = 17  # Full precision, round-trips bit-identically
CSV_COLUMNS = [
    's', 'x', 'y', 'z',
    'Tx', 'Ty', 'Tz',
    'N1x', 'N1y', 'N1z',
    'N2x', 'N2y', 'N2z',
    'kappa', 'tau',
]
DEFAULT_OUTPUTS = ["csv"]  # Any of: csv, obj, report
DEFAULT_OUTPUT_PREFIX = None  # None derives the prefix from the family name
DEFAULT_RANGE = (0.0, 10.0)

# Logging Configuration
DEFAULT_LOG_LEVEL = "INFO"  # Options: DEBUG, INFO, WARNING, ERROR
DEFAULT_LOG_FILE = None  # None for console only, or path to log file

# Config File
CONFIG_ENV_VAR = "SC_CONFIG"  # Names a config file when --config is absent
DEFAULT_CONFIG_FILE = "config.yaml"

# Verification
DEFAULT_SUITES = ["acceptance"]
RANDOM_PROFILE_COUNT = 100  # Randomized profiles for the Darboux/Bishop checks
RANDOM_PROFILE_SEED = 20140702

# Family Parameter Presets
FAMILY_PRESETS = {
    'unit_circle': {
        'family': 'plane',
        'kappa': 1.0,
    },
    'circular_helix': {
        'family': 'helix',
        'kappa': 3.0,
        'tau': 4.0,
    },
    'slant_helix': {
        'family': 'slant-helix',
        'theta': 1.0471975511965976,  # pi/3
        'helix_kappa': 1.0,
        'phi0': 0.0,
    },
    'salkowski': {
        'family': 'salkowski',
        'm': 0.5,
    },
    'closed_precession': {
        'family': 'constant-precession',
        'omega': 3.0,
        'mu': 4.0,
    },
}
