# Sampling and discretisation defaults
RESOLUTION = 4096
SPECTRAL_N = 64
TRIM = 0.9
PANEL_DEPTH = 40
PANEL_ORDER = 16
SUBSAMPLE_LEVELS = 8
# cells this many widths from a singular point get the full panel order
NEAR_CELLS = 8
# grid cells scanned for sign changes
SIGN_GRID = 4096
ENDPOINT_EXPONENT = 0.5

# Lower limits enforced by the backend
MIN_RESOLUTION = 64
MIN_SPECTRAL_N = 4
MIN_PROFILE_RESOLUTION = 8

# Evaluation is chunked so a (points x nodes) block stays small
CHUNK_SIZE = 256

# Reports
SEED = 7
WORKERS = 1
OUTPUT_FORMAT = "json"
OUTPUT_FORMATS = ["json", "csv"]

TOLERANCES = {
    "parseval": 1e-6,
    "poincare_bertrand": 1e-5,
    "norm_bounds": 1e-3,
    "appendix": 1e-9,
    "calderon": 0.1,
    "logweights": 1e-6,
    "roundtrip": 1e-8,
    "kernel": 1e-8,
}

# Growth indicators
GROWTH_RATIO = 0.75
DIAG_GROWTH_TOL = 5e-3
DIAG_DEPTH = 10
DIAG_START_DEPTH = 6
DIAG_MAX_DEPTH = 12
DIAG_MAX_STEPS = 32

# Airfoil inversion
IN_RANGE_TOL = 1e-8

# Appendix tail cut-off for the improper integral over (1, oo)
APPENDIX_TAIL = 1e6

# JSON weight tags
WEIGHT_TAGS = {
    "inv_sqrt": "InvSqrt",
    "flat_u": "Flat",
    "sqrt_u": "Sqrt",
}

ENV_CONFIG = "FINHILBERT_CONFIG"
