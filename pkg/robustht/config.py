"""
Configuration settings for robustht
"""

# Numerical Tolerances
MASS_TOLERANCE = 1e-12  # Per-coordinate slack for nonnegativity and set membership
SUM_TOLERANCE = 1e-12  # A Dist must sum to 1 within this
NORMALIZE_TOLERANCE = 1e-9  # Normalizing constructor rescales up to this deviation
LFD_SUM_TOLERANCE = 1e-10  # LFD normalization check
RESIDUAL_TOLERANCE = 1e-10  # Clip calibration residual check
DEGENERATE_TOLERANCE = 1e-12  # Sub clip is degenerate when bar mass reaches threshold within this

# Exact Oracle
DEFAULT_TARGET_ERROR = 0.1  # type1 + type2 target, the usual 1/10 convention
MAX_ENUMERATION_STATES = 10_000_000  # Guard on C(n_max + k - 1, k - 1)

# Monte Carlo
DEFAULT_TRIALS = 2000
CI_Z = 1.96  # Normal-approximation 95% interval
DEFAULT_TIE_RANDOMIZATION = 1.0  # Probability of deciding p when the statistic equals the threshold
SEARCH_N_MAX = 2 ** 24  # Upper limit for empirical sample-complexity search
SEARCH_N_START = 1

# Experiments
DEFAULT_EPS_GRID = (1e-2, 10 ** -2.5, 1e-3, 10 ** -3.5, 1e-4)
DEFAULT_DELTA0 = 1.0
SLOPE_MIN_R2 = 0.99
BREAKDOWN_Z_GRID = (0.5, 1.0, 2.0, 3.0, 4.0)  # n = (z * sd / mean) ** 2
BREAKDOWN_SCAN_START = 0.02
BREAKDOWN_SCAN_STOP = 1e-9
CORPUS_SIZE = 1000
CORPUS_ALPHABETS = (2, 8)  # Inclusive range of alphabet sizes
SANDWICH_RATIO_BAND = 10.0  # Allowed hel^2 ratio for the rescaled Sub comparisons
SANDWICH_REL_TOLERANCE = 1e-9  # Relative slack on exact hel^2 orderings
CLIP_PAIRS_PER_INSTANCE = 20

# Privacy Curves
PRIVACY_GAMMA_GRID = (1e-6, 1e3, 900)  # (start, stop, points), log spaced
PRIVACY_N_GRID = (1.0, 1e7, 600)
PRIVACY_ETA_GRID = (1e-7, 1.0, 400)
PRIVACY_MONOTONE_TOLERANCE = 1e-12  # relative rise of n_priv between neighbouring gammas absorbed as rounding
PRIVACY_JUMP_FRACTION = 0.2  # transformation jump must reach this fraction of hel^2 / tv^2
PRIVACY_JUMP_WINDOW = 2.0  # eta ratio spanned by one window of the jump locator

# Parallelism
JOBS_ENV_VAR = "ROBUSTHT_JOBS"
DEFAULT_JOBS = 1

# Output
SIGNIFICANT_DIGITS = 17

# Logging
LOG_LEVEL = "WARNING"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_FILE = None  # Set to a path to also log to a file
