# reference parameter set used throughout the figures; bare CLI calls reproduce it
REFERENCE_PARAMS = {
    "lambda": 0.05,
    "r": 1.0,
    "alpha": 4.0,
    "theta": 2.0,
    "eta": 1.0,
    "w": 1.0,
}

# backoff and window of the renewal-Aloha validation runs
REFERENCE_BACKOFF = 14.0
REFERENCE_WINDOW = 40.0

# packet durations and full-duplex fractions of the throughput-vs-duration grid
REFERENCE_DURATIONS = [0.5, 1.0, 2.0, 4.0, 8.0]
REFERENCE_FRACTIONS = [0.0, 0.5, 1.0]

# default quadrature tolerances, see QuadConfig
DEFAULT_REL_TOL = 1e-8
DEFAULT_ABS_TOL = 1e-12
DEFAULT_MAX_DEPTH = 50

# relative closeness below which the log-ratio kernel switches to its limit
KERNEL_LIMIT_THRESHOLD = 1e-9

# duration-ratio search range of the heterogeneous optimizers
GAMMA_MIN = 1e-3
GAMMA_MAX = 1e2
GAMMA_GRID_POINTS = 61

# Valid keywords for the command line front end
VALID_FIGURES = [2, 3, 4, 5, 6, 7, 8, 9, 10, 11]
VALID_SWEEP_VARIABLES = ["D", "q", "G", "r", "gamma", "theta", "alpha", "eta"]
VALID_SPACINGS = ["linear", "log"]
VALID_XI_MODES = ["homogeneous", "optimized_hetero"]
VALID_SCHEDULERS = ["threads", "processes", "synchronous"]
VALID_OMEGA_HD_PRIME_FORMS = ["closed_form", "overlap_integral"]

# validation: |z| above this fails a cell, a run with fewer replications is low-power
VALIDATION_Z_FAIL = 4.0
VALIDATION_Z_EXPECTED = 3.0
MIN_REPLICATIONS_FOR_POWER = 5

# environment variable naming the default output directory of the CLI
OUTPUT_DIR_ENV = "FDALOHA_OUTPUT_DIR"

# exit codes of the command line front end
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VALIDATION = 3
