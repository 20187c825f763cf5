"""Experiment-specific configuration."""

from pathlib import Path

# N_SIC values of the fairness and throughput curves
DEFAULT_N_SIC_VALUES = [2, 3, 4, 5, 10, 20]

DEFAULT_OUTPUT_DIR = Path("./results")

# Fairness spread allowed at the smallest N_SIC
MAX_SPREAD_AT_LOW_N_SIC = 0.10

# Relative tolerance for N_SIC = N against the sum-rate bound
BOUND_RTOL = 1e-3

# Mean throughput change allowed under slot permutation
PERMUTATION_MEAN_RTOL = 0.01

# Allowed rise of the fairness spread between consecutive N_SIC values
SPREAD_STEP_SLACK = 0.005

OUTPUT_FILES = {
    "probe_snr": "probe_snr.csv",
    "sweep": "sweep.csv",
    "full_sic": "throughput_full_sic.csv",
}
