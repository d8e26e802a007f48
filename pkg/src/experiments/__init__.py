from .results import SweepResult
from .runner import (
    EXPERIMENTS,
    run_array_gain,
    run_daosa_tradeoff,
    run_power_budget,
    run_rate_vs_power,
    run_rayleigh,
    run_squint_vs_bandwidth,
    run_ttd_resolution,
    run_wsms_subarrays,
)
