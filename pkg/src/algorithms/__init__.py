from .fully_digital import (
    RANK_THRESHOLD,
    FullyDigitalSolution,
    effective_rate,
    fully_digital_baseline,
    refine_digital,
    waterfilling,
)
from .altmin import altmin_hybrid, ebe_sweep, least_squares_digital
from .omp import build_dictionary, dictionary_directions, omp_hybrid
from .sic import aosa_partition, sic_aosa
from .wsms import wsms_solve
from .daosa import (
    CLOSED_COUNT,
    MAX_ENERGY_EFFICIENCY,
    MIN_POWER_FOR_RATE,
    Budget,
    DaosaSelector,
    SwitchSelection,
    daosa_select,
)
from .codebook import Codebook, CodebookEntry, build_codebook, ttd_codebook_select
