from .propagation import (
    DEFAULT_REFLECTION_LOSS_DB,
    LOS,
    REFLECTION,
    Path,
    PathSet,
    build_two_path_scenario,
    friis_path_loss_db,
)
from .channel_builder import (
    ELEMENT,
    PLANAR,
    SPHERICAL,
    SUBARRAY,
    Channel,
    assemble_channel,
    numerical_rank,
    subcarrier_grid,
)
