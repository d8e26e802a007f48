from .array_geometry import (
    DEFAULT_WSMS_SEPARATION,
    ArrayGeometry,
    Direction,
    build_upa,
    partition_wsms,
    rank_optimal_separation,
    rayleigh_distance,
    split_subarrays,
    steering_matrix,
    steering_vector,
)
