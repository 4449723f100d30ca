"""Certified bounds on the erasure robustness of highly symmetric frames."""

from .bounds import (
    BoundsTable,
    certify,
    condition_number_bound,
    min_spanning_K,
    sorted_squared_correlations,
    sweep_all_K,
    trivial_untf_bounds,
)
from .epsnet import (
    NetConfig,
    StepPoint,
    delta_for,
    enumerate_net,
    min_levels,
    net_cardinality,
    prune_check,
    pruned_cardinality,
    quantize_step,
    verify_covering,
    volumetric_bound,
)
from .frames import (
    FrameMatrix,
    GeneratorSpec,
    GroupDescriptor,
    canonicalize,
    orbit_signed_permutations,
    read_frame,
    verify_group_invariance,
    verify_untf,
    write_frame,
)
from .oracle import (
    EigenResult,
    OracleResult,
    eigen_symmetric,
    exact_bounds,
    exact_bounds_all_K,
)

__version__ = "0.1.0"
