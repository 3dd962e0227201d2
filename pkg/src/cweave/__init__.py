"""Weavings of fusion frames over discretized measure spaces.

Library layout:

- ``hilbert``: measure spaces, partitions, subspaces, operator utilities
- ``frames``: vector frames, fusion frames, fields, synthesis/analysis
- ``weaving``: weaving operators, certified universal bounds, certifiers
- ``perturbation``: synthesis-distance stability certifiers
- ``instances``: worked examples and seeded random families
- ``serialize`` / ``scenarios`` / ``plots`` / ``cli``: file formats, the
  scenario runner, report rendering, and the command-line entry point
"""

__version__ = "0.1.0"

from .hilbert import (
    BudgetExceededError,
    InputError,
    MeasureSpace,
    Partition,
    Subspace,
    extreme_eigs,
    factor_through,
    image_subspace,
    integrate,
    intersect_subspaces,
    min_dominance_scale,
    operator_norm,
    partitions_exhaustive,
    projector,
    pseudo_inverse,
    random_partition,
    range_subspace,
    span_of,
)
from .frames import (
    CFrame,
    CFusionFrame,
    Field,
    FrameBounds,
    analysis,
    bounds_of_operator,
    cframe_bounds,
    cframe_operator,
    cfusion_from_cframe,
    field_inner,
    field_norm,
    frame_operator_apply,
    fusion_bounds,
    fusion_node_terms,
    fusion_operator,
    synthesis,
    synthesis_matrix,
    vec_inner,
)
from .weaving import (
    Certificate,
    Descent,
    Exhaustive,
    LiftedProduct,
    Sampled,
    UniversalBounds,
    WovenFamily,
    certify_bessel_sum,
    certify_closeness,
    certify_operator_image,
    certify_product_equivalence,
    certify_removal,
    certify_subset_extension,
    certify_subspace_intersection,
    certify_upper_not_optimal,
    closeness_scale,
    family_from_cframes,
    lift_product,
    product_weaving_terms,
    removal_mass,
    universal_bounds,
    weaving_bounds,
    weaving_operator,
)
from .perturbation import (
    ChainScalars,
    ReferenceScalars,
    certify_perturbation,
    certify_perturbation_chain,
    chain_lower_bound,
    default_chain_scalars,
    default_scalars,
    perturbation_lower_bound,
    synthesis_distance,
)
from .instances import (
    ShiftSystemParams,
    parseval_pair_universal,
    parseval_weaving_pair,
    random_fusion_family,
    shift_system,
)
from .scenarios import run_scenario, report_exit_code

__all__ = [name for name in dir() if not name.startswith("_")]
