"""Approximation of ordered relational models by grid-homogeneous step
functions, with exact rational certification that no new substructures
appear."""

from .errors import (
    CapExceededError,
    HomopixError,
    InvalidInputError,
    ModelFormatError,
    NotHomogeneousError,
    PartialColoringError,
    SearchBudgetError,
)
from .functions import (
    PiecewiseFunction,
    comparison_spec,
    evaluate,
    generator,
    grid_function,
    homogeneous_function,
    resolution,
)
from .homogeneity import (
    HomogeneousSpec,
    all_specs,
    check_homogeneous,
    compatible,
    consistent_pairs,
    flatten_order_dependency,
    instantiate,
    is_homogeneous,
)
from .inlay import (
    Box,
    InlaySample,
    InlaySelection,
    extract_inlay,
    find_homogeneous_inlay,
    sample_random_inlay,
)
from .measure import (
    MonteCarloEstimate,
    SampleReport,
    StatisticDistribution,
    distance_exact,
    distance_mc,
    mu_exact,
    mu_sample,
)
from .models import (
    DiscreteModel,
    all_order_patterns,
    cell_index,
    order_pattern,
    pattern_consistent,
)
from .pipeline import (
    CloseCandidate,
    PixelationCertificate,
    certify,
    iter_close_candidates,
    pixelate,
    pixelate_ensure_size,
    quantize,
    sample_close_candidates,
)
from .ramsey import (
    SortedColoring,
    bound_homogeneous_inlay,
    bound_monochromatic,
    bound_multisort,
    bound_size_uniform,
    find_monochromatic,
    find_multisort,
    find_size_uniform,
    inlay_probability_floor,
)
from .substructure import (
    InvarianceReport,
    appears_in_discrete,
    appears_weak,
    check_arity_invariance,
    enumerate_substructures,
)

__version__ = "0.1.0"
