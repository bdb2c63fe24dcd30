"""Higher order Gauss maps of projective toric varieties."""

__version__ = "0.1.0"

from .gauss import (
    BudgetExceeded,
    Classification,
    GaussReport,
    NotGenericallySpanned,
    analyze,
    classify,
    compute_Bk,
    span_generators_exchange,
)
from .jets import (
    is_generically_kjet_spanned,
    jet_matrix,
    jet_matrix_at_point,
    multi_indices,
    osculating_dimension,
)
from .linalg import IntMatrix, Sublattice, det_exact, hnf, quotient_projection, rank_exact, saturate, snf
from .polytope import (
    PointConfiguration,
    Polytope,
    convex_hull,
    edge_criterion_kjet,
    edge_lattice_length,
    is_k_veronese,
    is_smooth,
    lattice_points,
)
