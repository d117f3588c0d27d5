"""Interference visibility as a witness of entanglement and quantum correlation.

Numerical tools for Haar-averaged visibilities, measurement-disturbance
correlation and linear-entropy entanglement of bipartite states.
"""

from .channels import MeasurementBasis, dephase_full, dephase_one_sided, noisy_measure
from .estimators import (
    EstimateResult,
    TheoremCheck,
    entanglement_from_visibility,
    mc_avg_sq_visibility,
    mc_avg_sq_visibility_local,
    verify_ef_bound,
    verify_noisy_theorem,
    verify_theorem1,
)
from .haar import HaarSampler, estimate_m_operator, sample_unitary
from .linalg import hs_norm, kron, partial_trace, purity, swap_operator, validate_density
from .measures import (
    complementarity_report,
    concurrence,
    ef_decomposition_average,
    ef_visibility_bound,
    linear_entanglement,
    purity_ratio_check,
    q_disturbance,
    q_disturbance_noisy,
    q_disturbance_one_sided,
    relative_phase,
    schmidt,
    squared_visibility,
    visibility,
)
from .states import (
    BipartiteState,
    PureDecomposition,
    PureState,
    bell_state,
    classical_classical,
    load_state,
    maximally_mixed,
    product_state,
    random_density,
    random_pure,
    save_state,
    schmidt_state,
    werner,
)

__version__ = "0.1.0"
