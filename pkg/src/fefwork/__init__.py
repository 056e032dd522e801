"""Entanglement fraction, entropies, and erasure/extraction work bounds for
bipartite quantum states, plus a replayable work ledger for allowed processes."""

from .bounds import (
    BoundsReport,
    Energy,
    IsotropicThresholds,
    TemperatureScale,
    Theorem2Result,
    bounds_report,
    bounds_report_to_dict,
    eq4_bound,
    eq6_fef_upper,
    eq12_extract_lower,
    isotropic_fef,
    isotropic_thresholds,
    lambda_gap,
    lemma1_rhs,
    theorem1_bound,
    theorem2_approx,
)
from .certify import run_certify
from .entropy import EntropyReport, entropy_report, smooth_min_entropy_lower, von_neumann_entropy
from .fef import FefResult, fef_monte_carlo, fef_see_saw, max_entangled_vector
from .linalg import (
    MatrixNorms,
    StateDistances,
    ValidationError,
    fidelity,
    fidelity_and_distances,
    hermitian_eigensystem,
    matrix_norms,
    partial_trace_matrix,
    tensor,
)
from .process import (
    Action,
    DeltaApprox,
    HamiltonianSpec,
    InvalidProcessError,
    NotApplicableError,
    ProcessSpec,
    RaiseLower,
    Thermalize,
    UnitaryOp,
    WorkLedger,
    build_fig1_pipeline,
    build_fig2_pipeline,
    process_spec_from_dict,
    process_spec_to_dict,
    replay,
)
from .qsdp import ChannelChoi, QResult, channel_objective, choi_from_kraus, choi_from_unitary, q_function
from .states import (
    BipartiteState,
    IsotropicParams,
    PureState,
    bell_state,
    dump_state,
    haar_unitary,
    isotropic_state,
    load_state,
    maximally_mixed,
    partial_trace,
    random_pure_state,
    random_state,
    singlet_vector,
    state_from_dict,
    state_to_dict,
    two_copies,
)
from .twirl import singlet_overlap, twirl, twirl_work_cost

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
