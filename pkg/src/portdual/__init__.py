"""Optimal fidelities of deterministic port-based teleportation and unitary
estimation, their one-to-one conversion, and independent verification oracles."""

from .correspondence import (
    CoefficientVector,
    EigensolverError,
    FidelityMatrix,
    RMatrix,
    SpectralResult,
    build_M_est,
    build_M_pbt,
    build_R,
    fidelity_est,
    fidelity_pbt,
    max_eig,
    optimal_vectors_small,
    scaling_table,
    unit_vector,
    v_to_w,
    w_to_v,
)
from .inversion import (
    FeasibilityReport,
    check_dual_feasibility,
    coefficient_A,
    dual_W,
    inversion_bound,
    performance_operator,
)
from .oracle import (
    ChoiMatrix,
    PbtInstance,
    channel_fidelity,
    extract_w,
    mc_est_fidelity,
    pbt_channel_choi,
    resource_state,
    srm_povm,
)
from .repsym import (
    DenseOperator,
    OrthogonalIrrep,
    Permutation,
    embed_unit,
    haar_unitary,
    irrep_matrix,
    matrix_unit,
    perm_matrix,
    schur_char,
    young_projector,
)
from .young import (
    DiagramIndex,
    StandardTableauFamily,
    YoungDiagram,
    add_box,
    check_branching,
    dim_u,
    enumerate_diagrams,
    mult,
    remove_box,
    standard_tableaux,
)

__version__ = "0.1.0"
