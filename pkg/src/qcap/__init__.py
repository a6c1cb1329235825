"""Rigorous numerical bounds on quantum and private capacities of
low-noise channels.

The toolkit couples a dense complex linear-algebra kernel and a small
interior-point semidefinite-program solver with channel calculus (Kraus,
Choi, Stinespring, complements) to compute diamond-norm distances,
degradability parameters (optimal via SDP, and via explicitly constructed
degrading maps with analytic guarantees), coherent information, and the
resulting two-sided capacity intervals.
"""

from .capacity import (
    CapacityReport,
    binary_entropy,
    capacity_interval,
    coherent_information,
    coherent_information_state,
    dominant_gap_curves,
    leading_order_gap,
    private_gap,
    quantum_gap,
)
from .channels import (
    Channel,
    ChoiMatrix,
    HermitianPreservingMap,
    IsometricExtension,
    PauliFamily,
    SimplexError,
    apply,
    channel_difference,
    channel_of_choi,
    choi_of,
    choi_rank,
    complementary,
    compose,
    depolarizing,
    depolarizing_family,
    epolarizing,
    generalized_pauli,
    identity_channel,
    pauli,
    pauli_complement_action,
    stinespring,
    xz_channel,
    xz_family,
)
from .degradability import (
    DegradabilityReport,
    ResidualCoefficients,
    complementary_degrading_eta,
    degradability_sdp,
    depol_tuned_eta,
    recovery_degrading_eta,
    residual_coefficients,
    tuned_pauli_eta,
    tuned_shifts,
    xz_tuned_eta,
)
from .diamond import (
    DiamondResult,
    covariant_diamond,
    diamond_norm_diff,
    diamond_norm_hp,
    max_norm_diamond_bound,
    stinespring_distance_bounds,
)
from .linalg import (
    DEFAULT_TOL,
    HermitianEigenResult,
    Tolerances,
    eig_hermitian,
    kron,
    max_norm,
    operator_norm,
    partial_trace,
    trace_norm,
    von_neumann_entropy,
)
from .sdp import (
    SdpProblem,
    SdpSolution,
    SolveOptions,
    SolverError,
    hermitian_to_real,
    solve,
)

__version__ = "0.1.0"
