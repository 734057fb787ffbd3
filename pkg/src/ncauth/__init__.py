"""Authentication-tagged linear network coding lab.

Builds small extension fields, runs the tagged-packet authentication code
over simulated coding networks, mounts the affine forgery and substitution
attacks against it, and counts exactly how many secret keys a coalition of
verifiers can still be facing after pooling what they know.
"""

from .field import ENUMERATION_GUARD, Fel, Field, GuardError, is_prime
from .linalg import Matrix, hstack, solve, solve_count, vandermonde, vstack
from .scheme import (
    SourceKey,
    SystemParams,
    TaggedPacket,
    VerifierKey,
    combine,
    keygen,
    moore_matrix,
    poly_eval,
    residual,
    tag,
    tag_coefficient,
    verify,
    zero_packet,
)
from .netsim import (
    CoalitionView,
    CycleError,
    DecodeResult,
    Edge,
    FlowState,
    GlobalKernels,
    Intervention,
    InterventionRecord,
    Network,
    accept_map,
    butterfly,
    coalition_view,
    compute_global_kernels,
    decode,
    diamond,
    fan,
    line,
    load_network,
    network_from_dict,
    simulate,
)
from .attacks import (
    BRUTE_FORCE_GUARD,
    ForgerySpec,
    HConditionReport,
    RecoveryMeta,
    RecoverySystem,
    brute_force_count,
    build_recovery_system,
    forge,
    gauss_count,
    h_condition_report,
    predicted_count,
    predicted_rank,
    solve_target_coeffs,
)
from .cli import (
    ConfigError,
    Scenario,
    SweepResult,
    SweepRow,
    keygen_report,
    lemma_sweep,
    load_scenario,
    render_sweep,
    run_scenario,
)

__version__ = "0.1.0"
