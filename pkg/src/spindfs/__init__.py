"""Exact pure-dephasing dynamics and decoherence-free subspaces of a spin
register coupled to a spin environment through ``sigma_z (x) sigma_z`` terms."""

from .model import (
    BasisIndex,
    CapacityError,
    DimensionError,
    EnvState,
    IndexRangeError,
    InteractionMatrix,
    ModelError,
    NonFiniteError,
    ParseError,
    Rational,
    RegisterDensity,
    StateError,
    bit,
    load_env_state,
    load_interaction_matrix,
    parse_env_state,
    parse_interaction_matrix,
    serialize_env_state,
    serialize_interaction_matrix,
    sign,
)
from .spectrum import Signature, energy, forall_env_zero, h_vector, s_entry, signature
from .evolution import (
    RateSeries,
    branch_state,
    decoherence_matrix,
    decoherence_rate,
    evolve_density,
    rate_series,
    time_grid,
)
from .dfs import (
    CaseTag,
    DfsPartition,
    DfsReport,
    GSymmetry,
    PairCase,
    SymmetryKind,
    check_symmetry,
    collective_partition,
    conjugate_class,
    conjugate_index,
    count_pair_dfs,
    dfs_partition,
    dfs_report,
    pair_case,
    preserved_pairs,
    preserves_coherence,
    required_symmetry,
    row_symmetries,
)

__version__ = "0.1.0"
