"""Exact analysis of orthogonal product-state sets: local measurements that
preserve orthogonality, projective discrimination protocols, unextendibility
and activation of nonlocality."""

from .activation import (
    ActivationResult,
    ActivationWitness,
    Status,
    StrongLocalityReport,
    TerminalProperty,
    find_activation_witness,
    is_activable,
    is_strongly_local,
    replay_witness,
)
from .constraints import (
    ConstraintRecord,
    HermitianOperator,
    HermitianSpace,
    derive_constraint_space,
    is_locally_irreducible,
    only_trivial,
)
from .core import (
    Bipartition,
    Completeness,
    CompletenessClass,
    LocalVector,
    NotOrthogonalError,
    ProductState,
    StateSet,
    StateSetError,
    classify_completeness,
    flatten,
    has_local_redundancy,
    inner_product,
    is_orthogonal_set,
)
from .discrimination import (
    DistinguishabilityVerdict,
    ProtocolNode,
    UPBResult,
    Verdict,
    is_upb,
    replay_protocol,
    search_protocol,
)
from .fileformat import parse_state_set, serialize_state_set
from .linalg import Scalar
from .measurement import (
    PVM,
    Closure,
    OutcomeResult,
    Projector,
    apply_projector,
    apply_pvm,
    enumerate_op_pvms,
    is_orthogonality_preserving,
)
from .tiling import render_tiling

__version__ = "0.1.0"
