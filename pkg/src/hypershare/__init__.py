"""Linear secret sharing for k-uniform hypergraph access structures."""

from .decompose import (
    DegreeBuckets,
    PartitionPlan,
    bucket_by_degree,
    bucket_index,
    plan_partition,
    random_block_partition,
    random_partite_cover,
)
from .errors import (
    CoverFailureError,
    DegreeOverflowError,
    DuplicatePointError,
    EnumerationTooLargeError,
    FieldMismatchError,
    FieldTooSmallError,
    FormatError,
    HyperShareError,
    InfeasibleCountError,
    NotPrimeError,
    NotQualifiedError,
    PartitionFailureError,
    SizeOverflowError,
    TargetSelectionError,
    VertexRangeError,
)
from .field import GF, Matrix, is_prime, make_field, smallest_prime_at_least
from .hypergraph import (
    Hypergraph,
    KUniformAccessStructure,
    PartiteEdgeStructure,
    PartiteHypergraph,
    ThresholdStructure,
    complement_partite,
    parse,
    serialize,
)
from .msp import (
    MonotoneSpanProgram,
    ShareBundle,
    normalize_target,
    or_compose,
    parse_msp,
    parse_shares,
    serialize_msp,
    serialize_shares,
    threshold_msp,
)
from .oracle import (
    AuditReport,
    audit_acceptance,
    audit_scheme,
    exhaustive_privacy_count,
    lagrange_reconstruct,
)
from .polygadget import (
    EvalPoints,
    MonomialIndex,
    VanishingSpace,
    in_vanishing_space,
    root_product_vector,
    vanishing_basis,
)
from .randomness import RandomTape
from .scheme import (
    BuiltScheme,
    SchemeReport,
    build_dense_partite,
    build_dense_uniform,
    build_sparse_partite,
    build_sparse_uniform,
    pipeline_expression,
    pipeline_field,
    share_size_report,
    uniform_overlay,
)

__version__ = "0.1.0"
