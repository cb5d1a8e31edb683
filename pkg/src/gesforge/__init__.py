"""Genuinely entangled subspaces from non-orthogonal unextendible product bases."""

__version__ = "0.1.0"

from .basis import (
    EvaluatedBasis,
    SubspacePair,
    evaluate,
    orthonormalize,
    realize_basis,
    subspace_pair,
)
from .certification import (
    Bipartition,
    SpanningCertificate,
    certify_ges,
    check_spanning,
    enumerate_bipartitions,
    find_biproduct_seesaw,
    find_product_seesaw,
    reshape,
    schmidt_rank,
)
from .constructions import (
    NupbFamily,
    Scenario,
    build_custom,
    build_naive_vandermonde,
    build_standard,
    build_symmetric_nupb,
    common_local,
    fixture_shifts_oupb,
    max_ces_dim,
    max_ges_dim,
    predicted_ges_dim,
    span_dim,
)
from .poly import ExpPoly, SymbolicVector, exact_rank, poly_mul, tensor_coords
from .qubits import ghz, qubit_ges_basis, three_qubit_max_ges
from .witness import (
    build_witness,
    estimate_epsilon,
    ges_state,
    partial_transpose_min_eig,
)
