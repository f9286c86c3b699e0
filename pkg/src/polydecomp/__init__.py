"""Exact direct-sum decomposition of multivariate polynomial sets.

Given polynomials f_1, ..., f_m over the rationals, the package decides
whether a single invertible linear change of variables rewrites all of them
simultaneously as sums of polynomials in disjoint groups of variables, and
constructs the change of variables and the decomposed polynomials when it
does.  The engine computes the center algebra of the set (all matrices X
with H_i * X symmetric for every Hessian H_i), extracts a complete set of
orthogonal idempotents from it, and turns those idempotents into variable
blocks.  All arithmetic is exact.
"""

from .center import CenterBasis, center_basis, intersect_centers, jordan_product, membership_check
from .decompose import (
    DecompositionNode,
    DecompositionResult,
    VerificationReport,
    change_of_variables,
    decompose_recursive,
    separate,
    verify_decomposition,
)
from .errors import (
    DimensionMismatch,
    EmptyInput,
    InternalInvariantViolation,
    MixedMonomial,
    ParseError,
    PolyDecompError,
    SingularMatrix,
)
from .idempotent import IdempotentSet, find_idempotents, rank_profile, verify_complete
from .instancegen import PlantedInstance, brute_force_center_dim, generate
from .poly import (
    Polynomial,
    PolyMatrix,
    hessian,
    parse_polynomial,
    partial_derivative,
    render_canonical,
    substitute_linear,
)
from .ratlinalg import (
    RatMatrix,
    UniPoly,
    column_space_basis,
    coprime_split,
    extended_gcd,
    invert,
    minimal_polynomial,
    nullspace_basis,
    rref,
    squarefree_part,
    unipoly_gcd,
)

__version__ = "0.1.0"

__all__ = [
    "CenterBasis",
    "DecompositionNode",
    "DecompositionResult",
    "DimensionMismatch",
    "EmptyInput",
    "IdempotentSet",
    "InternalInvariantViolation",
    "MixedMonomial",
    "ParseError",
    "PlantedInstance",
    "PolyDecompError",
    "PolyMatrix",
    "Polynomial",
    "RatMatrix",
    "SingularMatrix",
    "UniPoly",
    "VerificationReport",
    "brute_force_center_dim",
    "center_basis",
    "change_of_variables",
    "column_space_basis",
    "coprime_split",
    "decompose_recursive",
    "extended_gcd",
    "find_idempotents",
    "generate",
    "hessian",
    "intersect_centers",
    "invert",
    "jordan_product",
    "membership_check",
    "minimal_polynomial",
    "nullspace_basis",
    "parse_polynomial",
    "partial_derivative",
    "rank_profile",
    "render_canonical",
    "rref",
    "separate",
    "squarefree_part",
    "substitute_linear",
    "unipoly_gcd",
    "verify_complete",
    "verify_decomposition",
]
