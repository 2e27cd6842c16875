"""Graded-commutative metric toolkit.

Finite-truncation Grassmann coefficients, block supermatrices, canonical
forms of graded metrics, the isometry condition and its linear membership
algebra, and the covering group built from body isometries and zero-body
exponentials.
"""

from .algebra import (
    AlgebraConfig,
    Supernumber,
    binomial_inverse_sqrt,
    body_soul,
    ell1_norm,
    invert,
    linear_combine,
    multiply,
    parity,
)
from .canonical import (
    CanonicalizationResult,
    SuperMetric,
    body_reduce,
    canonical_form,
    congruence,
    odd_complement,
    orthogonalize_even,
    standard_symplectic,
    symplectic_reduce,
    validate_metric,
)
from .errors import (
    BasisDegenerate,
    BodyNotInvertible,
    ConfigMismatch,
    ConvergenceViolation,
    DegenerateBody,
    LengthMismatch,
    NonZeroBody,
    NonZeroBodyOperator,
    NormBoundViolation,
    NotBodyIsometry,
    NotBodyReduced,
    NotEven,
    NotGradedSymmetric,
    NotInG0,
    NotLieElement,
    NotUnipotent,
    NumericalGateError,
    OddDimensionOdd,
    ParityMismatch,
    ShapeMismatch,
    ValidationError,
)
from .group import (
    BCHOrderConfig,
    GroupElement,
    NilElement,
    action_alpha,
    bch_series,
    body_exponential,
    conjugate_action,
    diamond,
    embed_isometry,
    semidirect_inverse,
    semidirect_multiply,
)
from .isometry import (
    GammaForm,
    LieBasis,
    body_project,
    is_isometry,
    lie_basis,
    lie_membership,
    u_norm,
)
from .matrices import (
    AdOperator,
    BlockShape,
    SuperMatrix,
    ad_operator,
    exp_zero_body,
    invert_matrix,
    log_unipotent,
    spectrum_gate,
)
from .sampling import (
    basis_for,
    make_rng,
    rand_homogeneous,
    random_body_isometry,
    random_group_element,
    random_member,
    random_metric,
    random_nil,
    standard_gamma,
)
from .verify import run_verify

__version__ = "0.1.0"

__all__ = [
    "AdOperator",
    "AlgebraConfig",
    "BCHOrderConfig",
    "BasisDegenerate",
    "BlockShape",
    "BodyNotInvertible",
    "CanonicalizationResult",
    "ConfigMismatch",
    "ConvergenceViolation",
    "DegenerateBody",
    "GammaForm",
    "GroupElement",
    "LengthMismatch",
    "LieBasis",
    "NilElement",
    "NonZeroBody",
    "NonZeroBodyOperator",
    "NormBoundViolation",
    "NotBodyIsometry",
    "NotBodyReduced",
    "NotEven",
    "NotGradedSymmetric",
    "NotInG0",
    "NotLieElement",
    "NotUnipotent",
    "NumericalGateError",
    "OddDimensionOdd",
    "ParityMismatch",
    "ShapeMismatch",
    "SuperMatrix",
    "SuperMetric",
    "Supernumber",
    "ValidationError",
    "action_alpha",
    "ad_operator",
    "basis_for",
    "bch_series",
    "binomial_inverse_sqrt",
    "body_exponential",
    "body_project",
    "body_reduce",
    "body_soul",
    "canonical_form",
    "congruence",
    "conjugate_action",
    "diamond",
    "ell1_norm",
    "embed_isometry",
    "exp_zero_body",
    "invert",
    "invert_matrix",
    "is_isometry",
    "lie_basis",
    "lie_membership",
    "linear_combine",
    "log_unipotent",
    "make_rng",
    "multiply",
    "odd_complement",
    "orthogonalize_even",
    "parity",
    "rand_homogeneous",
    "random_body_isometry",
    "random_group_element",
    "random_member",
    "random_metric",
    "random_nil",
    "run_verify",
    "semidirect_inverse",
    "semidirect_multiply",
    "spectrum_gate",
    "standard_gamma",
    "standard_symplectic",
    "symplectic_reduce",
    "u_norm",
    "validate_metric",
]
