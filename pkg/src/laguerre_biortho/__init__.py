"""Biisometric Laguerre shifts, biorthogonal Laguerre families and the
exact exponential-polynomial algebra used to verify them."""

__version__ = "0.1.0"

from .errors import (
    BiorthoError,
    ConditioningWarning,
    DeflationFailure,
    DepthExceeded,
    DomainError,
    EvaluationDomainError,
    GSDegenerate,
    IndexOverflow,
    InvalidParams,
    NotBiisometric,
    NotBiorthogonal,
    NotMinimal,
    OrderUnsupported,
)
from .numeric_base import (
    Poly,
    QuadratureRule,
    gauss_laguerre_rule,
    integrate_halfline,
    poly_add,
    poly_eval,
    poly_mul,
    poly_scale,
)
from .exppoly import (
    ExpPoly,
    RationalLaplace,
    deflate_at,
    ep_eval,
    ep_inner,
    ep_norm,
    ep_tail_exp,
    ep_to_laplace,
    ep_volterra_exp,
    laplace_close,
    laplace_eval,
)
from .laguerre import FamilyTag, Params, dilate, family_fn, family_laplace, laguerre_function, laguerre_poly
from .operators import (
    OperatorTag,
    Report,
    ReportEntry,
    apply_operator,
    check_laguerre_pair,
    check_power_identity,
    laplace_domain_apply,
    random_probes,
    shift,
    shift_adjoint,
)
from .biortho import (
    BiisometricPair,
    BiorthoSystem,
    check_biorthogonality,
    check_proportionality,
    dual_family,
    example_vectors,
    expand,
    family_system,
    generate_system,
    gram_schmidt_biortho,
    laguerre_pair,
    laguerre_shift_pair,
    matrix_pair,
    span_distance,
    synthesize,
)
from .suite import full_report
