"""Certified numerical toolkit for compactness-by-summability.

Sizes of p-convex hulls, norms of homogeneous polynomials between
sequence-space truncations, factorizations with certified norm chains,
and Taylor models with certified radius windows.  Every reported
quantity is a sandwich [lower, upper] whose two sides are backed by
independently checkable witnesses.
"""

from .backend import BACKEND, get_backends
from .errors import (
    DegreeTooLow,
    DimensionCap,
    DimensionMismatch,
    DivergentSeminorm,
    DivergentSum,
    IndexOutOfRange,
    Infeasible,
    InvalidCertificate,
    MassExhausted,
    NoConvergence,
    NotCovered,
    PCompactError,
    RadiusExceeded,
    ZeroGenerator,
)
from .lpcore import (
    DEFAULT_TOL,
    INF,
    Exponent,
    TailedSequence,
    as_exponent,
    as_vec,
    conjugate_exponent,
    holder_pairing,
    lp_norm,
    seq_norm,
    vec_norm,
)
from .pconvex import (
    BetaReport,
    BoundPair,
    DisjointCoordCertificate,
    DualCertificate,
    GeneratorSet,
    GeometricTail,
    MembershipCertificate,
    best_disjoint_certificate,
    beta_construct,
    beta_construct_lp,
    merge_diagonal,
    min_norm_representation,
    mp_lower_disjoint,
    mp_upper,
)
from .homopoly import (
    HomPolynomial,
    KappaBound,
    QNuclearCertificate,
    companion,
    companion_filter_batch,
    companion_filter_batch_printed,
    holotype_check,
    kappa_bounds,
    linearize,
    make_probes,
    membership_coefficients,
    monomial_generators,
    qnuclear_check,
    sup_norm_probe,
    taylor_component,
    verify_upper_witness,
)
from .factor import (
    ChoiKimFactorization,
    QuotientPoint,
    SinhaKarnFactorization,
    ThetaOperator,
    choi_kim,
    operator_norm_probe,
    operator_norm_upper,
    quotient_point,
    sinha_karn,
)
from .taylor import (
    ClosedFormComponent,
    DivergenceCertificate,
    NullSequence,
    PCompactVerdict,
    RadiusWindow,
    TailLaw,
    TaylorModel,
    Verdict,
    ball_image_bound,
    pcompact_at,
    radius_window,
    reexpand,
    seminorm_e,
    summability_at_zero,
)
from .counterex import (
    SigmaPartition,
    build_example_A,
    build_example_B,
    build_example_B_at_e1,
    example_A_kappa,
    example_B_at_e1_certificate,
    example_B_lower,
    example_B_partial_sums,
)

__version__ = "1.0.0"
