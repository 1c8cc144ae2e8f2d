"""Norm-bound calculus for grand Lebesgue spaces.

Represents generating functions psi(p), propagates them through
multivariate operations with explicit constants, converts the results to
exponential tail bounds by convex conjugation, and checks every
propagated bound against a brute-force numerical oracle.
"""

from .calculus import (
    LayerSolution,
    OperationDescriptor,
    beckner_constant,
    combine_bilinear_integral,
    combine_convolution,
    combine_hausdorff,
    combine_infimal_convolution,
    combine_maximal,
    combine_product,
    combine_tensor,
    combine_toeplitz,
    conjugate_split_min,
    convolution_descriptor,
    hausdorff_envelope_exponent,
    hausdorff_split_min,
    holder_split_min,
    identity_descriptor,
    kappa_layer_infimum,
    maximal_envelope,
    maximal_split_min,
    product_descriptor,
    split_constant,
)
from .errors import GLSError
from .fenchel import (
    TailCurve,
    conjugate_with_argmax,
    fenchel_conjugate,
    fit_power_psi_from_tail,
    power_tail_closed_form,
    tail_bound,
)
from .oracle import (
    GridFunction,
    SequenceFunction,
    apply_operation,
    dilation,
    empirical_tail,
    infimal_convolution,
    lp_norm,
    mixed_norm_kernel,
    moments_table,
    periodic_convolution,
    pointwise_product,
    restrict_to_window,
    strong_maximal,
    tensor_product,
    toeplitz_apply,
    verify_bound,
)
from .psi import (
    DegeneratePsi,
    FactorPsi,
    LayerInfimumPsi,
    MomentTable,
    NaturalPsi,
    PInterval,
    PowerPsi,
    ProductPsi,
    PsiFunction,
    RationalPsi,
    ScaledPsi,
    WindowPsi,
    check_h_convexity,
    eval_psi,
    gls_norm,
    make_psi,
)

__all__ = [
    "GLSError",
    "PInterval",
    "MomentTable",
    "PsiFunction",
    "PowerPsi",
    "RationalPsi",
    "WindowPsi",
    "DegeneratePsi",
    "NaturalPsi",
    "ProductPsi",
    "ScaledPsi",
    "FactorPsi",
    "LayerInfimumPsi",
    "make_psi",
    "eval_psi",
    "gls_norm",
    "check_h_convexity",
    "TailCurve",
    "conjugate_with_argmax",
    "fenchel_conjugate",
    "tail_bound",
    "power_tail_closed_form",
    "fit_power_psi_from_tail",
    "split_constant",
    "holder_split_min",
    "conjugate_split_min",
    "beckner_constant",
    "combine_product",
    "combine_tensor",
    "combine_convolution",
    "combine_infimal_convolution",
    "combine_maximal",
    "maximal_split_min",
    "maximal_envelope",
    "combine_hausdorff",
    "hausdorff_split_min",
    "hausdorff_envelope_exponent",
    "combine_toeplitz",
    "combine_bilinear_integral",
    "OperationDescriptor",
    "LayerSolution",
    "kappa_layer_infimum",
    "identity_descriptor",
    "product_descriptor",
    "convolution_descriptor",
    "GridFunction",
    "SequenceFunction",
    "lp_norm",
    "moments_table",
    "empirical_tail",
    "pointwise_product",
    "tensor_product",
    "periodic_convolution",
    "infimal_convolution",
    "restrict_to_window",
    "strong_maximal",
    "toeplitz_apply",
    "apply_operation",
    "mixed_norm_kernel",
    "dilation",
    "verify_bound",
]

__version__ = "0.1.0"
