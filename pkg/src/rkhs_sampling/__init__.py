"""Kernel projections from random samples and Monte Carlo certification of their error bounds."""
from .bounds import (
    BoundReport,
    chebyshev_bound,
    expected_sq_error,
    fourier_basis_bound,
    hardy_monomial_bound,
    thmbound_rhs,
)
from .elements import (
    BasisElement,
    KernelCombination,
    NumericalQualityWarning,
    evaluate,
    inner,
    monomial,
    norm_h,
    phi,
    residual_norm_sq,
    section,
)
from .embedding import EmbeddingContext
from .gram import (
    GramFactor,
    IncrementalProjector,
    NumericalError,
    factorize,
    gram,
    monotone_error_curve,
    project,
    projection_error_sq,
    projection_weights,
)
from .kernels import (
    DISK,
    INTERVAL,
    DomainError,
    FourierSeriesKernel,
    NormalizedKernel,
    PullbackKernel,
    RestrictedKernel,
    ScaledKernel,
    SumKernel,
    SzegoKernel,
    eval_kernel,
    kernel_diag,
    psd_check,
)
from .measures import (
    FourierCoeffs,
    HardyWeighted,
    Opaque,
    UniformDisk,
    UniformInterval,
    l2pk_norm_sq,
    l2pk_norm_sq_mc,
    pk_density,
    sample,
)

__version__ = "0.1.0"
