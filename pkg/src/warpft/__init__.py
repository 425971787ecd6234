"""warpft: Fourier transforms of warped compositions f(u(t)).

The pipeline computes the spectrum of a composition from the spectrum of
the outer function and an oscillatory transfer kernel, with certified
truncation bounds, an imaginary-order Bessel evaluator backing the sinh
closed forms, a catalog of analytic reference transforms, and an
independent brute-force oracle.
"""
from .bessel import besselk_imag, besselk_imag_scaled
from .catalog import (
    SinhLorentzParams,
    bessel_laplace_closed,
    build_entry,
    g_time,
    get_entry,
    lorentzian_hat,
    lorentzian_time,
    make_lorentzian_profile,
    make_sinh_lorentzian_profile,
    sinh_kernel_closed,
    sinh_lorentzian_hat,
)
from .funcspace import (
    DecayHint,
    Profile,
    SampledSignal,
    Spectrum,
    Warp,
    WarpCertificate,
    compose_signal,
    composition_contraction_check,
    l2_norm,
    sinh_warp,
    validate_warp,
)
from .oracle import direct_ft, plancherel_residual, spectrum_compare
from .oscillatory import (
    KernelSample,
    QuadratureBudget,
    QuadratureBudgetError,
    kernel_tail_bound,
    transfer_kernel,
    transfer_kernel_batch,
)
from .transfer import (
    TransferPlan,
    TransferReport,
    band_gap_project,
    compose_spectrum,
    default_l_max,
    inverse_check,
)

__version__ = "0.1.0"

__all__ = [
    "DecayHint",
    "KernelSample",
    "Profile",
    "QuadratureBudget",
    "QuadratureBudgetError",
    "SampledSignal",
    "SinhLorentzParams",
    "Spectrum",
    "TransferPlan",
    "TransferReport",
    "Warp",
    "WarpCertificate",
    "band_gap_project",
    "bessel_laplace_closed",
    "besselk_imag",
    "besselk_imag_scaled",
    "build_entry",
    "compose_signal",
    "compose_spectrum",
    "composition_contraction_check",
    "default_l_max",
    "direct_ft",
    "g_time",
    "get_entry",
    "inverse_check",
    "kernel_tail_bound",
    "l2_norm",
    "lorentzian_hat",
    "lorentzian_time",
    "make_lorentzian_profile",
    "make_sinh_lorentzian_profile",
    "plancherel_residual",
    "sinh_kernel_closed",
    "sinh_lorentzian_hat",
    "sinh_warp",
    "spectrum_compare",
    "transfer_kernel",
    "transfer_kernel_batch",
    "validate_warp",
    "__version__",
]
