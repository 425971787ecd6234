r"""Closed-form reference transforms for the sinh-warped Lorentzian family.

Everything here is elementary or reduces to the imaginary-order Bessel
function.  The composed-profile transform has three real branches in the
scale parameter ``a``:

    a < 1:  factor(nu) = sinh(nu*arccos(a)) / sqrt(1 - a^2)
    a = 1:  factor(nu) = nu            (removable limit)
    a > 1:  factor(nu) = sin(nu*arccosh(a)) / sqrt(a^2 - 1)

with ``ghat(k) = pi * factor(|k|/b) / (a b sinh(|k| pi / (2b)))``.  The
branches are pre-resolved to real formulas so no complex arccos/sqrt is
evaluated at runtime; near-branch inputs (|a-1| < 1e-8, |k| < 1e-10)
route to series/limit forms so the removable singularities never produce
0/0.  Ratios of sinh's are computed in exponential form to avoid overflow
for large k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .bessel import besselk_imag_scaled
from .funcspace import DecayHint, Profile, Warp, sinh_warp

__all__ = [
    "SinhLorentzParams",
    "lorentzian_hat",
    "lorentzian_time",
    "g_time",
    "sinh_kernel_closed",
    "sinh_lorentzian_hat",
    "bessel_laplace_closed",
    "CatalogEntry",
    "REGISTRY",
    "ALIASES",
    "get_entry",
    "build_entry",
    "make_lorentzian_profile",
    "make_sinh_lorentzian_profile",
]

_A_BRANCH_EPS = 1e-8
_K_LIMIT_EPS = 1e-10


@dataclass(frozen=True)
class SinhLorentzParams:
    """Parameters of g(t) = 1 / (a^2 + sinh(b t)^2)."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.a > 0:
            raise ValueError("a must be positive")
        if not self.b > 0:
            raise ValueError("b must be positive")


def lorentzian_hat(a: float, k):
    """pi * exp(-a|k|) / a, the transform of 1/(a^2 + t^2).  Accepts arrays."""
    if not a > 0:
        raise ValueError("scale parameter must be positive")
    out = math.pi * np.exp(-a * np.abs(k)) / a
    return float(out) if np.ndim(out) == 0 else out


def lorentzian_time(a: float, t):
    """1 / (a^2 + t^2).  Accepts arrays."""
    if not a > 0:
        raise ValueError("scale parameter must be positive")
    out = 1.0 / (a * a + np.square(t))
    return float(out) if np.ndim(out) == 0 else out


def g_time(params: SinhLorentzParams, t):
    """1 / (a^2 + sinh(b t)^2); even, decays like 4 exp(-2b|t|).  Accepts arrays."""
    out = 1.0 / (params.a**2 + np.square(np.sinh(params.b * np.asarray(t, dtype=float))))
    return float(out) if np.ndim(out) == 0 else out


def _sinh_ratio(p: float, q: float) -> float:
    """sinh(p)/sinh(q) for p >= 0, q > 0 without overflow (exponential form)."""
    return math.exp(p - q) * math.expm1(-2.0 * p) / math.expm1(-2.0 * q)


def _branch_factor_zero(a: float) -> float:
    """lim_{nu->0} _branch_factor(nu, a)/nu: arccos(a)/sqrt(1-a^2) continued."""
    if abs(a - 1.0) < _A_BRANCH_EPS:
        return 1.0 + (1.0 - a) / 3.0
    if a < 1.0:
        s = math.acos(a)
        return s / math.sin(s)
    sigma = math.acosh(a)
    return sigma / math.sinh(sigma)


def sinh_kernel_closed(b: float, k: float, l: float, rel_tol: float = 1e-12) -> complex:
    """Transfer kernel of u(t) = sinh(b t): (2/b) e^{sgn(l) k pi/(2b)} K_{ik/b}(|l|).

    Real-valued (the warp is odd).  The Bessel factor is evaluated in
    exponentially scaled form and combined with the prefactor in a single
    exponent, so large |l| does not underflow prematurely.  For |k|/b
    large the underlying Bessel quadrature loses relative accuracy to
    cancellation (the value itself shrinks like e^{-pi k / 2b}).
    """
    if not b > 0:
        raise ValueError("sinh rate must be positive")
    if l == 0:
        raise ValueError("kernel closed form undefined at l=0 (logarithmic divergence)")
    nu = k / b
    sign = 1.0 if l > 0 else -1.0
    exponent = sign * k * math.pi / (2.0 * b) - abs(l)
    scaled = besselk_imag_scaled(nu, abs(l), rel_tol=max(rel_tol, 1e-13))
    return complex((2.0 / b) * math.exp(exponent) * scaled, 0.0)


def sinh_lorentzian_hat(params: SinhLorentzParams, k: float) -> float:
    """Transform of g(t) = 1/(a^2 + sinh(b t)^2); real, even in k.

    ghat(k) = pi * factor(|k|/b, a) / (a b sinh(|k| pi / (2b))) with the
    branch factor above; ghat(0) = (2/(a b)) * arccos(a)/sqrt(1-a^2)
    (branch-continued).  Positive for a <= 1; may change sign for a > 1.
    """
    a, b = params.a, params.b
    nu = abs(k) / b
    if abs(k) < _K_LIMIT_EPS or nu * math.pi < _K_LIMIT_EPS:
        return (2.0 / (a * b)) * _branch_factor_zero(a)
    q = nu * math.pi / 2.0
    if abs(a - 1.0) < _A_BRANCH_EPS:
        series = 1.0 + (1.0 - a) * (nu * nu + 1.0) / 3.0
        ratio = nu * series * _inv_sinh(q)
        return math.pi * ratio / (a * b)
    if a < 1.0:
        s = math.acos(a)
        return math.pi * _sinh_ratio(nu * s, q) / (a * b * math.sin(s))
    sigma = math.acosh(a)
    return math.pi * math.sin(nu * sigma) * _inv_sinh(q) / (a * b * math.sinh(sigma))


def _inv_sinh(q: float) -> float:
    """1/sinh(q) for q > 0, underflowing gracefully for large q."""
    return -2.0 * math.exp(-q) / math.expm1(-2.0 * q)


def bessel_laplace_closed(a: float, nu: float) -> float:
    """Closed form of the Laplace transform integral(0, inf) e^{-a l} K_{i nu}(l) dl.

    Equals pi * factor(|nu|, a) / sinh(|nu| pi) with the shared branch
    factor; the nu -> 0 limit is arccos(a)/sqrt(1-a^2) (branch-continued).
    Even in nu.  For any b > 0,
    (2 cosh(nu pi / 2) / (a b)) * bessel_laplace_closed(a, nu) equals
    sinh_lorentzian_hat(SinhLorentzParams(a, b), nu * b).
    """
    if not a > 0:
        raise ValueError("scale parameter must be positive")
    nu = abs(nu)
    if nu * math.pi < _K_LIMIT_EPS:
        return _branch_factor_zero(a)
    q = nu * math.pi
    if abs(a - 1.0) < _A_BRANCH_EPS:
        series = 1.0 + (1.0 - a) * (nu * nu + 1.0) / 3.0
        return math.pi * nu * series * _inv_sinh(q)
    if a < 1.0:
        s = math.acos(a)
        return math.pi * _sinh_ratio(nu * s, q) / math.sin(s)
    sigma = math.acosh(a)
    return math.pi * math.sin(nu * sigma) * _inv_sinh(q) / math.sinh(sigma)


# --------------------------------------------------------------------------
# registry: named entries addressable by id with parameter maps


def _scalar_map(fn: Callable[[float], float]):
    def wrapped(x):
        arr = np.asarray(x, dtype=float)
        if arr.ndim == 0:
            return fn(float(arr))
        return np.array([fn(float(v)) for v in arr.ravel()]).reshape(arr.shape)

    return wrapped


def make_lorentzian_profile(a: float = 1.0) -> Profile:
    if not a > 0:
        raise ValueError("a must be positive")
    return Profile(
        label=f"lorentzian(a={a:g})",
        time_eval=lambda t: lorentzian_time(a, t),
        freq_eval=lambda k: lorentzian_hat(a, k),
        time_decay=DecayHint("polynomial", order=2.0),
        freq_decay=DecayHint("exponential", rate=a),
    )


def make_sinh_lorentzian_profile(a: float = 1.0, b: float = 1.0) -> Profile:
    params = SinhLorentzParams(a, b)
    s = math.acos(a) if a < 1.0 else 0.0
    return Profile(
        label=f"sinh-lorentzian(a={a:g}, b={b:g})",
        time_eval=lambda t: g_time(params, t),
        freq_eval=_scalar_map(lambda k: sinh_lorentzian_hat(params, k)),
        time_decay=DecayHint("exponential", rate=2.0 * b),
        freq_decay=DecayHint("exponential", rate=(math.pi / 2.0 - s) / b),
    )


@dataclass(frozen=True)
class CatalogEntry:
    kind: str  # "profile" or "warp"
    defaults: Mapping[str, float]
    builder: Callable[..., object]
    summary: str


REGISTRY: dict[str, CatalogEntry] = {
    "lorentzian": CatalogEntry(
        "profile", {"a": 1.0}, make_lorentzian_profile, "1/(a^2 + t^2)"
    ),
    "sinh-warp": CatalogEntry("warp", {"b": 1.0}, sinh_warp, "u(t) = sinh(b t)"),
    "sinh-lorentzian": CatalogEntry(
        "profile",
        {"a": 1.0, "b": 1.0},
        make_sinh_lorentzian_profile,
        "1/(a^2 + sinh(b t)^2)",
    ),
}

ALIASES: dict[str, str] = {"sinh": "sinh-warp"}


def get_entry(entry_id: str) -> CatalogEntry:
    canonical = ALIASES.get(entry_id, entry_id)
    if canonical not in REGISTRY:
        raise KeyError(f"unknown catalog id: {entry_id}")
    return REGISTRY[canonical]


def build_entry(entry_id: str, params: Mapping[str, float] | None = None):
    """Instantiate a registry entry; unknown parameter names are an error."""
    entry = get_entry(entry_id)
    given = dict(params or {})
    unknown = sorted(set(given) - set(entry.defaults))
    if unknown:
        raise ValueError(f"unknown parameter(s) for {ALIASES.get(entry_id, entry_id)}: {', '.join(unknown)}")
    merged = {**entry.defaults, **given}
    return entry.builder(**merged)
