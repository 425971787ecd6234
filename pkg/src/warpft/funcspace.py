"""Signals, warps and certificates.

A warp is a change of time variable u(t).  The rest of the package only
trusts a warp after it has been probed on a grid: monotonicity, a positive
lower bound on |u'| and agreement between the supplied derivative and a
finite-difference estimate are checked and recorded in a certificate.  The
certificate is heuristic (it looks at finitely many points) and is labelled
as such.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

__all__ = [
    "DecayHint",
    "Profile",
    "SampledSignal",
    "Spectrum",
    "Warp",
    "WarpCertificate",
    "compose_signal",
    "composition_contraction_check",
    "l2_norm",
    "sinh_warp",
    "validate_warp",
]


@dataclass(frozen=True)
class DecayHint:
    """How fast a function falls off, used to pick truncation points.

    kind is one of "exponential" (|f| ~ C exp(-rate |t|)), "polynomial"
    (|f| ~ C |t|**-order) or "compact" (zero outside [-radius, radius]).
    """

    kind: str
    rate: Optional[float] = None
    order: Optional[int] = None
    radius: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("exponential", "polynomial", "compact"):
            raise ValueError(f"unknown decay kind {self.kind!r}")
        if self.kind == "exponential" and (self.rate is None or self.rate <= 0):
            raise ValueError("exponential decay needs a positive rate")
        if self.kind == "polynomial" and (self.order is None or self.order < 2):
            raise ValueError("polynomial decay needs order >= 2")
        if self.kind == "compact" and (self.radius is None or self.radius <= 0):
            raise ValueError("compact support needs a positive radius")


@dataclass(frozen=True)
class Profile:
    """A function known in the time domain, the frequency domain, or both.

    Both evaluators are vectorised callables; either may be None.  The decay
    hints describe the corresponding domain and drive truncation choices in
    the quadrature routines.
    """

    label: str
    time_eval: Optional[Callable] = None
    freq_eval: Optional[Callable] = None
    time_decay: Optional[DecayHint] = None
    freq_decay: Optional[DecayHint] = None


@dataclass(frozen=True)
class WarpCertificate:
    """Outcome of probing a warp on a uniform grid.

    All fields are evidence from finitely many probe points; a valid
    certificate is a heuristic statement, not a proof.
    """

    probe_interval: tuple[float, float]
    probe_count: int
    min_abs_deriv: float
    deriv_sign_constant: bool
    properness_witness: float
    valid: bool
    reason: Optional[str] = None
    heuristic: bool = True


@dataclass(frozen=True)
class Warp:
    """Time warp u with its derivative u'.

    eval and deriv must accept numpy arrays.  kind/params tag catalog warps
    so accelerated code paths can recognise them; odd marks u(-t) = -u(t),
    which downstream code may exploit.
    """

    eval: Callable
    deriv: Callable
    label: str = "warp"
    kind: Optional[str] = None
    params: tuple = ()
    odd: bool = False
    certificate: Optional[WarpCertificate] = None


def sinh_warp(b: float = 1.0) -> Warp:
    """The catalog warp u(t) = sinh(b t) with u'(t) = b cosh(b t)."""
    if b <= 0:
        raise ValueError("warp rate b must be positive")
    b = float(b)
    return Warp(
        eval=lambda t: np.sinh(b * t),
        deriv=lambda t: b * np.cosh(b * t),
        label=f"sinh(b={b:g})",
        kind="sinh",
        params=(b,),
        odd=True,
    )


@dataclass(frozen=True)
class SampledSignal:
    """Values on a uniform grid."""

    grid: np.ndarray
    values: np.ndarray
    spacing: float = field(init=False)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values)
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError("empty domain")
        if values.shape != grid.shape:
            raise ValueError("values and grid shapes differ")
        if grid.size == 1:
            spacing = 0.0
        else:
            steps = np.diff(grid)
            spacing = float(steps[0])
            if spacing <= 0 or not np.allclose(steps, spacing, rtol=1e-9, atol=0):
                raise ValueError("grid spacing not uniform")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "spacing", spacing)


@dataclass(frozen=True)
class Spectrum:
    """Frequency-domain samples with per-point absolute error estimates."""

    kgrid: np.ndarray
    values: np.ndarray
    err_estimates: np.ndarray = None
    label: str = ""

    def __post_init__(self):
        kgrid = np.asarray(self.kgrid, dtype=float)
        values = np.asarray(self.values)
        if kgrid.ndim != 1 or kgrid.size == 0:
            raise ValueError("empty domain")
        if values.shape != kgrid.shape:
            raise ValueError("values and kgrid shapes differ")
        if self.err_estimates is None:
            errs = np.zeros(kgrid.shape)
        else:
            errs = np.asarray(self.err_estimates, dtype=float)
            if errs.shape != kgrid.shape:
                raise ValueError("err_estimates and kgrid shapes differ")
            if np.any(errs < 0):
                raise ValueError("err_estimates must be nonnegative")
        object.__setattr__(self, "kgrid", kgrid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "err_estimates", errs)


def l2_norm(signal: SampledSignal) -> float:
    """Discrete L2 norm sqrt(h * sum |v|^2) of a sampled signal."""
    if signal.grid.size == 0:
        raise ValueError("empty domain")
    return float(np.sqrt(signal.spacing * np.sum(np.abs(signal.values) ** 2)))


def validate_warp(warp: Warp, interval: tuple[float, float], n_probes: int = 257) -> WarpCertificate:
    """Probe a warp and issue a certificate.

    Checks that u' keeps one sign on the probe grid, records min |u'|, and
    compares the supplied derivative against a central finite difference.
    A sign change or derivative mismatch invalidates the certificate (with
    reason); it does not raise.
    """
    a, b = float(interval[0]), float(interval[1])
    if not (a < b):
        raise ValueError("empty interval")
    if n_probes < 16:
        raise ValueError("n_probes must be at least 16")

    t = np.linspace(a, b, n_probes)
    d = np.asarray(warp.deriv(t), dtype=float)

    signs = np.sign(d)
    sign_constant = bool(np.all(signs == signs[0]) and signs[0] != 0)
    min_abs = float(np.min(np.abs(d)))
    witness = float(min(abs(d[0]), abs(d[-1])))

    # derivative consistency against a central difference
    h = 1e-4 * max(1.0, (b - a) / 20.0)
    fd = (np.asarray(warp.eval(t + h), dtype=float) - np.asarray(warp.eval(t - h), dtype=float)) / (2 * h)
    scale = 1.0 + np.max(np.abs(d))
    deriv_ok = bool(np.max(np.abs(fd - d)) <= 1e-5 * scale)

    valid = True
    reason = None
    if not deriv_ok:
        valid, reason = False, "deriv does not match eval"
    elif not sign_constant:
        valid, reason = False, "u not monotone on probe"
    elif min_abs <= 0.0:
        valid, reason = False, "u' vanishes on probe"

    return WarpCertificate(
        probe_interval=(a, b),
        probe_count=n_probes,
        min_abs_deriv=min_abs,
        deriv_sign_constant=sign_constant,
        properness_witness=witness,
        valid=valid,
        reason=reason,
    )


def compose_signal(profile: Profile, warp: Warp, grid: np.ndarray) -> SampledSignal:
    """Sample f(u(t)) on a uniform grid."""
    if profile.time_eval is None:
        raise ValueError("profile has no time-domain evaluator")
    grid = np.asarray(grid, dtype=float)
    return SampledSignal(grid=grid, values=np.asarray(profile.time_eval(warp.eval(grid))))


class ContractionResult(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def composition_contraction_check(
    f_a: Callable,
    f_b: Callable,
    warp: Warp,
    C: float,
    *,
    slack: float = 1e-6,
    certificate: Optional[WarpCertificate] = None,
    composed_half_width: float = 8.0,
    plain_half_width: float = 40.0,
    samples: int = 40001,
) -> ContractionResult:
    """Check ||f_a(u(.)) - f_b(u(.))||^2 <= (1/C) ||f_a - f_b||^2.

    The inequality holds whenever |u'| >= C on the line and u is a C^1
    bijection; this routine verifies it numerically for two concrete
    signals.  Both sides are discrete L2 norms on uniform grids wide enough
    that the tails of the (decaying) inputs are negligible; the right-hand
    side carries the multiplicative slack to absorb discretisation error.

    Returns (lhs, rhs, holds) with lhs the squared composed difference norm
    and rhs = (1/C) * squared plain difference norm.
    """
    if C <= 0:
        raise ValueError("C must be positive")
    cert = certificate
    if cert is None:
        cert = warp.certificate
    if cert is None:
        cert = validate_warp(warp, (-composed_half_width, composed_half_width), 1025)
    if not cert.valid or cert.min_abs_deriv < C * (1 - 1e-12):
        raise ValueError("warp hypotheses not certified")

    t1 = np.linspace(-composed_half_width, composed_half_width, samples)
    u = np.asarray(warp.eval(t1), dtype=float)
    diff_composed = np.asarray(f_a(u)) - np.asarray(f_b(u))
    lhs = float((t1[1] - t1[0]) * np.sum(np.abs(diff_composed) ** 2))

    t2 = np.linspace(-plain_half_width, plain_half_width, samples)
    diff_plain = np.asarray(f_a(t2)) - np.asarray(f_b(t2))
    rhs = float((t2[1] - t2[0]) * np.sum(np.abs(diff_plain) ** 2)) / C

    return ContractionResult(lhs=lhs, rhs=rhs, holds=lhs <= rhs * (1 + slack))
