r"""Modified Bessel function of imaginary order.

For real ``nu`` and ``x > 0``::

    K_{i nu}(x) = \int_0^\infty e^{-x cosh t} cos(nu t) dt

(imaginary-order case of the cosh integral representation, see
https://dlmf.nist.gov/10.32).  The function is real-valued and even in nu.
The integrand decays doubly exponentially, so the integral is truncated
where ``x cosh t`` exceeds ~46 decades of log and integrated on panels
sized by the combined variation ``|nu| + x sinh t``.

scipy.special.kv does not accept imaginary orders, hence this module.
"""
from __future__ import annotations

import math

import numpy as np

from . import _accel
from .oscillatory import QuadratureBudgetError

__all__ = ["besselk_imag", "besselk_imag_scaled"]

_X_MIN = 1e-6
_NU_MAX = 300.0
_MAX_PANELS = 2_000_000


def _integrate(nu: float, x: float, shift: float, rel_tol: float) -> float:
    t_max = math.acosh(max(46.0 / x, 2.0))
    absd = lambda t: nu + x * np.sinh(t)

    dphi = 8.0
    h_max = 1.0
    from .oscillatory import _panel_edges  # same panel policy as the kernel quadrature

    edges = _panel_edges(0.0, t_max, absd, dphi, h_max)
    coarse = _accel.bessel_panel_sum(nu, x, shift, edges)
    panels = edges.size - 1
    for _ in range(8):
        dphi *= 0.5
        h_max *= 0.5
        edges = _panel_edges(0.0, t_max, absd, dphi, h_max)
        panels += edges.size - 1
        if panels > _MAX_PANELS:
            raise QuadratureBudgetError(
                "Bessel quadrature panel budget exhausted", best_estimate=coarse
            )
        fine = _accel.bessel_panel_sum(nu, x, shift, edges)
        err = abs(fine - coarse)
        coarse = fine
        if err <= rel_tol * max(abs(fine), 1e-280):
            return fine
    # K_{i nu} has zeros in x, so near one of them no relative tolerance is
    # attainable; if refinement has stagnated at the rounding noise of the
    # panel sums, the value is machine-accurate absolutely and is returned.
    noise_floor = 64.0 * np.finfo(float).eps * t_max * math.exp(shift - x)
    if err <= noise_floor:
        return fine
    raise QuadratureBudgetError(
        "Bessel quadrature did not converge", best_estimate=coarse, err_bound=err
    )


def besselk_imag(nu: float, x: float, rel_tol: float = 1e-10) -> float:
    """K_{i nu}(x) for real nu, x >= 1e-6.

    Parameters
    ----------
    nu : real order parameter (the function is even in nu).
    x : argument; below 1e-6 the small-argument oscillation in log(x)
        approaches the logarithmic divergence region and is refused.
    rel_tol : requested relative accuracy, at least 1e-13.

    Returns
    -------
    float.  For |nu| large the true value is ~e^{-pi nu / 2} and cancellation
    limits the attainable relative accuracy; |nu| > 300 is refused.
    """
    nu = abs(float(nu))
    x = float(x)
    if x < _X_MIN:
        raise ValueError("argument below supported range (logarithmic divergence region)")
    if rel_tol < 1e-13:
        raise ValueError("rel_tol below supported range")
    if nu > _NU_MAX:
        raise ValueError("order too large (result underflows)")
    return _integrate(nu, x, 0.0, rel_tol)


def besselk_imag_scaled(nu: float, x: float, rel_tol: float = 1e-10) -> float:
    """e^x K_{i nu}(x); stable for large x (tends to sqrt(pi / 2x))."""
    nu = abs(float(nu))
    x = float(x)
    if x < _X_MIN:
        raise ValueError("argument below supported range (logarithmic divergence region)")
    if rel_tol < 1e-13:
        raise ValueError("rel_tol below supported range")
    if nu > _NU_MAX:
        raise ValueError("order too large (result underflows)")
    return _integrate(nu, x, x, rel_tol)
