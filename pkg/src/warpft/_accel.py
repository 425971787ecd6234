"""Accelerated inner loops: numba-jitted kernels with a pure-numpy fallback.

The backend is picked once at import time.  If numba imports cleanly and the
environment variable ``WARPFT_NUMBA`` is not ``"0"``, the jitted kernels are
used; otherwise the vectorised numpy twins take over.  Both implementations
run the same algorithm on the same panel edges, so they agree to rounding.
"""
from __future__ import annotations

import math
import os
import warnings

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False
    warnings.warn("numba is not installed - falling back to the numpy backend")

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(func):
            return func

        return wrap


NUMBA_ENABLED = HAVE_NUMBA and os.environ.get("WARPFT_NUMBA", "1") != "0"

# Panel rule: fixed-order Gauss-Legendre inside every panel.  24 points hold
# machine precision up to roughly 40 radians of phase change per panel.
GL_POINTS = 24
_nodes, _weights = np.polynomial.legendre.leggauss(GL_POINTS)
GL_NODES = np.ascontiguousarray(_nodes)
GL_WEIGHTS = np.ascontiguousarray(_weights)

_CHUNK = 1 << 16


def sinh_panel_sums_numpy(k: float, l: float, b: float, edges: np.ndarray) -> complex:
    """Gauss-Legendre sum of exp(i(k t - l sinh(b t))) over consecutive panels."""
    re = 0.0
    im = 0.0
    for start in range(0, edges.size - 1, _CHUNK):
        stop = min(start + _CHUNK, edges.size - 1)
        lo = edges[start:stop]
        hi = edges[start + 1:stop + 1]
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        t = mid[:, None] + half[:, None] * GL_NODES[None, :]
        phase = k * t - l * np.sinh(b * t)
        re += float(np.dot(np.cos(phase) @ GL_WEIGHTS, half))
        im += float(np.dot(np.sin(phase) @ GL_WEIGHTS, half))
    return complex(re, im)


@njit(cache=True, fastmath=True)
def _sinh_panel_sums_jit(k, l, b, edges, nodes, weights):  # pragma: no cover - jitted
    re = 0.0
    im = 0.0
    for p in range(edges.shape[0] - 1):
        mid = 0.5 * (edges[p] + edges[p + 1])
        half = 0.5 * (edges[p + 1] - edges[p])
        sre = 0.0
        sim = 0.0
        for j in range(nodes.shape[0]):
            t = mid + half * nodes[j]
            phase = k * t - l * math.sinh(b * t)
            sre += weights[j] * math.cos(phase)
            sim += weights[j] * math.sin(phase)
        re += half * sre
        im += half * sim
    return re, im


def sinh_panel_sums_numba(k: float, l: float, b: float, edges: np.ndarray) -> complex:
    re, im = _sinh_panel_sums_jit(float(k), float(l), float(b), edges, GL_NODES, GL_WEIGHTS)
    return complex(re, im)


def sinh_panel_sums_batch_numpy(ks: np.ndarray, l: float, b: float, edges: np.ndarray) -> np.ndarray:
    """Like sinh_panel_sums but for many k at once on shared panels."""
    ks = np.asarray(ks, dtype=float)
    re = np.zeros(ks.size)
    im = np.zeros(ks.size)
    for start in range(0, edges.size - 1, _CHUNK):
        stop = min(start + _CHUNK, edges.size - 1)
        lo = edges[start:stop]
        hi = edges[start + 1:stop + 1]
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        t = mid[:, None] + half[:, None] * GL_NODES[None, :]
        base = -l * np.sinh(b * t)
        for m in range(ks.size):
            phase = ks[m] * t + base
            re[m] += float(np.dot(np.cos(phase) @ GL_WEIGHTS, half))
            im[m] += float(np.dot(np.sin(phase) @ GL_WEIGHTS, half))
    return re + 1j * im


@njit(cache=True, fastmath=True)
def _sinh_batch_uniform_jit(k0, dk, nk, l, b, edges, nodes, weights):  # pragma: no cover - jitted
    # e^{i k_m t} advanced by a complex recurrence across the uniform k grid;
    # the sinh evaluation is shared by all k
    re = np.zeros(nk)
    im = np.zeros(nk)
    pre = np.zeros(nk)
    pim = np.zeros(nk)
    for p in range(edges.shape[0] - 1):
        mid = 0.5 * (edges[p] + edges[p + 1])
        half = 0.5 * (edges[p + 1] - edges[p])
        for m in range(nk):
            pre[m] = 0.0
            pim[m] = 0.0
        for j in range(nodes.shape[0]):
            t = mid + half * nodes[j]
            w = weights[j]
            s = l * math.sinh(b * t)
            cb = math.cos(s)
            sb = -math.sin(s)
            ck = math.cos(k0 * t)
            sk = math.sin(k0 * t)
            cd = math.cos(dk * t)
            sd = math.sin(dk * t)
            cur_re = cb * ck - sb * sk
            cur_im = cb * sk + sb * ck
            for m in range(nk):
                pre[m] += w * cur_re
                pim[m] += w * cur_im
                nxt = cur_re * cd - cur_im * sd
                cur_im = cur_re * sd + cur_im * cd
                cur_re = nxt
        for m in range(nk):
            re[m] += half * pre[m]
            im[m] += half * pim[m]
    return re, im


@njit(cache=True, fastmath=True)
def _sinh_batch_generic_jit(ks, l, b, edges, nodes, weights):  # pragma: no cover - jitted
    nk = ks.shape[0]
    re = np.zeros(nk)
    im = np.zeros(nk)
    pre = np.zeros(nk)
    pim = np.zeros(nk)
    for p in range(edges.shape[0] - 1):
        mid = 0.5 * (edges[p] + edges[p + 1])
        half = 0.5 * (edges[p + 1] - edges[p])
        for m in range(nk):
            pre[m] = 0.0
            pim[m] = 0.0
        for j in range(nodes.shape[0]):
            t = mid + half * nodes[j]
            w = weights[j]
            s = l * math.sinh(b * t)
            for m in range(nk):
                phase = ks[m] * t - s
                pre[m] += w * math.cos(phase)
                pim[m] += w * math.sin(phase)
        for m in range(nk):
            re[m] += half * pre[m]
            im[m] += half * pim[m]
    return re, im


def sinh_panel_sums_batch_numba(ks: np.ndarray, l: float, b: float, edges: np.ndarray) -> np.ndarray:
    ks = np.ascontiguousarray(np.asarray(ks, dtype=float))
    if ks.size == 0:
        return np.zeros(0, dtype=complex)
    if ks.size == 1:
        dk, uniform = 0.0, True
    else:
        dk = ks[1] - ks[0]
        uniform = bool(np.all(np.abs(np.diff(ks) - dk) <= 1e-12 * max(1.0, abs(dk))))
    if uniform:
        re, im = _sinh_batch_uniform_jit(
            float(ks[0]), float(dk), ks.size, float(l), float(b), edges, GL_NODES, GL_WEIGHTS
        )
    else:
        re, im = _sinh_batch_generic_jit(ks, float(l), float(b), edges, GL_NODES, GL_WEIGHTS)
    return re + 1j * im


def phase_panel_sums_numpy(phase_fn, edges: np.ndarray) -> complex:
    """Same panel rule for an arbitrary vectorised phase callable."""
    total = 0.0 + 0.0j
    for start in range(0, edges.size - 1, _CHUNK):
        stop = min(start + _CHUNK, edges.size - 1)
        lo = edges[start:stop]
        hi = edges[start + 1:stop + 1]
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        t = mid[:, None] + half[:, None] * GL_NODES[None, :]
        phase = np.asarray(phase_fn(t), dtype=float)
        vals = (np.cos(phase) + 1j * np.sin(phase)) @ GL_WEIGHTS
        total += complex(np.dot(vals, half))
    return total


def bessel_panel_sum_numpy(nu: float, x: float, shift: float, edges: np.ndarray) -> float:
    """Gauss-Legendre sum of exp(shift - x cosh t) cos(nu t) over panels."""
    acc = 0.0
    for start in range(0, edges.size - 1, _CHUNK):
        stop = min(start + _CHUNK, edges.size - 1)
        lo = edges[start:stop]
        hi = edges[start + 1:stop + 1]
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        t = mid[:, None] + half[:, None] * GL_NODES[None, :]
        vals = np.exp(shift - x * np.cosh(t)) * np.cos(nu * t)
        acc += float(np.dot(vals @ GL_WEIGHTS, half))
    return acc


@njit(cache=True, fastmath=True)
def _bessel_panel_sum_jit(nu, x, shift, edges, nodes, weights):  # pragma: no cover - jitted
    acc = 0.0
    for p in range(edges.shape[0] - 1):
        mid = 0.5 * (edges[p] + edges[p + 1])
        half = 0.5 * (edges[p + 1] - edges[p])
        s = 0.0
        for j in range(nodes.shape[0]):
            t = mid + half * nodes[j]
            s += weights[j] * math.exp(shift - x * math.cosh(t)) * math.cos(nu * t)
        acc += half * s
    return acc


def bessel_panel_sum_numba(nu: float, x: float, shift: float, edges: np.ndarray) -> float:
    return float(_bessel_panel_sum_jit(float(nu), float(x), float(shift), edges, GL_NODES, GL_WEIGHTS))


if NUMBA_ENABLED:
    sinh_panel_sums = sinh_panel_sums_numba
    sinh_panel_sums_batch = sinh_panel_sums_batch_numba
    bessel_panel_sum = bessel_panel_sum_numba
else:
    sinh_panel_sums = sinh_panel_sums_numpy
    sinh_panel_sums_batch = sinh_panel_sums_batch_numpy
    bessel_panel_sum = bessel_panel_sum_numpy


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
