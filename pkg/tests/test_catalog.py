"""Tests for the closed-form transform catalog and its registry."""
import math

import numpy as np
import pytest

from warpft.catalog import (
    ALIASES,
    REGISTRY,
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
from warpft.funcspace import Profile, Warp


# ------------------------------------------------------------ plain Lorentzian


def test_lorentzian_hat_known_point():
    assert lorentzian_hat(1.0, 1.0) == pytest.approx(math.pi / math.e, rel=1e-15)
    assert lorentzian_hat(2.0, 0.0) == pytest.approx(math.pi / 2.0, rel=1e-15)


def test_lorentzian_accepts_arrays_and_rejects_bad_scale():
    ks = np.array([-1.0, 0.0, 1.0])
    out = lorentzian_hat(0.5, ks)
    assert out.shape == (3,)
    assert out[0] == out[2]  # even
    assert lorentzian_time(2.0, 0.0) == pytest.approx(0.25)
    with pytest.raises(ValueError, match="positive"):
        lorentzian_hat(0.0, 1.0)
    with pytest.raises(ValueError, match="positive"):
        lorentzian_time(-1.0, 1.0)


def test_g_time_even_and_decaying():
    p = SinhLorentzParams(1.0, 1.0)
    assert g_time(p, 3.0) == pytest.approx(1.0 / (1.0 + np.sinh(3.0) ** 2), rel=1e-15)
    assert g_time(p, -3.0) == g_time(p, 3.0)
    assert g_time(p, 6.0) < g_time(p, 3.0)


def test_sinh_lorentz_params_validation():
    with pytest.raises(ValueError, match="a must be positive"):
        SinhLorentzParams(0.0, 1.0)
    with pytest.raises(ValueError, match="b must be positive"):
        SinhLorentzParams(1.0, -2.0)


# ------------------------------------------------------------ kernel closed form


def test_sinh_kernel_closed_matches_bessel_product():
    # H(k, l) = (2/b) e^{sgn(l) k pi / 2b} K_{ik/b}(|l|); frozen K_{i1}(1)
    val = sinh_kernel_closed(1.0, 1.0, 1.0)
    ref = 2.0 * math.exp(math.pi / 2.0) * 0.28942803702599213
    assert val.imag == 0.0
    assert val.real == pytest.approx(ref, rel=1e-11)


def test_sinh_kernel_closed_sign_asymmetry():
    plus = sinh_kernel_closed(1.0, 1.0, 1.0).real
    minus = sinh_kernel_closed(1.0, 1.0, -1.0).real
    assert plus / minus == pytest.approx(math.exp(math.pi), rel=1e-11)


def test_sinh_kernel_closed_rejects_degenerate_inputs():
    with pytest.raises(ValueError, match="positive"):
        sinh_kernel_closed(0.0, 1.0, 1.0)
    with pytest.raises(ValueError, match="undefined at l=0"):
        sinh_kernel_closed(1.0, 1.0, 0.0)


# --------------------------------------------------------- composed transform


def test_unit_parameters_reduce_to_elementary_form():
    p = SinhLorentzParams(1.0, 1.0)
    assert sinh_lorentzian_hat(p, 0.0) == 2.0
    for k in (0.5, 1.0, 2.0, 3.0):
        ref = math.pi * k / math.sinh(math.pi * k / 2.0)
        assert sinh_lorentzian_hat(p, k) == pytest.approx(ref, rel=1e-13)


def test_evenness_across_branches():
    for a in (0.5, 1.0, 2.0):
        p = SinhLorentzParams(a, 1.3)
        for k in (0.7, 2.0, 5.5):
            assert sinh_lorentzian_hat(p, -k) == pytest.approx(
                sinh_lorentzian_hat(p, k), rel=1e-13
            )


def test_positive_on_grid_for_small_a():
    for a in (0.3, 0.9, 1.0):
        p = SinhLorentzParams(a, 1.0)
        ks = np.linspace(0.0, 8.0, 33)
        assert all(sinh_lorentzian_hat(p, float(k)) > 0.0 for k in ks)


def test_sign_change_appears_above_a_equals_one():
    # sin(nu * arccosh(a)) flips sign once nu * arccosh(a) passes pi
    p = SinhLorentzParams(2.0, 1.0)
    assert sinh_lorentzian_hat(p, 1.0) > 0.0
    assert sinh_lorentzian_hat(p, 2.5) < 0.0


def test_branch_continuity_near_a_equals_one():
    for k in (0.5, 2.0):
        mid = sinh_lorentzian_hat(SinhLorentzParams(1.0, 1.0), k)

        def slope(eps):
            hi = sinh_lorentzian_hat(SinhLorentzParams(1.0 + eps, 1.0), k)
            lo = sinh_lorentzian_hat(SinhLorentzParams(1.0 - eps, 1.0), k)
            return abs(hi - mid) / eps, abs(lo - mid) / eps

        s3 = slope(1e-3)
        s4 = slope(1e-4)
        for i in range(2):
            assert s4[i] == pytest.approx(s3[i], rel=0.15)
            assert s4[i] < 10.0


def test_large_k_does_not_overflow():
    p = SinhLorentzParams(0.5, 1.0)
    val = sinh_lorentzian_hat(p, 300.0)
    assert np.isfinite(val)
    assert val >= 0.0


# ------------------------------------------------------------ Laplace identity


def test_laplace_closed_identity_with_composed_transform():
    # (2 cosh(nu pi / 2) / (a b)) * laplace(a, nu) == ghat(nu b)
    for a in (0.5, 1.0, 1.5):
        for b in (1.0, 2.0):
            for nu in (0.3, 1.0, 2.5):
                lhs = (
                    2.0
                    * math.cosh(nu * math.pi / 2.0)
                    / (a * b)
                    * bessel_laplace_closed(a, nu)
                )
                rhs = sinh_lorentzian_hat(SinhLorentzParams(a, b), nu * b)
                assert lhs == pytest.approx(rhs, rel=1e-12)


def test_laplace_closed_limit_and_symmetry():
    # nu -> 0 limit is arccos(a)/sqrt(1-a^2), branch-continued
    s = math.acos(0.5)
    assert bessel_laplace_closed(0.5, 0.0) == pytest.approx(s / math.sin(s), rel=1e-12)
    assert bessel_laplace_closed(1.0, 0.0) == pytest.approx(1.0, rel=1e-12)
    sigma = math.acosh(2.0)
    assert bessel_laplace_closed(2.0, 0.0) == pytest.approx(
        sigma / math.sinh(sigma), rel=1e-12
    )
    assert bessel_laplace_closed(0.7, -1.2) == bessel_laplace_closed(0.7, 1.2)
    with pytest.raises(ValueError, match="positive"):
        bessel_laplace_closed(0.0, 1.0)


# ---------------------------------------------------------------------- registry


def test_registry_contents():
    assert set(REGISTRY) == {"lorentzian", "sinh-warp", "sinh-lorentzian"}
    assert ALIASES["sinh"] == "sinh-warp"
    assert get_entry("sinh") is REGISTRY["sinh-warp"]
    assert get_entry("lorentzian").kind == "profile"
    for entry in REGISTRY.values():
        assert entry.summary


def test_get_entry_unknown_id():
    with pytest.raises(KeyError, match="unknown catalog id"):
        get_entry("gaussians")


def test_build_entry_profiles_and_warps():
    prof = build_entry("lorentzian", {"a": 0.5})
    assert isinstance(prof, Profile)
    assert prof.freq_eval(0.0) == pytest.approx(2.0 * math.pi, rel=1e-14)
    warp = build_entry("sinh", {"b": 2.0})
    assert isinstance(warp, Warp)
    assert warp.params == (2.0,)
    composed = build_entry("sinh-lorentzian")
    assert composed.time_eval(0.0) == pytest.approx(1.0)


def test_build_entry_rejects_unknown_parameters():
    with pytest.raises(ValueError, match="unknown parameter"):
        build_entry("lorentzian", {"q": 1.0})


def test_profile_factories_set_decay_hints():
    prof = make_lorentzian_profile(2.0)
    assert prof.freq_decay.kind == "exponential"
    assert prof.freq_decay.rate == pytest.approx(2.0)
    assert prof.time_decay.kind == "polynomial"

    comp = make_sinh_lorentzian_profile(0.5, 1.0)
    assert comp.time_decay.rate == pytest.approx(2.0)
    # ghat ~ e^{-|k|(pi/2 - arccos a)/b} for a < 1
    assert comp.freq_decay.rate == pytest.approx(math.pi / 2.0 - math.acos(0.5))
