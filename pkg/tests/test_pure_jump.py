"""Pure jump functions, jump energies, staircases, and translation fitting."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from staircase_lab.energy_core import SampledFunction
from staircase_lab.pure_jump import (ALPHA0, PureJumpFunction, StaircaseSpec,
                                     canonical_staircase, j_half, jf_half,
                                     nearest_translation, pj_value,
                                     semi_entire_minimizer, staircase_params,
                                     staircase_params_general, strict_distance,
                                     translate, translate_value)


def simple_pj():
    return PureJumpFunction(0.5, ((1.0, 1.0), (2.0, -0.5)), (0.0, 3.0))


class TestPureJumpFunction:
    def test_right_continuous_values(self):
        u = simple_pj()
        assert u.value(0.5) == 0.5
        assert u.value(1.0) == 1.5  # right limit at the jump
        assert u.value(1.5) == 1.5
        assert u.value(2.0) == 1.0
        assert u.value(2.5) == 1.0

    def test_vectorized_value(self):
        u = simple_pj()
        np.testing.assert_allclose(u.value(np.array([0.5, 1.5, 2.5])),
                                   [0.5, 1.5, 1.0])

    def test_boundary_values(self):
        u = simple_pj()
        assert u.boundary_values() == (0.5, 1.0)

    def test_total_variation(self):
        u = simple_pj()
        assert u.total_variation() == pytest.approx(1.5)
        assert u.total_variation((1.5, 3.0)) == pytest.approx(0.5)

    def test_restricted(self):
        u = simple_pj()
        r = u.restricted((1.5, 3.0))
        assert r.base == pytest.approx(1.5)
        assert len(r.jumps) == 1
        assert r.value(2.5) == pytest.approx(1.0)

    def test_record_roundtrip(self):
        u = simple_pj()
        v = PureJumpFunction.from_record(u.to_record())
        assert v == u

    def test_invalid_constructions(self):
        with pytest.raises(ValueError):
            PureJumpFunction(0.0, ((1.0, 0.0),), (0.0, 2.0))  # zero height
        with pytest.raises(ValueError):
            PureJumpFunction(0.0, ((2.0, 1.0), (1.0, 1.0)), (0.0, 3.0))
        with pytest.raises(ValueError):
            PureJumpFunction(0.0, ((0.0, 1.0),), (0.0, 3.0))  # on boundary

    def test_pj_value_is_method_alias(self):
        u = simple_pj()
        assert pj_value(u, 1.5) == u.value(1.5)


class TestJHalf:
    def test_constant_zero(self):
        assert j_half(PureJumpFunction(2.0, (), (0.0, 1.0))) == 0.0

    def test_known_heights(self):
        u = PureJumpFunction(0.0, ((0.5, 1.0), (1.5, 4.0)), (0.0, 2.0))
        assert j_half(u) == pytest.approx(3.0, rel=1e-15)

    def test_merge_subadditivity(self):
        # merging co-located jumps J1, J2 into J1+J2 never increases j_half
        u = PureJumpFunction(0.0, ((1.0, 0.7), (1.0 + 1e-9, 0.4)), (0.0, 2.0))
        merged = PureJumpFunction(0.0, ((1.0, 1.1),), (0.0, 2.0))
        assert j_half(merged) <= j_half(u) + 1e-12

    def test_window_filtering(self):
        u = PureJumpFunction(0.0, ((0.5, 1.0), (1.5, 4.0)), (0.0, 2.0))
        assert j_half(u, (1.0, 2.0)) == pytest.approx(2.0)


class TestJFHalf:
    def test_staircase_fidelity_closed_form(self):
        # one full period of the canonical staircase against the line M x:
        # per step of length 2H the exact fidelity is M^2 (2H)^3 / 12
        beta, M = 1.0, 1.0
        H, V = staircase_params(beta, M)
        u = canonical_staircase(H, V, (-H, H))
        val = jf_half(u, 0.0, beta, M, (-H, H))
        assert val == pytest.approx(beta * M * M * (2 * H) ** 3 / 12.0, rel=1e-12)

    def test_alpha_term(self):
        u = PureJumpFunction(0.0, ((0.5, 2.0),), (0.0, 1.0))
        v0 = jf_half(u, 0.0, 1e-30, 0.0)
        va = jf_half(u, 3.0, 1e-30, 0.0)
        assert va - v0 == pytest.approx(3.0 * math.sqrt(2.0), rel=1e-9)

    def test_purejump_forcing_exact(self):
        # u and f equal pure-jump functions: fidelity 0, only alpha term
        f = PureJumpFunction(0.0, ((0.5, 1.0),), (0.0, 1.0))
        val = jf_half(f, 2.0, 5.0, f)
        assert val == pytest.approx(2.0, rel=1e-12)

    def test_purejump_forcing_offset(self):
        f = PureJumpFunction(0.0, (), (0.0, 1.0))
        u = PureJumpFunction(0.3, (), (0.0, 1.0))
        assert jf_half(u, 1.0, 2.0, f) == pytest.approx(2.0 * 0.09, rel=1e-12)


class TestStaircase:
    def test_canonical_values(self):
        # S_{H,V}(x) = V * 2*floor((x/H+1)/2): plateaus of width 2H centred
        # at even multiples of H, jumps 2V at odd multiples of H
        H, V = 1.5, 0.7
        assert translate_value(H, V, "oblique", 0.0, 0.0) == 0.0
        assert translate_value(H, V, "oblique", 0.0, H) == pytest.approx(2 * V)
        assert translate_value(H, V, "oblique", 0.0, -H + 1e-12) == pytest.approx(0.0)
        assert translate_value(H, V, "oblique", 0.0, 2 * H) == pytest.approx(2 * V)
        assert translate_value(H, V, "oblique", 0.0, 3 * H) == pytest.approx(4 * V)

    def test_plateau_midpoints_on_line(self):
        H, V = 0.8, -0.3
        for k in range(-3, 4):
            x = 2 * k * H
            assert translate_value(H, V, "oblique", 0.0, x) == pytest.approx(
                V * x / H, abs=1e-12)

    def test_periodicity(self):
        H, V = 1.1, 0.4
        x = np.linspace(-4, 4, 97)
        lhs = translate_value(H, V, "oblique", 0.0, x + 2 * H)
        rhs = np.asarray(translate_value(H, V, "oblique", 0.0, x)) + 2 * V
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    def test_oblique_endpoint_identification(self):
        # tau0 = +1 and -1 give the same oblique translate
        H, V = 1.0, 0.5
        x = np.linspace(-3.3, 3.3, 201)
        a = translate_value(H, V, "oblique", 1.0, x)
        b = translate_value(H, V, "oblique", -1.0, x)
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_horizontal_vertical_endpoint_match(self):
        H, V = 1.0, 0.5
        x = np.linspace(-3.3, 3.3, 201)
        h1 = translate_value(H, V, "horizontal", 1.0, x)
        v1 = translate_value(H, V, "vertical", 1.0, x)
        np.testing.assert_allclose(h1, np.asarray(v1) - 0.0, atol=1e-12)

    def test_translate_window_jumps(self):
        H, V = 1.0, 0.5
        pj = translate(H, V, "oblique", 0.0, (-2.5, 2.5))
        np.testing.assert_allclose(pj.locations, [-1.0, 1.0])
        np.testing.assert_allclose(pj.heights, [2 * V, 2 * V])

    def test_zero_V_degenerate(self):
        pj = translate(1.0, 0.0, "oblique", 0.3, (-1.0, 1.0))
        assert pj.jumps == ()
        assert pj.value(0.5) == 0.0


class TestStaircaseParams:
    def test_frozen_H(self):
        H, V = staircase_params(1.0, 1.0)
        assert H == pytest.approx(24.0 ** 0.2, rel=1e-15)
        assert H == pytest.approx(1.888175022589804, rel=1e-14)
        assert V == pytest.approx(H)

    def test_scaling_in_beta_and_slope(self):
        H1, _ = staircase_params(1.0, 1.0)
        H2, _ = staircase_params(2.0, 1.0)
        assert H2 == pytest.approx(H1 * 2.0 ** (-0.4), rel=1e-13)
        H3, V3 = staircase_params(1.0, -2.0)
        assert H3 == pytest.approx(H1 * 2.0 ** (-0.6), rel=1e-13)
        assert V3 == pytest.approx(-2.0 * H3)

    def test_zero_slope(self):
        assert staircase_params(1.0, 0.0) == (1.0, 0.0)

    def test_alpha0_frozen(self):
        assert ALPHA0 == pytest.approx(9.237604307034013, rel=1e-15)
        # second route: 4*sqrt(2/3) * 4^(3/4)
        assert ALPHA0 == pytest.approx(4 * math.sqrt(2 / 3) * 4 ** 0.75, rel=1e-14)

    def test_general_matches_special_at_alpha0(self):
        for beta in (0.5, 1.0, 2.0):
            for M in (0.5, 1.0, -2.0):
                Hs, Vs = staircase_params(beta, M)
                Hg, Vg = staircase_params_general(ALPHA0, beta, M)
                assert Hg == pytest.approx(Hs, rel=1e-13)
                assert Vg == pytest.approx(Vs, rel=1e-13)

    def test_general_frozen(self):
        H, _ = staircase_params_general(1.0, 1.0, 1.0)
        assert H == pytest.approx(0.5 * 9.0 ** 0.2, rel=1e-14)
        assert H == pytest.approx(0.7759227869576799, rel=1e-14)


class TestSemiEntireMinimizer:
    def test_zero_slope(self):
        u = semi_entire_minimizer(1.0, 1.0, 0.0, 5.0)
        assert u.jumps == ()
        assert u.base == 0.0

    def test_first_jump_location(self):
        alpha, beta, M = ALPHA0, 1.0, 1.0
        H, V = staircase_params_general(alpha, beta, M)
        z0 = math.sqrt(5.0 / 3.0) * H
        u = semi_entire_minimizer(alpha, beta, M, 30.0)
        assert u.base == pytest.approx(M * z0, rel=1e-13)
        assert float(u.locations[0]) == pytest.approx(z0 + H, rel=1e-12)
        # subsequent jumps every 2H with height 2V
        np.testing.assert_allclose(np.diff(u.locations), 2 * H, rtol=1e-12)
        np.testing.assert_allclose(u.heights, 2 * V, rtol=1e-12)


class TestStrictDistance:
    def test_self_distance_small(self):
        H, V = staircase_params(1.0, 1.0)
        spec = StaircaseSpec(H, V, "oblique", 0.0)
        u = SampledFunction.from_callable(
            lambda x: np.asarray(spec.value(x), dtype=float), -5.0, 5.0, 8193)
        # avoid jumps at +-H, +-3H: window endpoints at plateau interiors
        l1, tv = strict_distance(u, spec.to_pure_jump((-4.0, 4.0)), (-3.9, 3.9))
        assert l1 <= 2 * u.spacing * 8 * 2 * V + 1e-9
        assert tv <= 1e-9

    def test_constant_offset(self):
        v = PureJumpFunction(0.0, ((0.5, 1.0),), (0.0, 1.0))
        u = SampledFunction.from_callable(
            lambda x: np.asarray(v.value(x), dtype=float) + 0.25, 0.0, 1.0, 4097)
        l1, tv = strict_distance(u, v, (0.1, 0.9))
        assert l1 == pytest.approx(0.25 * 0.8, rel=1e-3)
        assert tv == pytest.approx(0.0, abs=1e-12)

    def test_endpoint_on_jump_error(self):
        v = PureJumpFunction(0.0, ((0.5, 1.0),), (0.0, 1.0))
        u = SampledFunction.from_callable(lambda x: 0 * x, 0.0, 1.0, 257)
        with pytest.raises(ValueError, match="shift the window"):
            strict_distance(u, v, (0.5, 0.9))


class TestNearestTranslation:
    def test_self_fit_recovers_phase(self):
        H, V = staircase_params(1.0, 1.0)
        tau_true = 0.3
        spec = StaircaseSpec(H, V, "oblique", tau_true)
        u = SampledFunction.from_callable(
            lambda x: np.asarray(spec.value(x), dtype=float), -6.0, 6.0, 16385)
        tau, dist = nearest_translation(u, H, V, "oblique", (-5.0, 5.0))
        assert tau == pytest.approx(tau_true, abs=1e-2)
        assert dist < 0.1

    def test_degenerate_V(self):
        u = SampledFunction.from_callable(lambda x: 0 * x + 0.5, 0.0, 1.0, 257)
        tau, dist = nearest_translation(u, 1.0, 0.0, "oblique")
        assert tau == 0.0
        assert dist == pytest.approx(0.5, rel=1e-10)


@settings(max_examples=50, deadline=None)
@given(base=st.floats(-2, 2),
       heights=st.lists(st.floats(0.1, 2.0), min_size=0, max_size=5))
def test_tv_equals_sum_abs_heights(base, heights):
    locs = np.linspace(0.2, 2.8, len(heights))
    signs = [1 if i % 2 else -1 for i in range(len(heights))]
    jumps = tuple((float(s), sgn * h) for s, sgn, h in zip(locs, signs, heights))
    u = PureJumpFunction(base, jumps, (0.0, 3.0))
    assert u.total_variation() == pytest.approx(sum(heights), rel=1e-12, abs=1e-12)
    lo, hi = u.boundary_values()
    assert hi - lo == pytest.approx(sum(h for _, h in jumps), rel=1e-12, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(tau0=st.floats(-1, 1), H=st.floats(0.3, 2.0), V=st.floats(-1.5, 1.5))
def test_translate_value_agrees_with_pj(tau0, H, V):
    window = (-4.0, 4.0)
    pj = translate(H, V, "oblique", tau0, window)
    xs = np.linspace(-3.9, 3.9, 41)
    direct = np.asarray(translate_value(H, V, "oblique", tau0, xs), dtype=float)
    # skip sample points that sit numerically on a jump location
    locs = pj.locations
    if locs.size:
        near = np.min(np.abs(xs[:, None] - locs[None, :]), axis=1) < 1e-9
    else:
        near = np.zeros(xs.size, dtype=bool)
    np.testing.assert_allclose(pj.value(xs)[~near], direct[~near], atol=1e-10)
