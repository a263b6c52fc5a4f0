"""Blow-up extraction, staircase fitting, and varifold pairings."""

import math

import numpy as np
import pytest

from staircase_lab.blowup_analysis import (extract_blowup, fit_staircase,
                                           lowres_blowup, varifold_limit,
                                           varifold_pair)
from staircase_lab.blowup_analysis import test_function as phi_catalog
from staircase_lab.energy_core import SampledFunction, omega
from staircase_lab.pure_jump import StaircaseSpec, staircase_params


def synthetic_minimizer(eps, beta=1.0, slope=1.0, tau0=0.0, n=65537):
    """Forcing slope*x with an exact staircase microstructure at scale omega."""
    w = omega(eps)
    H, V = staircase_params(beta, slope)
    spec = StaircaseSpec(H, V, "oblique", tau0)

    def u(x):
        return slope * 0.5 + w * np.asarray(spec.value((x - 0.5) / w), dtype=float)

    return SampledFunction.from_callable(u, 0.0, 1.0, n), spec


class TestExtractBlowup:
    def test_fake_true_differ_by_constant(self):
        eps = 0.05
        u, _ = synthetic_minimizer(eps)
        f = SampledFunction.from_callable(lambda x: x, 0.0, 1.0, u.n)
        fake = extract_blowup(u, f, 0.5, eps, 4.0, "fake")
        true = extract_blowup(u, f, 0.5, eps, 4.0, "true")
        diff = fake.profile.values - true.profile.values
        assert np.max(diff) - np.min(diff) < 1e-12

    def test_profile_window(self):
        eps = 0.05
        u, _ = synthetic_minimizer(eps)
        f = SampledFunction.from_callable(lambda x: x, 0.0, 1.0, u.n)
        b = extract_blowup(u, f, 0.5, eps, 3.0, "fake")
        assert b.profile.left == pytest.approx(-3.0)
        assert b.profile.right == pytest.approx(3.0)
        assert b.scale == pytest.approx(omega(eps))

    def test_window_exceeding_domain_raises(self):
        eps = 0.05
        u, _ = synthetic_minimizer(eps, n=8193)
        f = SampledFunction.from_callable(lambda x: x, 0.0, 1.0, u.n)
        with pytest.raises(ValueError, match="feasible"):
            extract_blowup(u, f, 0.5, eps, 1e6, "fake")

    def test_fake_blowup_of_exact_staircase_is_staircase(self):
        eps = 0.05
        u, spec = synthetic_minimizer(eps)
        f = SampledFunction.from_callable(lambda x: x, 0.0, 1.0, u.n)
        b = extract_blowup(u, f, 0.5, eps, 4.0, "fake")
        y = b.profile.x
        target = np.asarray(spec.value(y), dtype=float)
        # interpolation error concentrates at jumps; compare off-jump samples
        off = np.min(np.abs(((y - spec.H) % (2 * spec.H))[:, None]
                            - np.array([[0.0]])), axis=1) > 0.05
        assert np.median(np.abs(b.profile.values - target)[off]) < 0.02

    def test_lowres_blowup_recenters(self):
        u = SampledFunction.from_callable(lambda x: x ** 2, 0.0, 1.0, 4097)
        b = lowres_blowup(u, 0.5, 0.1, 2.0)
        assert abs(float(b.profile.interp(0.0))) < 1e-5


class TestFitStaircase:
    def test_self_fit(self):
        eps, tau_true = 0.05, 0.25
        u, spec = synthetic_minimizer(eps, tau0=tau_true)
        f = SampledFunction.from_callable(lambda x: x, 0.0, 1.0, u.n)
        b = extract_blowup(u, f, 0.5, eps, 5.0, "fake")
        fit = fit_staircase(b, 1.0, 1.0, kinds=("oblique",))
        assert fit.best_kind == "oblique"
        assert fit.tau0_star == pytest.approx(tau_true, abs=2e-2)
        assert fit.distance < 0.2

    def test_translation_equivariance(self):
        # shifting the profile by 2H along the oblique line leaves the fit
        # distance unchanged
        eps = 0.02
        H, V = staircase_params(1.0, 1.0)
        u, spec = synthetic_minimizer(eps, n=262145)
        f = SampledFunction.from_callable(lambda x: x, 0.0, 1.0, u.n)
        w = omega(eps)
        b0 = extract_blowup(u, f, 0.5, eps, 5.0, "fake")
        fit0 = fit_staircase(b0, 1.0, 1.0, kinds=("oblique",))
        # same staircase seen 2H*w to the right: center shift along the line
        c1 = 0.5 + 2 * H * w
        f1 = SampledFunction.from_callable(lambda x: x, 0.0, 1.0, u.n)
        b1 = extract_blowup(u, f1, c1, eps, 5.0, "fake")
        fit1 = fit_staircase(b1, 1.0, 1.0, kinds=("oblique",))
        assert fit1.distance == pytest.approx(fit0.distance, abs=5e-2)

    def test_zero_slope_fits_zero(self):
        prof = SampledFunction.from_callable(lambda x: 0 * x + 0.1, -4.0, 4.0, 1025)
        from staircase_lab.blowup_analysis import BlowUp
        b = BlowUp("fake", 0.5, 0.05, prof, 0.05)
        fit = fit_staircase(b, 1.0, 0.0)
        assert fit.best_kind == "zero"
        assert fit.distance == pytest.approx(0.8, rel=1e-6)

    def test_narrow_window_raises(self):
        prof = SampledFunction.from_callable(lambda x: x, -1.0, 1.0, 257)
        from staircase_lab.blowup_analysis import BlowUp
        b = BlowUp("fake", 0.5, 0.05, prof, 0.05)
        with pytest.raises(ValueError, match="too narrow"):
            fit_staircase(b, 1.0, 1.0)


class TestTestFunctions:
    def test_atoms(self):
        x = np.array([0.5])
        s = np.array([2.0])
        th = np.array([math.pi / 3])
        assert phi_catalog("one")(x, s, th)[0] == 1.0
        assert phi_catalog("cos_theta")(x, s, th)[0] == pytest.approx(0.5)
        assert phi_catalog("x_poly_2")(x, s, th)[0] == pytest.approx(0.25)
        assert phi_catalog("s_poly_1")(x, s, th)[0] == pytest.approx(2.0)
        prod = phi_catalog("x_poly_1*sin_theta")(x, s, th)[0]
        assert prod == pytest.approx(0.5 * math.sin(math.pi / 3))

    def test_unknown_atom_rejected(self):
        with pytest.raises(ValueError, match="unknown"):
            phi_catalog("exp_theta")


class TestVarifold:
    def test_cos_theta_identity(self):
        # phi = cos(theta): integrand is exactly 1 regardless of the profile
        u = SampledFunction.from_callable(lambda x: np.sin(7 * x), 0.0, 1.0, 2049)
        assert varifold_pair(u, "cos_theta") == pytest.approx(1.0, rel=1e-12)

    def test_one_equals_graph_length(self):
        u = SampledFunction.from_callable(lambda x: 2.0 * x, 0.0, 1.0, 2049)
        assert varifold_pair(u, "one") == pytest.approx(math.sqrt(5.0), rel=1e-8)

    def test_limit_constant_forcing(self):
        f = SampledFunction.from_callable(lambda x: 0 * x + 0.3, 0.0, 1.0, 2049)
        assert varifold_limit(f, np.zeros(2049), "one") == pytest.approx(1.0, rel=1e-12)

    def test_limit_phi_one_adds_tv(self):
        f = SampledFunction.from_callable(lambda x: 2.0 * x, 0.0, 1.0, 2049)
        assert varifold_limit(f, None, "one") == pytest.approx(3.0, rel=1e-6)

    def test_limit_sin_theta_increasing_forcing(self):
        # sign partition reduces to the +pi/2 branch: integral of f'
        f = SampledFunction.from_callable(lambda x: x ** 2, 0.0, 1.0, 4097)
        assert varifold_limit(f, None, "sin_theta") == pytest.approx(1.0, rel=1e-4)

    def test_pair_of_steep_staircase_near_limit(self):
        eps = 0.02
        u, _ = synthetic_minimizer(eps, n=262145)
        f = SampledFunction.from_callable(lambda x: x, 0.0, 1.0, 8193)
        pair = varifold_pair(u, "one")
        lim = varifold_limit(f, None, "one")
        assert pair == pytest.approx(lim, rel=0.1)
