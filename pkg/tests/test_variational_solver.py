"""Discretized energy minimization: grids, starts, recovery, boundary caps."""

import math

import numpy as np
import pytest

from staircase_lab.energy_core import SampledFunction, eval_rpm, omega
from staircase_lab.pure_jump import ALPHA0, PureJumpFunction
from staircase_lab.variational_solver import (BoundaryHypothesisError,
                                              GridResolutionError,
                                              SolveOptions, boundary_patch,
                                              minimize_pmf, minimize_rpmf,
                                              recovery_construction,
                                              recovery_quality,
                                              required_grid_size)


class TestGridRule:
    def test_required_grid_size_formula(self):
        eps, L = 0.1, 1.0
        layer = eps * eps * omega(eps)
        assert required_grid_size(eps, L, rescaled=False) == \
            math.ceil(8.0 * L / layer) + 1
        assert required_grid_size(eps, L, rescaled=True) == \
            math.ceil(8.0 * L / (eps * eps)) + 1

    def test_underresolved_grid_raises(self):
        f = SampledFunction.from_callable(lambda x: x, 0.0, 1.0, 128)
        with pytest.raises(GridResolutionError) as ei:
            minimize_pmf(0.05, 1.0, f, SolveOptions(grid_size=128))
        assert ei.value.required_grid_size == required_grid_size(0.05, 1.0, False)

    def test_rescaled_rule_is_coarser(self):
        assert required_grid_size(0.1, 1.0, rescaled=True) < \
            required_grid_size(0.1, 1.0, rescaled=False)


class TestMinimizePmf:
    def test_constant_forcing_zero_minimum(self):
        f = SampledFunction.from_callable(lambda x: 0 * x + 0.3, 0.0, 1.0, 512)
        res = minimize_pmf(0.1, 1.0, f, SolveOptions(grid_size=6000))
        assert res.energy.total <= 1e-12
        np.testing.assert_allclose(res.minimizer.values, 0.3, atol=1e-7)

    def test_beats_forcing_start_energy(self):
        # the minimum is at most the energy of the forcing itself
        from staircase_lab.energy_core import eval_pmf
        eps, beta = 0.15, 1.0
        n = max(required_grid_size(eps, 1.0, False), 64)
        f = SampledFunction.from_callable(lambda x: x, 0.0, 1.0, n)
        res = minimize_pmf(eps, beta, f, SolveOptions(grid_size=n))
        assert res.energy.total <= eval_pmf(f, eps, beta, f).total + 1e-12

    def test_result_reports_initializer(self):
        f = SampledFunction.from_callable(lambda x: 0 * x, 0.0, 1.0, 512)
        res = minimize_pmf(0.1, 1.0, f, SolveOptions(grid_size=6000))
        assert res.initializer_id in ("forcing", "recovery", "mollified")

    def test_unknown_seed_rejected(self):
        f = SampledFunction.from_callable(lambda x: x, 0.0, 1.0, 6000)
        with pytest.raises(ValueError, match="unknown initializer"):
            minimize_pmf(0.1, 1.0, f,
                         SolveOptions(grid_size=6000, multistart_seeds=("bogus",)))


class TestMinimizeRpmf:
    def test_free_below_pinned(self):
        eps, beta, M, L = 0.1, 1.0, 1.0, 6.0
        g = SampledFunction.from_callable(lambda x: M * x, 0.0, L, 64)
        pinned = minimize_rpmf(eps, beta, g, SolveOptions(),
                               boundary=(0.0, 0.0, M * L, 0.0))
        free = minimize_rpmf(eps, beta, g, SolveOptions(), warm=pinned.minimizer)
        assert free.energy.total <= pinned.energy.total + 1e-9

    def test_pinned_boundary_enforced(self):
        eps, beta, M, L = 0.1, 1.0, 1.0, 6.0
        g = SampledFunction.from_callable(lambda x: M * x, 0.0, L, 64)
        res = minimize_rpmf(eps, beta, g, SolveOptions(),
                            boundary=(0.0, 0.0, M * L, 0.0))
        u = res.minimizer
        assert u.values[0] == 0.0
        assert u.values[-1] == pytest.approx(M * L)
        assert u.values[1] == pytest.approx(0.0)  # zero one-sided slope
        assert u.values[-2] == pytest.approx(M * L)


class TestRecoveryConstruction:
    def test_constant_target_exact(self):
        t = PureJumpFunction(0.4, (), (0.0, 10.0))
        n = required_grid_size(0.1, 10.0, rescaled=True)
        prof = recovery_construction(t, 0.1, n, rescaled=True)
        np.testing.assert_allclose(prof.values, 0.4, atol=1e-14)
        assert eval_rpm(prof, 0.1) == pytest.approx(0.0, abs=1e-20)

    def test_single_jump_quality(self):
        # eval_rpm / (alpha0 * sqrt(J)) sits within 30% of 1 at eps = 0.05;
        # the finite-eps transition is cheaper than the limit cost (the
        # effective jump constant increases to alpha0 only as eps -> 0)
        t = PureJumpFunction(0.0, ((5.0, 1.0),), (0.0, 10.0))
        n = required_grid_size(0.05, 10.0, rescaled=True)
        prof = recovery_construction(t, 0.05, n, rescaled=True)
        q = recovery_quality(prof, t, 0.05)
        assert abs(q) <= 0.3

    def test_quality_approaches_limit_along_eps(self):
        # |eval_rpm/(alpha0 * j_half) - 1| shrinks as eps decreases
        t = PureJumpFunction(0.0, ((5.0, 1.0),), (0.0, 10.0))
        qs = []
        for eps in (0.2, 0.1, 0.05):
            n = required_grid_size(eps, 10.0, rescaled=True)
            prof = recovery_construction(t, eps, n, rescaled=True)
            qs.append(abs(recovery_quality(prof, t, eps)))
        assert qs[2] < qs[1] < qs[0]

    def test_matches_target_outside_layers(self):
        t = PureJumpFunction(0.0, ((5.0, 1.0),), (0.0, 10.0))
        n = required_grid_size(0.1, 10.0, rescaled=True)
        prof = recovery_construction(t, 0.1, n, rescaled=True)
        x = prof.x
        far = np.abs(x - 5.0) > 2.0
        np.testing.assert_allclose(prof.values[far],
                                   np.asarray(t.value(x[far]), dtype=float),
                                   atol=1e-12)

    def test_collision_raises(self):
        # two jumps closer together than any feasible transition width
        t = PureJumpFunction(0.0, ((4.9999, 1.0), (5.0001, 1.0)), (0.0, 10.0))
        n = required_grid_size(0.1, 10.0, rescaled=True)
        with pytest.raises(ValueError, match="collides"):
            recovery_construction(t, 0.1, n, rescaled=True)


class TestBoundaryPatch:
    def test_zero_data(self):
        patch = boundary_patch(0.0, 10.0, 0.0, 0.0, 0.0, 0.0, 0.05)
        assert patch.rpm_value == 0.0
        assert patch.l2sq_value == 0.0

    def test_certificates_hold(self):
        patch = boundary_patch(0.0, 10.0, 1.0, -0.5, -0.8, 1.2, 0.05)
        assert patch.rpm_value <= patch.rpm_bound
        assert patch.l2sq_value <= patch.l2sq_bound

    def test_endpoint_data_matched(self):
        A0, A1, B0, B1 = 0.7, -0.4, -0.2, 0.9
        patch = boundary_patch(0.0, 10.0, A0, A1, B0, B1, 0.05)
        u = patch.profile
        assert u.values[0] == pytest.approx(A0, rel=1e-9)
        assert u.values[-1] == pytest.approx(B0, rel=1e-9)
        # the caps are the exact endpoint-data cubics
        from staircase_lab.energy_core import cubic_interpolant
        cub = cubic_interpolant(0.0, patch.eta, A0, A1, 0.0, 0.0)
        in_cap = u.x < patch.eta
        np.testing.assert_allclose(u.values[in_cap], cub(u.x[in_cap]), atol=1e-12)
        # flat in the middle
        mid = np.abs(u.x - 5.0) < 2.0
        np.testing.assert_allclose(u.values[mid], 0.0, atol=1e-14)

    def test_width_hypothesis_violation(self):
        # interval shorter than twice the cap half-width
        eps = 0.9
        with pytest.raises(BoundaryHypothesisError, match="width hypothesis"):
            boundary_patch(0.0, 1e-3, 100.0, 0.0, 100.0, 0.0, eps)
