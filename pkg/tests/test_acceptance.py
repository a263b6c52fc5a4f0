"""Acceptance gate: every criterion of every suite, one pass/fail line each.

Suites are executed once per test session and cached; each criterion then
becomes its own test whose assertion message carries the measured detail.
The heavy sweep suites run full minimization cascades and take tens of
minutes combined.
"""

import pytest

from staircase_lab.acceptance import run_suite

_REPORTS: dict = {}


def _criterion(suite: str, name: str):
    if suite not in _REPORTS:
        _REPORTS[suite] = run_suite(suite)
    for c in _REPORTS[suite].criteria:
        if c.name == name:
            return c
    raise AssertionError(f"suite {suite!r} produced no criterion {name!r}; "
                         f"got {[c.name for c in _REPORTS[suite].criteria]}")


FORMULAS = [
    "alpha0 = 16/sqrt(3)",
    "staircase params agree at alpha0",
    "c1(alpha0, beta) = 10(2 beta/27)^(1/5)",
    "cubic min_bending equals quadrature of w''^2",
    "semi-entire z0 is stationary (phi'(0) = 0)",
    "semi-entire first jump at z0 + H",
]

LIMIT_SOLVER = [
    "mu0 agrees with DP oracle within resolution bound",
    "mu0_star agrees with DP oracle (with bc) within resolution bound",
    "sandwich bounds hold and mu0 <= mu0_star on the lattice",
    "relaxed optimal step length equals 2H",
    "canonical staircase is a local minimizer (10H window)",
    "staircase with step 1.5H fails (negative margin)",
    "equipartition interior minimum sits at t = 1/2",
]

SOLVER_PROPS = [
    "analytic gradient matches finite differences",
    "constant forcing has zero minimum",
    "forcing-shift equivariance",
    "reflection equivariance",
    "free minimum <= pinned minimum",
    "boundary-patch certificates hold for 20 random data",
    "substitution inequality rpm >= M_n * J_half on minimizers",
]

SWEEPS_SMALL = [
    "energy scaling m/omega^2 -> c1 (eps to 0.05, 35%)",
]

SWEEPS_FULL = [
    "energy scaling m/omega^2 -> c1 (eps to 0.03, 25%)",
    "fake blow-up fit at center 0.3",
    "fake blow-up fit at center 0.5",
    "fake blow-up fit at center 0.7",
    "true blow-up fit at center 0.3",
    "true blow-up fit at center 0.5",
    "true blow-up fit at center 0.7",
    "varifold pairing with cos(theta) equals 1",
    "varifold residual decreasing for phi=one",
    "varifold residual decreasing for phi=sin_theta",
    "varifold residual decreasing for phi=x_poly_1*sin_theta",
    "pure-jump forcing: m/omega^(5/2) trends to the limit",
]


@pytest.mark.parametrize("name", FORMULAS)
def test_formulas(name):
    c = _criterion("formulas", name)
    assert c.passed, c.detail


@pytest.mark.parametrize("name", LIMIT_SOLVER)
def test_limit_solver(name):
    c = _criterion("limit_solver", name)
    assert c.passed, c.detail


@pytest.mark.parametrize("name", SOLVER_PROPS)
def test_solver_props(name):
    c = _criterion("solver_props", name)
    assert c.passed, c.detail


@pytest.mark.parametrize("name", SWEEPS_SMALL)
def test_sweeps_small(name):
    c = _criterion("sweeps_small", name)
    assert c.passed, c.detail


@pytest.mark.parametrize("name", SWEEPS_FULL)
def test_sweeps_full(name):
    c = _criterion("sweeps_full", name)
    assert c.passed, c.detail
