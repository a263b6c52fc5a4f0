"""Acceptance suites: every verifiable claim of the package, one line each.

Suites: ``formulas`` (closed-form identities), ``limit_solver`` (limit
solvers against the brute-force oracle, local-minimality classification),
``solver_props`` (discrete solver contracts), ``sweeps_small`` /
``sweeps_full`` (energy scaling, staircase microstructure, varifold identity,
pure-jump forcing scaling).  Each criterion reports a pass/fail flag plus the
numbers it was judged on; the CLI ``check`` subcommand and the test suite
both run these.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .blowup_analysis import varifold_pair
from .energy_core import SampledFunction, cubic_interpolant, omega
from .experiment_cli import ExperimentConfig, SweepRecord, run_sweep
from .gamma_tools import substitute
from .limit_solver import (LimitProblem, equipartition_minimize, mu0,
                           mu0_oracle, mu0_star, mu_bounds,
                           oracle_resolution_bound, verify_local_minimizer)
from .pure_jump import (ALPHA0, semi_entire_minimizer, staircase_params,
                        staircase_params_general, translate)
from .variational_solver import (SolveOptions, _Objective, boundary_patch,
                                 minimize_pmf, minimize_rpmf,
                                 required_grid_size)

__all__ = ["CriterionResult", "SuiteReport", "SUITES", "run_suite"]


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    criteria: tuple[CriterionResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)


def _crit(name: str, passed: bool, detail: str) -> CriterionResult:
    return CriterionResult(name, bool(passed), detail)


# ---------------------------------------------------------------------------
# formulas


def _check_alpha0() -> CriterionResult:
    direct = 16.0 / math.sqrt(3.0)
    # independent route: the substitution constant's limit 4*sqrt(2/3)*4^(3/4)
    via_limit = 4.0 * math.sqrt(2.0 / 3.0) * 4.0 ** 0.75
    err = max(abs(ALPHA0 - direct), abs(ALPHA0 - via_limit))
    return _crit("alpha0 = 16/sqrt(3)", err <= 1e-12,
                 f"alpha0={ALPHA0!r}, max abs err={err:.3g}")


def _check_params_consistency() -> CriterionResult:
    worst = 0.0
    for beta in (0.5, 1.0, 2.0):
        for M in (-2.0, -0.5, 0.5, 1.0, 2.0):
            H1, V1 = staircase_params(beta, M)
            H2, V2 = staircase_params_general(ALPHA0, beta, M)
            worst = max(worst, abs(H1 - H2) / H1, abs(V1 - V2) / max(abs(V1), 1e-300))
    return _crit("staircase params agree at alpha0", worst <= 1e-12,
                 f"max rel err={worst:.3g}")


def _check_c1() -> CriterionResult:
    worst = 0.0
    for beta in (0.25, 0.5, 1.0, 2.0, 4.0):
        c1, _, _, _, _ = mu_bounds(LimitProblem(ALPHA0, beta, 1.0, 1.0))
        ref = 10.0 * (2.0 * beta / 27.0) ** 0.2
        worst = max(worst, abs(c1 - ref) / ref)
    return _crit("c1(alpha0, beta) = 10(2 beta/27)^(1/5)", worst <= 1e-12,
                 f"max rel err={worst:.3g}")


def _check_cubic_bending() -> CriterionResult:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        a = float(rng.uniform(-2, 1))
        b = a + float(rng.uniform(0.3, 3))
        A0, A1, B0, B1 = rng.uniform(-3, 3, size=4)
        cub = cubic_interpolant(a, b, A0, A1, B0, B1)
        quad, _ = integrate.quad(lambda x: cub.second_derivative(x) ** 2, a, b)
        worst = max(worst, abs(quad - cub.min_bending) / max(abs(quad), 1e-12))
    return _crit("cubic min_bending equals quadrature of w''^2", worst <= 1e-10,
                 f"max rel err={worst:.3g} over 20 random data")


def _phi_semi_entire(alpha: float, beta: float, M: float, tau: float) -> float:
    H, _ = staircase_params_general(alpha, beta, M)
    z0 = math.sqrt(5.0 / 3.0) * H
    z1 = z0 + 2.0 * H
    jump = alpha * math.sqrt(M * (2.0 * H - tau))
    fid1 = ((z0 + tau) ** 3 - (tau - H) ** 3) / 3.0
    fid2 = H ** 3 / 3.0
    return jump + beta * M * M * (fid1 + fid2)


def _check_z0_stationary() -> CriterionResult:
    worst = 0.0
    for alpha in (1.0, ALPHA0):
        for beta in (0.5, 1.0, 2.0):
            for M in (0.5, 1.0, 2.0):
                H, _ = staircase_params_general(alpha, beta, M)
                h = 1e-5 * H
                d = (_phi_semi_entire(alpha, beta, M, h)
                     - _phi_semi_entire(alpha, beta, M, -h)) / (2.0 * h)
                worst = max(worst, abs(d))
    return _crit("semi-entire z0 is stationary (phi'(0) = 0)", worst <= 1e-8,
                 f"max |phi'(0)|={worst:.3g}")


def _check_semi_entire_structure() -> CriterionResult:
    w = semi_entire_minimizer(1.0, 1.0, 1.0, 20.0)
    H, _ = staircase_params_general(1.0, 1.0, 1.0)
    z0 = math.sqrt(5.0 / 3.0) * H
    first = float(w.locations[0])
    err = abs(first - (z0 + H))
    return _crit("semi-entire first jump at z0 + H", err <= 1e-12,
                 f"first jump {first!r}, expected {(z0 + H)!r}")


def formulas_suite() -> list[CriterionResult]:
    return [
        _check_alpha0(),
        _check_params_consistency(),
        _check_c1(),
        _check_cubic_bending(),
        _check_z0_stationary(),
        _check_semi_entire_structure(),
    ]


# ---------------------------------------------------------------------------
# limit_solver


def _check_oracle_lattice() -> list[CriterionResult]:
    worst_free = worst_bc = 0.0
    sandwich_ok = mono_ok = True
    worst_detail = ""
    for alpha in (1.0, ALPHA0):
        for beta in (0.5, 1.0, 2.0):
            for M in (0.5, 1.0, 2.0):
                for L in (4.0, 10.0):
                    p = LimitProblem(alpha, beta, L, M)
                    dx = L / 512.0
                    dv = abs(M) * L / 512.0
                    v_free, mini_free = mu0(p)
                    v_bc, mini_bc, _ = mu0_star(p)
                    o_free = mu0_oracle(p, dx, dv, with_bc=False)
                    o_bc = mu0_oracle(p, dx, dv, with_bc=True)
                    b_free = oracle_resolution_bound(p, dx, dv, mini_free)
                    b_bc = oracle_resolution_bound(p, dx, dv, mini_bc)
                    r_free = abs(v_free - o_free) / b_free
                    r_bc = abs(v_bc - o_bc) / b_bc
                    if r_free > worst_free or r_bc > worst_bc:
                        worst_detail = (f"(a={alpha:g},b={beta:g},M={M:g},L={L:g}): "
                                        f"|mu0-oracle|={abs(v_free - o_free):.3g} "
                                        f"bound={b_free:.3g}")
                    worst_free = max(worst_free, r_free)
                    worst_bc = max(worst_bc, r_bc)
                    _, _, _, lower, upper = mu_bounds(p)
                    if not (lower - 1e-9 <= v_free <= v_bc <= upper + 1e-9):
                        sandwich_ok = False
                    if v_free > v_bc + 1e-9 * (1 + abs(v_bc)):
                        mono_ok = False
    return [
        _crit("mu0 agrees with DP oracle within resolution bound",
              worst_free <= 1.0, f"worst |diff|/bound={worst_free:.3g} {worst_detail}"),
        _crit("mu0_star agrees with DP oracle (with bc) within resolution bound",
              worst_bc <= 1.0, f"worst |diff|/bound={worst_bc:.3g}"),
        _crit("sandwich bounds hold and mu0 <= mu0_star on the lattice",
              sandwich_ok and mono_ok, "checked 36 lattice points"),
    ]


def _check_relaxed_step() -> CriterionResult:
    worst = 0.0
    for alpha in (1.0, ALPHA0):
        for beta in (0.5, 1.0, 2.0):
            for M in (0.5, 1.0, 2.0):
                H, _ = staircase_params_general(alpha, beta, M)
                target = 2.0 * H

                def dcost(ell):
                    return (-alpha * math.sqrt(M) / (2.0 * ell ** 1.5)
                            + beta * M * M * ell / 6.0)

                root = optimize.brentq(dcost, 0.05 * target, 20.0 * target,
                                       xtol=1e-14, rtol=1e-14)
                worst = max(worst, abs(root - target) / target)
    return _crit("relaxed optimal step length equals 2H", worst <= 1e-8,
                 f"max rel err={worst:.3g}")


def _check_local_min_classification() -> list[CriterionResult]:
    out = []
    alpha, beta, M = ALPHA0, 1.0, 1.0
    H, V = staircase_params_general(alpha, beta, M)
    window = (-5.05 * H, 4.95 * H)
    v = translate(H, V, "oblique", 0.0, window)
    rep = verify_local_minimizer(v, alpha, beta, M, window)
    ok = (rep.jump_symmetry_residual <= 1e-10 and rep.equipartition_residual <= 1e-10
          and rep.perturbation_margin >= -1e-9 and rep.is_local_min)
    out.append(_crit("canonical staircase is a local minimizer (10H window)", ok,
                     f"sym={rep.jump_symmetry_residual:.3g} "
                     f"equi={rep.equipartition_residual:.3g} "
                     f"margin={rep.perturbation_margin:.3g}"))
    wrong = translate(1.5 * H, 1.5 * V, "oblique", 0.0, window)
    rep_w = verify_local_minimizer(wrong, alpha, beta, M, window)
    out.append(_crit("staircase with step 1.5H fails (negative margin)",
                     rep_w.perturbation_margin < 0 and not rep_w.is_local_min,
                     f"margin={rep_w.perturbation_margin:.3g} "
                     f"sym={rep_w.jump_symmetry_residual:.3g} "
                     f"equi={rep_w.equipartition_residual:.3g}"))
    rng = np.random.default_rng(11)
    n_interior = 0
    worst = 0.0
    for _ in range(100):
        C1 = float(rng.uniform(0.5, 5.0))
        C0 = float(rng.uniform(0.05, 0.99 * 6.0 * C1 / math.sqrt(2.0)))
        t_star, interior = equipartition_minimize(C0, C1)
        if interior:
            n_interior += 1
            worst = max(worst, abs(t_star - 0.5))
    out.append(_crit("equipartition interior minimum sits at t = 1/2",
                     n_interior > 0 and worst <= 1e-6,
                     f"{n_interior}/100 interior, max |t*-1/2|={worst:.3g}"))
    return out


def limit_solver_suite() -> list[CriterionResult]:
    return (_check_oracle_lattice() + [_check_relaxed_step()]
            + _check_local_min_classification())


# ---------------------------------------------------------------------------
# solver_props


def _gradient_check() -> CriterionResult:
    rng = np.random.default_rng(3)
    worst = 0.0
    n = 512
    for pinned in (False, True):
        x = np.linspace(0.0, 1.0, n)
        f = x.copy()
        eps, beta = 0.1, 1.0
        w = omega(eps)
        fixed = {0: 0.0, 1: 0.0, n - 2: 1.0, n - 1: 1.0} if pinned else None
        obj = _Objective(0.0, 1.0 / (n - 1), eps ** 6 * w ** 4, 1.0, beta, f, fixed)
        for _ in range(5):
            u = f + 0.1 * np.sin(rng.uniform(1, 20) * math.pi * x) \
                + 0.05 * rng.standard_normal(n)
            z = u[obj.free]
            _, g = obj.fun(z)
            gmax = float(np.max(np.abs(g)))
            step = 1e-6 * max(1.0, float(np.max(np.abs(z))))
            for i in rng.integers(0, z.size, size=30):
                zp = z.copy(); zp[i] += step
                zm = z.copy(); zm[i] -= step
                fd = (obj.fun(zp)[0] - obj.fun(zm)[0]) / (2.0 * step)
                denom = max(abs(g[i]), 1e-3 * gmax, 1e-12)
                worst = max(worst, abs(fd - g[i]) / denom)
    return _crit("analytic gradient matches finite differences", worst <= 1e-5,
                 f"max rel err={worst:.3g}")


def _constant_forcing_check() -> CriterionResult:
    f = SampledFunction.from_callable(lambda x: 0.7 * np.ones_like(x), 0.0, 1.0, 512)
    res = minimize_pmf(0.1, 1.0, f, SolveOptions(grid_size=6000))
    return _crit("constant forcing has zero minimum", res.energy.total <= 1e-12,
                 f"total={res.energy.total:.3g}")


def _equivariance_checks(store: dict) -> list[CriterionResult]:
    eps, beta = 0.1, 1.0
    n = max(required_grid_size(eps, 1.0, rescaled=False), 64)
    if n % 2 == 0:
        n += 1  # symmetric grid for the reflection check
    f = SampledFunction.from_callable(lambda x: x, 0.0, 1.0, n)
    opts = SolveOptions(grid_size=n, max_iterations=20000)
    base = minimize_pmf(eps, beta, f, opts)
    store["pmf_minimizer"] = (base.minimizer, eps)
    c = 0.37
    f_shift = SampledFunction(0.0, f.spacing, f.values + c)
    warm = SampledFunction(0.0, f.spacing, base.minimizer.values + c)
    warm_opts = SolveOptions(grid_size=n, max_iterations=20000,
                             multistart_seeds=("warm",))
    shifted = minimize_pmf(eps, beta, f_shift, warm_opts, warm=warm)
    rel_shift = abs(shifted.energy.total - base.energy.total) / max(base.energy.total, 1e-300)
    f_refl = SampledFunction(0.0, f.spacing, f.values[::-1].copy())
    warm_r = SampledFunction(0.0, f.spacing, base.minimizer.values[::-1].copy())
    refl = minimize_pmf(eps, beta, f_refl, warm_opts, warm=warm_r)
    rel_refl = abs(refl.energy.total - base.energy.total) / max(base.energy.total, 1e-300)
    return [
        _crit("forcing-shift equivariance", rel_shift <= 1e-10,
              f"rel energy gap={rel_shift:.3g}"),
        _crit("reflection equivariance", rel_refl <= 1e-10,
              f"rel energy gap={rel_refl:.3g}"),
    ]


def _mu_ordering_check(store: dict) -> CriterionResult:
    eps, beta, M, L = 0.1, 1.0, 1.0, 6.0
    g = SampledFunction.from_callable(lambda x: M * x, 0.0, L, 64)
    opts = SolveOptions()
    pinned = minimize_rpmf(eps, beta, g, opts, boundary=(0.0, 0.0, M * L, 0.0))
    free = minimize_rpmf(eps, beta, g, opts, warm=pinned.minimizer)
    store["rpmf_minimizers"] = [(pinned.minimizer, eps), (free.minimizer, eps)]
    ok = free.energy.total <= pinned.energy.total + 1e-9 * (1 + pinned.energy.total)
    return _crit("free minimum <= pinned minimum", ok,
                 f"free={free.energy.total!r} pinned={pinned.energy.total!r}")


def _boundary_patch_check() -> CriterionResult:
    rng = np.random.default_rng(5)
    eps = 0.05
    worst_rpm = worst_l2 = 0.0
    for k in range(20):
        if k == 0:
            A0 = A1 = B0 = B1 = 0.0
        else:
            A0, B0 = rng.uniform(-1.5, 1.5, size=2)
            A1, B1 = rng.uniform(-2.0, 2.0, size=2)
        patch = boundary_patch(0.0, 10.0, float(A0), float(A1), float(B0),
                               float(B1), eps)
        if patch.rpm_bound > 0:
            worst_rpm = max(worst_rpm, patch.rpm_value / patch.rpm_bound)
        if patch.l2sq_bound > 0:
            worst_l2 = max(worst_l2, patch.l2sq_value / patch.l2sq_bound)
    ok = worst_rpm <= 1.0 and worst_l2 <= 1.0
    return _crit("boundary-patch certificates hold for 20 random data", ok,
                 f"max rpm/bound={worst_rpm:.3g}, max int(w^2)/bound={worst_l2:.3g}")


def _substitution_check(store: dict) -> CriterionResult:
    profiles = list(store.get("rpmf_minimizers", []))
    if "pmf_minimizer" in store:
        profiles.append(store["pmf_minimizer"])
    worst = -math.inf
    count = 0
    for prof, eps in profiles:
        cert = substitute(prof, eps)
        slack = cert.M_n * cert.jhalf_value - cert.rpm_value
        worst = max(worst, slack / max(cert.rpm_value, 1e-12))
        count += 1
    ok = count > 0 and worst <= 1e-6
    return _crit("substitution inequality rpm >= M_n * J_half on minimizers", ok,
                 f"worst violation (rel)={worst:.3g} over {count} profiles")


def solver_props_suite() -> list[CriterionResult]:
    store: dict = {}
    out = [_gradient_check(), _constant_forcing_check()]
    out += _equivariance_checks(store)
    out.append(_mu_ordering_check(store))
    out.append(_boundary_patch_check())
    out.append(_substitution_check(store))
    return out


# ---------------------------------------------------------------------------
# sweeps


_SWEEP_CACHE: dict[tuple, tuple] = {}


def linear_sweep(eps_list: tuple[float, ...]) -> tuple[list[SweepRecord], dict]:
    key = ("linear",) + tuple(eps_list)
    if key not in _SWEEP_CACHE:
        outdir = tempfile.mkdtemp(prefix="staircase-acceptance-")
        config = ExperimentConfig(forcing_id="linear", forcing_params={"M": 1.0},
                                  beta=1.0, eps_list=eps_list, output_dir=outdir)
        _SWEEP_CACHE[key] = run_sweep(config)
    return _SWEEP_CACHE[key]


def purejump_sweep(eps_list: tuple[float, ...]) -> tuple[list[SweepRecord], dict]:
    key = ("purejump",) + tuple(eps_list)
    if key not in _SWEEP_CACHE:
        outdir = tempfile.mkdtemp(prefix="staircase-acceptance-pj-")
        config = ExperimentConfig(forcing_id="purejump", forcing_params={"J": 1.0},
                                  beta=1.0, eps_list=eps_list, centers=(),
                                  phis=(), output_dir=outdir)
        _SWEEP_CACHE[key] = run_sweep(config)
    return _SWEEP_CACHE[key]


def _scaling_criterion(records: list[SweepRecord], tol: float,
                       label: str) -> CriterionResult:
    ratios = [r.m_over_omega2 for r in records]
    limit = records[0].predicted_limit
    gaps = [abs(r - limit) for r in ratios]
    monotone = all(b < a + 1e-12 for a, b in zip(gaps[:-1], gaps[1:]))
    final_gap = gaps[-1] / limit
    ok = monotone and final_gap <= tol
    return _crit(label, ok,
                 f"ratios={['%.4f' % r for r in ratios]}, limit={limit:.4f}, "
                 f"final gap={100 * final_gap:.1f}% (target {100 * tol:.0f}%), "
                 f"monotone approach={monotone}")


def sweeps_small_suite() -> list[CriterionResult]:
    records, _ = linear_sweep((0.2, 0.1, 0.07, 0.05))
    return [_scaling_criterion(records, 0.35,
                               "energy scaling m/omega^2 -> c1 (eps to 0.05, 35%)")]


def _fit_criteria(records: list[SweepRecord]) -> list[CriterionResult]:
    out = []
    H, _ = staircase_params(1.0, 1.0)
    for kind in ("fake", "true"):
        for center in (0.3, 0.5, 0.7):
            series = [(r.eps, r.fits[(kind, center)]) for r in records
                      if (kind, center) in r.fits]
            if len(series) < 2:
                out.append(_crit(f"{kind} blow-up fit at center {center}", False,
                                 f"only {len(series)} eps values had a feasible window"))
                continue
            dists = [f["distance"] for _, f in series]
            decreasing = all(b < a for a, b in zip(dists[:-1], dists[1:]))
            step = series[-1][1]["step_length"]
            step_ok = math.isfinite(step) and abs(step - 2.0 * H) / (2.0 * H) <= 0.20
            out.append(_crit(
                f"{kind} blow-up fit at center {center}",
                decreasing and step_ok,
                f"distances={['%.3f' % d for d in dists]} (eps "
                f"{['%g' % e for e, _ in series]}), step={step:.3f} vs 2H={2 * H:.3f}"))
    return out


def _varifold_criteria(records: list[SweepRecord]) -> list[CriterionResult]:
    out = []
    worst_cos = 0.0
    for r in records:
        pair, _, _ = r.varifold["cos_theta"]
        worst_cos = max(worst_cos, abs(pair - 1.0))
    out.append(_crit("varifold pairing with cos(theta) equals 1",
                     worst_cos <= 1e-8, f"max |pair-1|={worst_cos:.3g}"))
    for phi in ("one", "sin_theta", "x_poly_1*sin_theta"):
        residuals = [r.varifold[phi][2] for r in records]
        ok = all(b <= 1.1 * a for a, b in zip(residuals[:-1], residuals[1:]))
        out.append(_crit(f"varifold residual decreasing for phi={phi}", ok,
                         f"residuals={['%.4f' % x for x in residuals]}"))
    return out


def _purejump_criterion() -> CriterionResult:
    records, _ = purejump_sweep((0.1, 0.07, 0.05, 0.03))
    target = records[0].predicted_limit
    ratios = [r.m_over_omega52 for r in records]
    gaps = [abs(x - target) for x in ratios]
    ok = gaps[-1] < gaps[0]
    return _crit("pure-jump forcing: m/omega^(5/2) trends to the limit", ok,
                 f"ratios={['%.3f' % x for x in ratios]}, limit={target:.3f}")


def sweeps_full_suite() -> list[CriterionResult]:
    records, _ = linear_sweep((0.2, 0.1, 0.07, 0.05, 0.03))
    out = [_scaling_criterion(records, 0.25,
                              "energy scaling m/omega^2 -> c1 (eps to 0.03, 25%)")]
    out += _fit_criteria(records)
    out += _varifold_criteria(records)
    out.append(_purejump_criterion())
    return out


SUITES = {
    "formulas": formulas_suite,
    "limit_solver": limit_solver_suite,
    "solver_props": solver_props_suite,
    "sweeps_small": sweeps_small_suite,
    "sweeps_full": sweeps_full_suite,
}


def run_suite(suite_id: str) -> SuiteReport:
    if suite_id not in SUITES:
        raise ValueError(f"unknown suite {suite_id!r}; choose from {sorted(SUITES)}")
    return SuiteReport(suite_id, tuple(SUITES[suite_id]()))
