"""Constructive variational-convergence instruments.

The substitution construction replaces a sampled profile by a pure-jump
skeleton: wherever the discrete slope exceeds the threshold
D = 1/(eps^2 |log eps|^4) on a maximal run, the skeleton jumps at the run
midpoint by the run's variation minus the budget D*(run length).  The
certified inequality is

    rescaled energy of u  >=  M_n * J_half(skeleton),

with M_n = 4*sqrt(2/3) * (log(1 + eps^-4 |log eps|^-8)/|log eps|)^(3/4),
which increases (slowly) to 16/sqrt(3) as eps -> 0.

Also here: the per-run basic lower bound and a lower-semicontinuity probe
for the square-root jump energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .energy_core import SampledFunction, first_derivative, eval_rpm, trapezoid_weights
from .pure_jump import ALPHA0, PureJumpFunction, j_half

__all__ = [
    "SubstitutionCertificate",
    "LscReport",
    "slope_threshold",
    "substitution_constant",
    "substitute",
    "basic_lower_bound",
    "jhalf_lsc_probe",
]


@dataclass(frozen=True)
class SubstitutionCertificate:
    skeleton: PureJumpFunction
    M_n: float
    rpm_value: float
    jhalf_value: float
    lp_gap: float
    tv_gap: float


def slope_threshold(eps: float) -> float:
    """Run-detection threshold D = 1/(eps^2 |log eps|^4)."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0,1)")
    return 1.0 / (eps * eps * abs(math.log(eps)) ** 4)


def substitution_constant(eps: float) -> float:
    """M_n = 4*sqrt(2/3)*(log(1+eps^-4 |log eps|^-8)/|log eps|)^(3/4)."""
    le = abs(math.log(eps))
    return 4.0 * math.sqrt(2.0 / 3.0) * (math.log1p(eps ** -4 * le ** -8) / le) ** 0.75


def _threshold_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal index runs of True, merging gaps of a single cell (hysteresis)."""
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return []
    runs = []
    start = prev = int(idx[0])
    for i in idx[1:]:
        i = int(i)
        if i - prev <= 2:  # gap of at most one False cell gets absorbed
            prev = i
        else:
            runs.append((start, prev))
            start = prev = i
    runs.append((start, prev))
    return runs


def substitute(u: SampledFunction, eps: float) -> SubstitutionCertificate:
    """Pure-jump skeleton of a sampled profile with an energy certificate."""
    D = slope_threshold(eps)
    d1 = first_derivative(u)
    runs = _threshold_runs(np.abs(d1) > D)
    x = u.x
    jumps = []
    a_dom, b_dom = u.left, u.right
    for i0, i1 in runs:
        xa, xb = float(x[i0]), float(x[i1])
        var = float(u.values[i1] - u.values[i0])
        height = abs(var) - D * (xb - xa)
        if height <= 0.0:
            continue  # clip tiny/negative heights from discretization
        s = 0.5 * (xa + xb)
        s = min(max(s, a_dom + 1e-12 * (b_dom - a_dom)),
                b_dom - 1e-12 * (b_dom - a_dom))
        jumps.append((s, math.copysign(height, var)))
    skeleton = PureJumpFunction(float(u.values[0]), tuple(jumps), (a_dom, b_dom))
    rpm = eval_rpm(u, eps)
    jh = j_half(skeleton)
    w = trapezoid_weights(u.n, u.spacing)
    lp = float(w @ np.abs(u.values - skeleton.value(x)))
    tv_u = float(np.abs(np.diff(u.values)).sum())
    tv_gap = abs(tv_u - skeleton.total_variation())
    return SubstitutionCertificate(skeleton, substitution_constant(eps), rpm, jh, lp, tv_gap)


def basic_lower_bound(u: SampledFunction, eps: float, D: float,
                      slope_tolerance: float = 1e-3) -> float:
    """Lower bound for the rescaled energy of a steep monotone-excess profile.

    Requires |u'| >= D on the whole interval with equality (within tolerance)
    at the endpoints; returns
    4*sqrt(2/3)*(log(1+D^2)/|log eps|)^(3/4) * (|u(b)-u(a)| - D*(b-a))^(1/2).
    """
    d1 = first_derivative(u)
    tol = slope_tolerance * max(1.0, D)
    bad = np.flatnonzero(np.abs(d1) < D - tol)
    if bad.size:
        i = int(bad[0])
        raise ValueError(f"|u'| < D at sample {i} (x={u.left + i * u.spacing:.6g}): "
                         f"{abs(d1[i]):.6g} < {D:.6g}")
    for i in (0, u.n - 1):
        if abs(abs(d1[i]) - D) > max(tol, 1e-2 * D):
            raise ValueError(f"endpoint slope at sample {i} is {abs(d1[i]):.6g}, "
                             f"expected D = {D:.6g}")
    excess = abs(float(u.values[-1] - u.values[0])) - D * (u.right - u.left)
    excess = max(excess, 0.0)
    le = abs(math.log(eps))
    return 4.0 * math.sqrt(2.0 / 3.0) * (math.log1p(D * D) / le) ** 0.75 * math.sqrt(excess)


@dataclass(frozen=True)
class LscReport:
    l1_gaps: tuple[float, ...]
    jhalf_values: tuple[float, ...]
    jhalf_limit: float
    tv_values: tuple[float, ...]
    tv_limit: float
    converges_l1: bool
    liminf_ok: bool
    jhalf_converges: bool
    strict_ok: bool | None


def jhalf_lsc_probe(sequence: list[PureJumpFunction], limit: PureJumpFunction,
                    window: tuple[float, float] | None = None,
                    n_samples: int = 4097, rel_tol: float = 1e-6) -> LscReport:
    """Lower-semicontinuity probe for the square-root jump energy.

    Checks on the provided family that the tail of j_half(z_n) dominates
    j_half(limit) (liminf inequality) and, when j_half converges to the
    limit's value, that total variations converge too (strict convergence).
    """
    if window is None:
        window = limit.domain
    a, b = window
    xs = np.linspace(a + 1e-9 * (b - a), b - 1e-9 * (b - a), n_samples)
    w = np.full(n_samples, xs[1] - xs[0])
    w[0] = w[-1] = 0.5 * (xs[1] - xs[0])
    lim_vals = limit.value(xs)
    l1_gaps, jh_vals, tv_vals = [], [], []
    for z in sequence:
        l1_gaps.append(float(w @ np.abs(z.value(xs) - lim_vals)))
        jh_vals.append(j_half(z, window))
        tv_vals.append(z.total_variation(window))
    jh_lim = j_half(limit, window)
    tv_lim = limit.total_variation(window)
    scale = max(1.0, jh_lim)
    tail = jh_vals[len(jh_vals) // 2:] or jh_vals
    liminf_ok = min(tail) >= jh_lim - rel_tol * scale
    converges_l1 = (not l1_gaps) or l1_gaps[-1] <= max(l1_gaps[0], 1e-12) + 1e-12
    jh_conv = bool(jh_vals) and abs(jh_vals[-1] - jh_lim) <= rel_tol * scale
    strict_ok = None
    if jh_conv:
        strict_ok = abs(tv_vals[-1] - tv_lim) <= rel_tol * max(1.0, tv_lim)
    return LscReport(tuple(l1_gaps), tuple(jh_vals), jh_lim, tuple(tv_vals),
                     tv_lim, converges_l1, liminf_ok, jh_conv, strict_ok)
