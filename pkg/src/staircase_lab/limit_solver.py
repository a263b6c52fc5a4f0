"""Exact and near-exact solvers for the limiting jump-energy minimum problems.

The limit problem on (0, L) with linear forcing f(x) = M x is

    minimize  alpha * J_half(v) + beta * int_0^L (v - M x)^2 dx

over pure jump functions v, either free (``mu0``) or with the boundary values
v(0) = 0, v(L) = M L (``mu0_star``).  Minimizers are staircases; the boundary
problem is an integer search over equal-step staircases, the free problem a
structured search over equispaced line intersections with free end plateaus.
An independent dynamic-programming oracle over piecewise-constant functions on
a product grid brute-forces both problems and adjudicates.

Also here: the two-sided bounds with the constants (c1, c2, c3), the
scalar equipartition minimization, and a local-minimality verifier for
staircase candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .pure_jump import (PureJumpFunction, jf_half, staircase_params_general)

__all__ = [
    "LimitProblem",
    "LocalMinReport",
    "mu0_star",
    "mu0",
    "mu0_oracle",
    "oracle_resolution_bound",
    "mu_bounds",
    "equipartition_minimize",
    "verify_local_minimizer",
]


@dataclass(frozen=True)
class LimitProblem:
    """Parameters of the limit problem: jump weight alpha, fidelity weight
    beta, interval length L, forcing slope M."""

    alpha: float
    beta: float
    L: float
    M: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0 and self.L > 0):
            raise ValueError("alpha, beta, L must be positive")


@dataclass(frozen=True)
class LocalMinReport:
    jump_symmetry_residual: float
    equipartition_residual: float
    perturbation_margin: float
    is_local_min: bool


def _zero(L: float) -> PureJumpFunction:
    return PureJumpFunction(0.0, (), (0.0, L))


def _n_search_range(p: LimitProblem) -> range:
    H, _ = staircase_params_general(p.alpha, p.beta, p.M)
    n_max = math.ceil(5.0 * p.L / (2.0 * H)) + 5
    return range(1, n_max + 1)


def mu0_star(p: LimitProblem) -> tuple[float, PureJumpFunction, int]:
    """Boundary-value minimum: best equal-step staircase from (0,0) to (L, ML).

    Minimizes n * (alpha*sqrt(|M|L/n) + beta*M^2*(L/n)^3/12) over integers
    n >= 1 (smallest n wins ties).  The minimizer has n* steps of length L/n*
    with jumps of height M L/n* at step midpoints.
    """
    a, b, L, M = p.alpha, p.beta, p.L, p.M
    if M == 0.0:
        return 0.0, _zero(L), 1
    best_v, best_n = math.inf, 1
    for n in _n_search_range(p):
        ell = L / n
        v = n * (a * math.sqrt(abs(M) * ell) + b * M * M * ell ** 3 / 12.0)
        if not math.isfinite(best_v) or v < best_v - 1e-15 * max(1.0, abs(best_v)):
            best_v, best_n = v, n
    n = best_n
    jumps = tuple(((2 * k + 1) * L / (2 * n), M * L / n) for k in range(n))
    return best_v, PureJumpFunction(0.0, jumps, (0.0, L)), n


def _structured_value(p: LimitProblem, k: int, a1: float, an: float) -> float:
    """Energy of the k-jump equispaced-intersection candidate.

    Intersections with the line M x at a1 = z_1 < ... < z_{k+1} = an,
    equispaced; jumps of height M*(an-a1)/k at gap midpoints; end plateaus
    at levels M a1 and M an.
    """
    a, b, L, M = p.alpha, p.beta, p.L, p.M
    if not (0.0 < a1 < an < L):
        return math.inf
    g = (an - a1) / k
    fid = abs(M) ** 2 * (a1 ** 3 / 3.0 + (L - an) ** 3 / 3.0 + k * g ** 3 / 12.0)
    return a * k * math.sqrt(abs(M) * g) + b * fid


def _structured_minimizer(p: LimitProblem, k: int, a1: float, an: float) -> PureJumpFunction:
    M, L = p.M, p.L
    zs = np.linspace(a1, an, k + 1)
    mids = 0.5 * (zs[:-1] + zs[1:])
    g = (an - a1) / k
    jumps = tuple((float(s), M * g) for s in mids)
    return PureJumpFunction(M * a1, jumps, (0.0, L))


def mu0(p: LimitProblem) -> tuple[float, PureJumpFunction]:
    """Free minimum over the structured staircase family.

    Candidates: the best constant level (closed form beta*M^2*L^3/12 at the
    midline) and, for each jump count k >= 1, equispaced intersections with
    free end positions (a1, an) optimized by local search from several starts.
    """
    a, b, L, M = p.alpha, p.beta, p.L, p.M
    if M == 0.0:
        return 0.0, _zero(L)
    best = (b * M * M * L ** 3 / 12.0,
            PureJumpFunction(M * L / 2.0, (), (0.0, L)))
    H, _ = staircase_params_general(a, b, M)
    best_k = 0
    for k in _n_search_range(p):
        starts = []
        for g0 in (2.0 * H, L / (k + 1), 0.8 * L / k):
            span = min(k * g0, 0.98 * L)
            a1 = 0.5 * (L - span)
            starts.append((max(a1, 1e-6 * L), min(a1 + span, L - 1e-6 * L)))
        improved = False
        for x0 in starts:
            res = optimize.minimize(
                lambda z: _structured_value(p, k, z[0], z[1]),
                x0=np.array(x0), method="Nelder-Mead",
                options={"xatol": 1e-10 * L, "fatol": 1e-13, "maxiter": 2000})
            if res.fun < best[0]:
                best = (float(res.fun),
                        _structured_minimizer(p, k, float(res.x[0]), float(res.x[1])))
                improved = True
        if improved:
            best_k = k
        # the per-k optimum is unimodal in k; stop well past the best count
        if best_k and k > best_k + 8:
            break
    return best


def _symmetric_start(p: LimitProblem, k: int) -> tuple[float, float]:
    H, _ = staircase_params_general(p.alpha, p.beta, p.M)
    span = min(k * 2.0 * H, 0.98 * p.L)
    a1 = 0.5 * (p.L - span)
    return max(a1, 1e-6 * p.L), min(a1 + span, p.L * (1 - 1e-6))


def mu0_oracle(p: LimitProblem, dx: float, dv: float, with_bc: bool) -> float:
    """Brute-force dynamic program over piecewise-constant functions.

    Cells of width dx, levels on a dv-grid spanning
    [min(0, ML) - |M|L/2, max(0, ML) + |M|L/2]; transition cost
    alpha*sqrt(|level change|) between adjacent cells, exact per-cell fidelity
    against M x.  With ``with_bc`` the first and last cells are clamped to
    levels 0 and M L.  The result is an upper bound for the true minimum and
    exceeds it by at most the snapping error of the true minimizer
    (O(dx + sqrt(dv)); see :func:`oracle_resolution_bound`).
    """
    a, b, L, M = p.alpha, p.beta, p.L, p.M
    if M == 0.0:
        return 0.0
    n_cells = int(round(L / dx))
    if abs(n_cells * dx - L) > 1e-9 * L:
        raise ValueError("dx must divide L")
    if n_cells < 4:
        raise ValueError("grid too coarse: need at least 4 cells")
    lo = min(0.0, M * L) - abs(M) * L / 2.0
    hi = max(0.0, M * L) + abs(M) * L / 2.0
    n_lev = int(round((hi - lo) / dv)) + 1
    levels = lo + dv * np.arange(n_lev)
    # per-cell fidelity, closed form of int (v - Mx)^2 over the cell
    edges = dx * np.arange(n_cells + 1)
    d0 = levels[None, :] - M * edges[:-1, None]
    d1 = levels[None, :] - M * edges[1:, None]
    fid = b * (d0 ** 3 - d1 ** 3) / (3.0 * M)
    idx = np.arange(n_lev)
    trans = a * np.sqrt(dv * np.abs(idx[:, None] - idx[None, :]))
    if with_bc:
        i0 = int(np.argmin(np.abs(levels - 0.0)))
        cost = np.full(n_lev, np.inf)
        cost[i0] = fid[0, i0]
    else:
        cost = fid[0].copy()
    for k in range(1, n_cells):
        cost = np.min(cost[:, None] + trans, axis=0) + fid[k]
    if with_bc:
        i1 = int(np.argmin(np.abs(levels - M * L)))
        return float(cost[i1])
    return float(cost.min())


def oracle_resolution_bound(p: LimitProblem, dx: float, dv: float,
                            minimizer: PureJumpFunction) -> float:
    """Snapping error bound for :func:`mu0_oracle` relative to a minimizer.

    Moving each jump of the minimizer to the nearest cell edge (<= dx/2) and
    each level to the nearest grid level (<= dv/2) changes the energy by at
    most  alpha*n*sqrt(dv) + beta*L*dv*(2R + dv) + beta*n*dx*Jmax*(2R + dv),
    where n is the jump count, Jmax the largest |jump| and R the largest
    deviation |v - Mx| of the minimizer.
    """
    a, b, L, M = p.alpha, p.beta, p.L, p.M
    n = len(minimizer.jumps)
    jmax = float(np.abs(minimizer.heights).max()) if n else 0.0
    pts = [0.0] + [s for s, _ in minimizer.jumps] + [L]
    dev = 0.0
    for lo_pt, hi_pt in zip(pts[:-1], pts[1:]):
        c = float(minimizer.value(0.5 * (lo_pt + hi_pt)))
        dev = max(dev, abs(c - M * lo_pt), abs(c - M * hi_pt))
    return (a * n * math.sqrt(dv)
            + b * L * dv * (2.0 * dev + dv)
            + b * n * dx * jmax * (2.0 * dev + dv))


def mu_bounds(p: LimitProblem) -> tuple[float, float, float, float, float]:
    """Constants (c1, c2, c3) and the sandwich bounds for mu0 and mu0_star.

        c1|M|^{4/5} L - c2|M|^{1/5}  <=  mu0 <= mu0_star  <=
        c1|M|^{4/5} L + c3|M|^{1/5}
    """
    a, b = p.alpha, p.beta
    c1 = 1.25 * (a ** 4 * b / 3.0) ** 0.2
    c2 = 20.0 * (2.0 * a ** 6 / (3.0 * b)) ** 0.2
    c3 = 1.25 * (3.0 * a ** 6 / b) ** 0.2
    m = abs(p.M)
    lower = c1 * m ** 0.8 * p.L - c2 * m ** 0.2
    upper = c1 * m ** 0.8 * p.L + c3 * m ** 0.2
    return c1, c2, c3, lower, upper


def equipartition_minimize(C0: float, C1: float) -> tuple[float, bool]:
    """Minimize phi(t) = C0(sqrt(t)+sqrt(1-t)) + C1(t^3+(1-t)^3) on [0, 1].

    When C0*sqrt(2) >= 6*C1 there is no interior minimum (the boundary value
    C0 + C1 wins); otherwise the interior minimum sits exactly at t = 1/2.
    Returns (t*, interior).
    """
    if not (C0 > 0 and C1 > 0):
        raise ValueError("C0, C1 must be positive")

    def phi(t: float) -> float:
        return C0 * (math.sqrt(t) + math.sqrt(1.0 - t)) + C1 * (t ** 3 + (1.0 - t) ** 3)

    boundary = C0 + C1
    if C0 * math.sqrt(2.0) >= 6.0 * C1:
        return 0.0, False
    ts = np.linspace(1e-9, 1.0 - 1e-9, 4001)
    vals = C0 * (np.sqrt(ts) + np.sqrt(1.0 - ts)) + C1 * (ts ** 3 + (1.0 - ts) ** 3)
    k = int(np.argmin(vals))
    lo, hi = ts[max(0, k - 1)], ts[min(ts.size - 1, k + 1)]
    res = optimize.minimize_scalar(phi, bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-12})
    t_star, v_star = float(res.x), float(res.fun)
    if v_star < boundary - 1e-15 * max(1.0, boundary):
        return t_star, True
    return 0.0, False


def _pieces(v: PureJumpFunction, window: tuple[float, float]):
    """(breakpoints, levels) of v restricted to the window."""
    c, d = window
    locs = [s for s in v.locations if c < s < d]
    pts = [c] + locs + [d]
    levels = [float(v.value(0.5 * (lo + hi))) for lo, hi in zip(pts[:-1], pts[1:])]
    return pts, levels


def _pj_from_pieces(pts: list[float], levels: list[float],
                    window: tuple[float, float]) -> PureJumpFunction | None:
    jumps = []
    for j in range(1, len(levels)):
        h = levels[j] - levels[j - 1]
        if h != 0.0:
            jumps.append((pts[j], h))
    locs = [s for s, _ in jumps]
    if locs != sorted(locs) or len(set(locs)) != len(locs):
        return None
    if locs and not (window[0] < locs[0] and locs[-1] < window[1]):
        return None
    return PureJumpFunction(levels[0], tuple(jumps), window)


def _equispaced_candidate(window: tuple[float, float], va: float, vb: float,
                          n: int, M: float) -> PureJumpFunction | None:
    """n-jump staircase with boundary values (va, vb), jumps symmetric about
    the line M x (jump midlevels on the line)."""
    if n < 1 or M == 0.0:
        return None
    h = (vb - va) / n
    if h == 0.0:
        return None
    levels = [va + j * h for j in range(n + 1)]
    locs = [(levels[j - 1] + levels[j]) / (2.0 * M) for j in range(1, n + 1)]
    c, d = window
    if any(not (c < s < d) for s in locs):
        return None
    if any(locs[j] <= locs[j - 1] for j in range(1, n)):
        return None
    return PureJumpFunction(va, tuple((s, h) for s in locs), window)


def verify_local_minimizer(v: PureJumpFunction, alpha: float, beta: float,
                           M: float, window: tuple[float, float],
                           tolerance: float = 1e-9) -> LocalMinReport:
    """Check the stationarity signatures of a staircase candidate.

    * jump symmetry: each jump's midlevel sits on the line M x;
    * equipartition: consecutive line intersections are equally spaced;
    * perturbation margin: minimum energy change over a family of local
      moves (move one jump, change one plateau level, merge adjacent jumps,
      insert a jump pair) and restructured equispaced candidates with the
      same window boundary values and jump count within +-2.
    """
    c, d = window
    tol_pt = 1e-9 * max(1.0, abs(c), abs(d))
    for s in v.locations:
        if abs(s - c) < tol_pt or abs(s - d) < tol_pt:
            raise ValueError(f"window endpoint sits on jump at {s}; shift the window")
    vr = v.restricted(window)
    pts, levels = _pieces(vr, window)
    n_jumps = len(pts) - 2

    # jump symmetry residual
    sym = 0.0
    for j in range(1, len(levels)):
        s = pts[j]
        A, B = levels[j - 1], levels[j]
        sym = max(sym, abs(2.0 * M * s - A - B))

    # equipartition of line intersections
    zs = []
    if M != 0.0:
        for (lo, hi), lev in zip(zip(pts[:-1], pts[1:]), levels):
            z = lev / M
            if lo - tol_pt <= z <= hi + tol_pt:
                zs.append(z)
    gaps = np.diff(zs)
    equi = float(np.max(np.abs(gaps - gaps.mean()))) if gaps.size >= 2 else 0.0

    E0 = jf_half(vr, alpha, beta, M, window)

    if M != 0.0:
        H, V = staircase_params_general(alpha, beta, M)
    else:
        H, V = (d - c) / 10.0, 0.0
    level_scale = abs(V) if V != 0.0 else 1.0

    candidates: list[PureJumpFunction] = []
    deltas = [1e-3 * H, 1e-2 * H, 1e-1 * H]
    for delta in deltas:
        # move one jump
        for j in range(1, len(pts) - 1):
            for sgn in (+1.0, -1.0):
                s_new = pts[j] + sgn * delta
                if pts[j - 1] + tol_pt < s_new < pts[j + 1] - tol_pt:
                    cand = _pj_from_pieces(pts[:j] + [s_new] + pts[j + 1:], levels, window)
                    if cand is not None:
                        candidates.append(cand)
        # change one interior plateau level (end plateaus touch the window
        # boundary, where competitors must agree with the candidate)
        dlev = delta / H * level_scale
        for i in range(1, len(levels) - 1):
            for sgn in (+1.0, -1.0):
                lv = list(levels)
                lv[i] += sgn * dlev
                cand = _pj_from_pieces(pts, lv, window)
                if cand is not None:
                    candidates.append(cand)
        # insert a jump pair in each plateau
        for i, (lo, hi) in enumerate(zip(pts[:-1], pts[1:])):
            width = hi - lo
            if width < 4.0 * tol_pt:
                continue
            m = 0.5 * (lo + hi)
            dd = width / 4.0
            hgt = delta / H * level_scale
            for sgn in (+1.0, -1.0):
                new_pts = pts[:i + 1] + [m - dd, m + dd] + pts[i + 1:]
                new_lev = levels[:i + 1] + [levels[i] + sgn * hgt] + levels[i:]
                cand = _pj_from_pieces(new_pts, new_lev, window)
                if cand is not None:
                    candidates.append(cand)
    # merge each adjacent jump pair (place the merged jump at either original
    # location or the midpoint)
    for j in range(1, len(pts) - 2):
        for s_new in (pts[j], pts[j + 1], 0.5 * (pts[j] + pts[j + 1])):
            new_pts = pts[:j] + [s_new] + pts[j + 2:]
            new_lev = levels[:j] + levels[j + 1:]
            cand = _pj_from_pieces(new_pts, new_lev, window)
            if cand is not None:
                candidates.append(cand)
    # restructured equispaced staircases with the same boundary values
    va, vb = levels[0], levels[-1]
    for n in range(max(1, n_jumps - 2), n_jumps + 3):
        cand = _equispaced_candidate(window, va, vb, n, M)
        if cand is not None:
            candidates.append(cand)

    margin = math.inf
    for cand in candidates:
        if _same_pj(cand, vr):
            continue
        margin = min(margin, jf_half(cand, alpha, beta, M, window) - E0)
    if not math.isfinite(margin):
        margin = 0.0
    ok = (margin >= -tolerance * (1.0 + abs(E0)))
    return LocalMinReport(sym, equi, margin, ok)


def _same_pj(u: PureJumpFunction, v: PureJumpFunction, tol: float = 1e-10) -> bool:
    if len(u.jumps) != len(v.jumps):
        return False
    if abs(u.base - v.base) > tol:
        return False
    for (s1, h1), (s2, h2) in zip(u.jumps, v.jumps):
        if abs(s1 - s2) > tol or abs(h1 - h2) > tol:
            return False
    return True
