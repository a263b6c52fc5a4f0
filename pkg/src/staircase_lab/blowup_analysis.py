"""Blow-up extraction, staircase fitting, and the varifold pairing identity.

A blow-up recenters and rescales a profile at the microstructure scale
omega(eps): the "fake" blow-up subtracts the forcing value at the center, the
"true" blow-up subtracts the profile's own value (the two differ by a
constant), and low-resolution blow-ups use a caller-chosen coarser scale.
Fake blow-ups of minimizers approach oblique staircase translates, true
blow-ups horizontal/vertical ones; ``fit_staircase`` measures how close.

The varifold pairing integrates phi(x, u, arctan u') against the graph-length
element sqrt(1+u'^2); its limit pairs phi against the forcing with vertical
tangents weighted by |f'| on the sign sets of f'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .energy_core import SampledFunction, first_derivative, trapezoid_weights
from .gamma_tools import substitute
from .pure_jump import nearest_translation, staircase_params

__all__ = [
    "BlowUp",
    "StaircaseFit",
    "TestFunction",
    "extract_blowup",
    "lowres_blowup",
    "fit_staircase",
    "test_function",
    "varifold_pair",
    "varifold_limit",
]


@dataclass(frozen=True)
class BlowUp:
    """A recentered, rescaled window of a profile."""

    kind: str  # fake | true | lowres
    center: float
    scale: float
    profile: SampledFunction
    eps: float | None = None


def _max_feasible_halfwidth(u: SampledFunction, center: float, scale: float) -> float:
    return min(center - u.left, u.right - center) / scale


def _rescaled_profile(u: SampledFunction, center: float, scale: float,
                      halfwidth: float, shift: float) -> SampledFunction:
    wmax = _max_feasible_halfwidth(u, center, scale)
    if halfwidth > wmax + 1e-12:
        raise ValueError(
            f"window halfwidth {halfwidth} exits the domain; max feasible "
            f"halfwidth at this center and scale is {wmax:.6g}")
    spacing_y = u.spacing / scale
    n = int(math.ceil(2.0 * halfwidth / spacing_y)) + 1
    y = np.linspace(-halfwidth, halfwidth, n)
    vals = (u.interp(center + scale * y) - shift) / scale
    return SampledFunction(-halfwidth, 2.0 * halfwidth / (n - 1), vals)


def extract_blowup(u: SampledFunction, f: SampledFunction, center: float,
                   eps: float, window_halfwidth: float, kind: str) -> BlowUp:
    """Blow-up of ``u`` at ``center`` at scale omega(eps).

    kind "fake" subtracts f(center); kind "true" subtracts u(center).  The
    profile lives on [-W, W] in the rescaled variable with spacing at most
    the original spacing divided by the scale.
    """
    from .energy_core import omega
    if kind not in ("fake", "true"):
        raise ValueError("kind must be 'fake' or 'true'")
    scale = omega(eps)
    shift = float(f.interp(center)) if kind == "fake" else float(u.interp(center))
    prof = _rescaled_profile(u, center, scale, window_halfwidth, shift)
    return BlowUp(kind, center, scale, prof, eps)


def lowres_blowup(u: SampledFunction, center: float, scale: float,
                  window_halfwidth: float, eps: float | None = None) -> BlowUp:
    """Blow-up at a caller-chosen scale, recentered at u(center)."""
    shift = float(u.interp(center))
    prof = _rescaled_profile(u, center, scale, window_halfwidth, shift)
    return BlowUp("lowres", center, scale, prof, eps)


@dataclass(frozen=True)
class StaircaseFit:
    best_kind: str
    tau0_star: float
    distance: float
    step_length_estimate: float
    step_height_estimate: float
    distances: dict[str, float]


def fit_staircase(b: BlowUp, beta: float, slope_at_center: float,
                  kinds: tuple[str, ...] = ("oblique", "horizontal", "vertical")) -> StaircaseFit:
    """Fit the predicted staircase translates to a blow-up profile.

    Uses the optimal parameters (H, V) for the given fidelity weight and
    center slope, shrinks the window by H/2 at each side to avoid clipping a
    boundary jump, and reports the best translate over the requested kinds.
    Step length/height estimates come from the jump skeleton of the profile
    (NaN when fewer than two jumps are detected).
    """
    H, V = staircase_params(beta, slope_at_center)
    prof = b.profile
    if V == 0.0:
        w = trapezoid_weights(prof.n, prof.spacing)
        dist = float(w @ np.abs(prof.values))
        return StaircaseFit("zero", 0.0, dist, math.nan, math.nan, {"zero": dist})
    window = (prof.left + H / 2.0, prof.right - H / 2.0)
    if window[1] - window[0] < 2.0 * H:
        raise ValueError("blow-up window too narrow to fit a staircase step")
    dists: dict[str, float] = {}
    taus: dict[str, float] = {}
    for kind in kinds:
        tau, d = nearest_translation(prof, H, V, kind, window)
        dists[kind] = d
        taus[kind] = tau
    best = min(dists, key=dists.get)
    step_len = step_hgt = math.nan
    if b.eps is not None:
        cert = substitute(prof, b.eps)
        locs = [s for s, _ in cert.skeleton.jumps if window[0] < s < window[1]]
        hgts = [h for s, h in cert.skeleton.jumps if window[0] < s < window[1]]
        if len(locs) >= 2:
            step_len = float(np.mean(np.diff(locs)))
            step_hgt = float(np.mean(hgts))
    return StaircaseFit(best, taus[best], dists[best], step_len, step_hgt, dists)


@dataclass(frozen=True)
class TestFunction:
    """phi(x, s, theta) from the built-in catalog, referenced by string id."""

    id: str

    def __call__(self, x, s, theta):
        out = np.ones_like(np.asarray(x, dtype=float))
        for atom in self.id.split("*"):
            out = out * _atom(atom.strip(), x, s, theta)
        return out


def _atom(atom: str, x, s, theta):
    if atom == "one":
        return np.ones_like(np.asarray(x, dtype=float))
    if atom == "cos_theta":
        return np.cos(theta)
    if atom == "sin_theta":
        return np.sin(theta)
    if atom.startswith("x_poly_"):
        return np.asarray(x, dtype=float) ** int(atom[len("x_poly_"):])
    if atom.startswith("s_poly_"):
        return np.asarray(s, dtype=float) ** int(atom[len("s_poly_"):])
    raise ValueError(f"unknown test-function atom {atom!r}")


def test_function(phi_id: str) -> TestFunction:
    """Parse a catalog id: atoms one|cos_theta|sin_theta|x_poly_k|s_poly_k,
    joined by '*' for products."""
    tf = TestFunction(phi_id)
    tf(np.array([0.5]), np.array([0.0]), np.array([0.0]))  # validate atoms
    return tf


def varifold_pair(u: SampledFunction, phi) -> float:
    """Integral of phi(x, u, arctan u') * sqrt(1 + u'^2) over u's interval."""
    if isinstance(phi, str):
        phi = test_function(phi)
    d1 = first_derivative(u)
    theta = np.arctan(d1)
    w = trapezoid_weights(u.n, u.spacing)
    return float(w @ (phi(u.x, u.values, theta) * np.sqrt(1.0 + d1 * d1)))


def varifold_limit(f: SampledFunction, fprime: SampledFunction | np.ndarray | None,
                   phi) -> float:
    """Limit pairing: phi at flat tangents plus vertical-tangent terms
    weighted by |f'| on the sets {f' < 0} and {f' > 0}."""
    if isinstance(phi, str):
        phi = test_function(phi)
    if fprime is None:
        fp = first_derivative(f)
    elif isinstance(fprime, SampledFunction):
        fp = fprime.values
    else:
        fp = np.asarray(fprime, dtype=float)
    x, s = f.x, f.values
    w = trapezoid_weights(f.n, f.spacing)
    flat = phi(x, s, np.zeros_like(x))
    neg = (fp < 0.0)
    pos = (fp > 0.0)
    vert_neg = phi(x, s, np.full_like(x, -math.pi / 2.0)) * np.abs(fp) * neg
    vert_pos = phi(x, s, np.full_like(x, math.pi / 2.0)) * np.abs(fp) * pos
    return float(w @ (flat + vert_neg + vert_pos))
