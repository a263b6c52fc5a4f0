"""Pure jump functions, square-root jump energies, and canonical staircases.

A pure jump function is a base value plus finitely many weighted Heaviside
steps.  The value convention is right-continuous: at a jump location the
function takes the right limit.  The limit energies are

    J_half(u)  = sum over jumps in the window of |J|^(1/2),
    JF_half(u) = alpha * J_half(u) + beta * int (u - f)^2,

with the fidelity integral computed in closed form against a linear or
pure-jump forcing (no quadrature error on the limit side).

The canonical (H, V)-staircase is V*S(x/H) with S(x) = 2*floor((x+1)/2):
steps 2H wide and 2V tall, jumps at odd multiples of H, plateau midpoints
on the line V*x/H.  Its three translation families (oblique, horizontal,
vertical) are parametrized by tau0 in [-1, 1]; the endpoints are identified
(oblique +1 and -1 coincide, horizontal +-1 coincide with vertical +-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .energy_core import SampledFunction, trapezoid_weights

__all__ = [
    "PureJumpFunction",
    "StaircaseSpec",
    "pj_value",
    "j_half",
    "jf_half",
    "canonical_staircase",
    "staircase_params",
    "staircase_params_general",
    "translate",
    "semi_entire_minimizer",
    "strict_distance",
    "nearest_translation",
]

KINDS = ("oblique", "horizontal", "vertical")


@dataclass(frozen=True)
class PureJumpFunction:
    """base + sum of J * 1_{(s, b)}; right-continuous at jump locations."""

    base: float
    jumps: tuple[tuple[float, float], ...]
    domain: tuple[float, float]

    def __post_init__(self):
        a, b = self.domain
        if not b > a:
            raise ValueError(f"empty domain {self.domain}")
        locs = [s for s, _ in self.jumps]
        if any(h == 0 for _, h in self.jumps):
            raise ValueError("jump heights must be nonzero")
        if locs != sorted(locs) or len(set(locs)) != len(locs):
            raise ValueError("jump locations must be strictly increasing")
        if locs and (locs[0] <= a or locs[-1] >= b):
            raise ValueError("jump locations must lie strictly inside the domain")

    @property
    def locations(self) -> np.ndarray:
        return np.array([s for s, _ in self.jumps], dtype=float)

    @property
    def heights(self) -> np.ndarray:
        return np.array([h for _, h in self.jumps], dtype=float)

    def value(self, x):
        """Vectorized right-continuous evaluation (right limit at jumps)."""
        x = np.asarray(x, dtype=float)
        a, b = self.domain
        if np.any(x < a - 1e-12) or np.any(x > b + 1e-12):
            raise ValueError("evaluation point outside domain")
        if not self.jumps:
            return np.broadcast_to(np.float64(self.base), x.shape).copy() if x.shape else float(self.base)
        idx = np.searchsorted(self.locations, x, side="right")
        csum = np.concatenate([[0.0], np.cumsum(self.heights)])
        out = self.base + csum[idx]
        return out if x.shape else float(out)

    def boundary_values(self) -> tuple[float, float]:
        """One-sided limits at the interval endpoints: (base, base + sum J)."""
        total = float(self.heights.sum()) if self.jumps else 0.0
        return self.base, self.base + total

    def total_variation(self, window: tuple[float, float] | None = None) -> float:
        if not self.jumps:
            return 0.0
        if window is None:
            return float(np.abs(self.heights).sum())
        c, d = window
        locs = self.locations
        mask = (locs > c) & (locs < d)
        return float(np.abs(self.heights[mask]).sum())

    def restricted(self, window: tuple[float, float]) -> "PureJumpFunction":
        """Restriction to an open sub-window; base is the value just right of c."""
        c, d = window
        a, b = self.domain
        if c < a - 1e-12 or d > b + 1e-12 or not d > c:
            raise ValueError("window must be a nonempty sub-interval of the domain")
        locs = self.locations
        keep = [(s, h) for (s, h) in self.jumps if c < s < d]
        base = self.base + float(self.heights[locs <= c].sum()) if self.jumps else self.base
        return PureJumpFunction(base, tuple(keep), (c, d))

    def sample(self, n: int, window: tuple[float, float] | None = None) -> SampledFunction:
        a, b = window if window is not None else self.domain
        x = np.linspace(a, b, n)
        return SampledFunction(a, (b - a) / (n - 1), self.value(x))

    def to_record(self) -> dict:
        return {
            "base": self.base,
            "jumps": [[s, h] for s, h in self.jumps],
            "domain": list(self.domain),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "PureJumpFunction":
        return cls(float(rec["base"]),
                   tuple((float(s), float(h)) for s, h in rec["jumps"]),
                   (float(rec["domain"][0]), float(rec["domain"][1])))


def pj_value(u: PureJumpFunction, x) -> float:
    """Right-continuous value of ``u`` at ``x`` (right limit at jumps)."""
    return u.value(x)


def j_half(u: PureJumpFunction, window: tuple[float, float] | None = None) -> float:
    """Sum of |J|^(1/2) over jumps in the open window (whole domain if None)."""
    if not u.jumps:
        return 0.0
    if window is None:
        window = u.domain
    c, d = window
    locs = u.locations
    mask = (locs > c) & (locs < d)
    return float(np.sqrt(np.abs(u.heights[mask])).sum())


def _linear_fid(c: float, M: float, x0: float, x1: float) -> float:
    """Exact integral of (c - M x)^2 over [x0, x1]."""
    if M == 0.0:
        return c * c * (x1 - x0)
    return ((c - M * x0) ** 3 - (c - M * x1) ** 3) / (3.0 * M)


def _piece_levels(u: PureJumpFunction, window: tuple[float, float]):
    """Breakpoints and constant levels of u inside the window."""
    c, d = window
    locs = [s for s in u.locations if c < s < d]
    pts = [c] + locs + [d]
    eps = 0.0
    levels = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        mid = 0.5 * (lo + hi)
        levels.append(float(u.value(mid)))
    return pts, levels


def jf_half(u: PureJumpFunction, alpha: float, beta: float, forcing,
            window: tuple[float, float] | None = None) -> float:
    """alpha * J_half + beta * exact fidelity against linear or pure-jump forcing.

    ``forcing`` is either a slope (float M, meaning f(x) = M x) or a
    PureJumpFunction on a domain containing the window.
    """
    if window is None:
        window = u.domain
    jd = alpha * j_half(u, window)
    pts, levels = _piece_levels(u, window)
    fid = 0.0
    if isinstance(forcing, PureJumpFunction):
        fpts, flevels = _piece_levels(forcing, window)
        allpts = sorted(set(pts) | set(fpts))
        for lo, hi in zip(allpts[:-1], allpts[1:]):
            mid = 0.5 * (lo + hi)
            cu = float(u.value(mid))
            cf = float(forcing.value(mid))
            fid += (cu - cf) ** 2 * (hi - lo)
    else:
        M = float(forcing)
        for (lo, hi), lev in zip(zip(pts[:-1], pts[1:]), levels):
            fid += _linear_fid(lev, M, lo, hi)
    return jd + beta * fid


@dataclass(frozen=True)
class StaircaseSpec:
    """Parameters of a canonical staircase translate.

    The degenerate case V = 0 is the zero function regardless of H and kind.
    """

    H: float
    V: float
    kind: str = "oblique"
    tau0: float = 0.0

    def __post_init__(self):
        if not self.H > 0:
            raise ValueError(f"H must be positive, got {self.H}")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if not -1.0 <= self.tau0 <= 1.0:
            raise ValueError(f"tau0 must lie in [-1,1], got {self.tau0}")

    def value(self, x):
        return translate_value(self.H, self.V, self.kind, self.tau0, x)

    def to_pure_jump(self, window: tuple[float, float]) -> PureJumpFunction:
        return translate(self.H, self.V, self.kind, self.tau0, window)

    def to_record(self) -> dict:
        return {"H": self.H, "V": self.V, "kind": self.kind, "tau0": self.tau0}


def _staircase_value(H: float, V: float, x):
    """V * S(x/H) with S(x) = 2*floor((x+1)/2); right-continuous."""
    x = np.asarray(x, dtype=float)
    return V * 2.0 * np.floor((x / H + 1.0) / 2.0)


def translate_value(H: float, V: float, kind: str, tau0: float, x):
    """Pointwise evaluation of a staircase translate (right-continuous)."""
    if V == 0.0:
        x = np.asarray(x, dtype=float)
        return np.zeros_like(x) if x.shape else 0.0
    if kind == "oblique":
        out = _staircase_value(H, V, np.asarray(x, dtype=float) - H * tau0) + V * tau0
    elif kind == "horizontal":
        out = _staircase_value(H, V, np.asarray(x, dtype=float) - H * tau0)
    elif kind == "vertical":
        out = _staircase_value(H, V, np.asarray(x, dtype=float) - H) + V * (1.0 - tau0)
    else:
        raise ValueError(f"kind must be one of {KINDS}")
    return out


def _staircase_pj(H: float, V: float, shift_x: float, shift_v: float,
                  window: tuple[float, float]) -> PureJumpFunction:
    """S_{H,V}(x - shift_x) + shift_v as a PureJumpFunction on the window."""
    c, d = window
    if V == 0.0:
        return PureJumpFunction(0.0, (), window)
    # jumps of S_{H,V}(x - shift_x) sit at shift_x + (2k+1)H
    k_lo = math.ceil((c - shift_x - H) / (2.0 * H))
    k_hi = math.floor((d - shift_x - H) / (2.0 * H))
    locs = [shift_x + (2 * k + 1) * H for k in range(k_lo, k_hi + 1)]
    locs = [s for s in locs if c < s < d]
    base = float(_staircase_value(H, V, c - shift_x)) + shift_v
    # a window endpoint sitting on a jump makes base ambiguous; the right limit
    # convention keeps it well defined, but drop locations equal to c exactly
    jumps = tuple((s, 2.0 * V) for s in locs)
    return PureJumpFunction(base, jumps, window)


def canonical_staircase(H: float, V: float,
                        window: tuple[float, float] | None = None):
    """Canonical (H, V)-staircase: a StaircaseSpec, or its restriction to a window."""
    spec = StaircaseSpec(H, V, "oblique", 0.0)
    if window is None:
        return spec
    return spec.to_pure_jump(window)


def translate(H: float, V: float, kind: str, tau0: float,
              window: tuple[float, float]) -> PureJumpFunction:
    """Staircase translate as a PureJumpFunction on a finite window.

    oblique:    S_{H,V}(x - H*tau0) + V*tau0
    horizontal: S_{H,V}(x - H*tau0)
    vertical:   S_{H,V}(x - H) + V*(1 - tau0)
    """
    if not -1.0 <= tau0 <= 1.0:
        raise ValueError(f"tau0 must lie in [-1,1], got {tau0}")
    if not H > 0:
        raise ValueError(f"H must be positive, got {H}")
    if kind == "oblique":
        return _staircase_pj(H, V, H * tau0, V * tau0, window)
    if kind == "horizontal":
        return _staircase_pj(H, V, H * tau0, 0.0, window)
    if kind == "vertical":
        return _staircase_pj(H, V, H, V * (1.0 - tau0), window)
    raise ValueError(f"kind must be one of {KINDS}")


def staircase_params(beta: float, slope: float) -> tuple[float, float]:
    """Optimal staircase parameters for fidelity weight beta and local slope.

    H = (24 / (beta^2 |slope|^3))^(1/5), V = slope * H; slope = 0 degenerates
    to the zero staircase (V = 0, H = 1 by convention).
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if slope == 0.0:
        return 1.0, 0.0
    H = (24.0 / (beta ** 2 * abs(slope) ** 3)) ** 0.2
    return H, slope * H


ALPHA0 = 16.0 / math.sqrt(3.0)


def staircase_params_general(alpha: float, beta: float, M: float) -> tuple[float, float]:
    """Staircase parameters for a general jump-energy weight alpha.

    H = (1/2) * (9 alpha^2 / (beta^2 |M|^3))^(1/5), V = M * H.  At
    alpha = 16/sqrt(3) this coincides with :func:`staircase_params`.
    """
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    if M == 0.0:
        return 1.0, 0.0
    H = 0.5 * (9.0 * alpha ** 2 / (beta ** 2 * abs(M) ** 3)) ** 0.2
    return H, M * H


def semi_entire_minimizer(alpha: float, beta: float, M: float,
                          L: float) -> PureJumpFunction:
    """One-sided limit staircase on (0, L).

    Constant M*z0 on (0, z0) with z0 = sqrt(5/3)*H, then the (H, V)-staircase
    shifted to start there; jumps at z0 + (2k+1)H of height 2V.
    """
    if not (alpha > 0 and beta > 0 and L > 0):
        raise ValueError("alpha, beta, L must be positive")
    if M == 0.0:
        return PureJumpFunction(0.0, (), (0.0, L))
    H, V = staircase_params_general(alpha, beta, M)
    z0 = math.sqrt(5.0 / 3.0) * H
    stair = _staircase_pj(H, V, z0, M * z0, (0.0, L))
    # constant M*z0 up to the first staircase jump at z0 + H: drop the
    # periodic continuation below z0
    jumps = tuple((s, h) for s, h in stair.jumps if s >= z0 + H - 1e-12 * H)
    return PureJumpFunction(M * z0, jumps, (0.0, L))


def strict_distance(u: SampledFunction, v, window: tuple[float, float]) -> tuple[float, float]:
    """(L1 gap, |TV gap|) between a sampled function and a pure-jump target.

    ``v`` may be a PureJumpFunction or a StaircaseSpec.  Window endpoints must
    not sit on jump locations of ``v`` (strict convergence needs jump-free
    window boundaries); the error suggests a shifted window.
    """
    c, d = window
    if not (u.left - 1e-9 <= c < d <= u.right + 1e-9):
        raise ValueError("window must lie inside the sampled function's interval")
    if isinstance(v, StaircaseSpec):
        locs = _translate_jump_locations(v, (c - v.H, d + v.H))
        tv_target_fn = None
        value_fn = v.value
    else:
        locs = list(v.locations)
        value_fn = v.value
    tol = max(u.spacing, 1e-9 * max(1.0, abs(c), abs(d)))
    for endpoint in (c, d):
        for s in locs:
            if abs(endpoint - s) < tol:
                raise ValueError(
                    f"window endpoint {endpoint} sits on jump at {s}; "
                    f"shift the window by {2 * tol:.3g}")
    i0 = int(math.ceil((c - u.left) / u.spacing - 1e-9))
    i1 = int(math.floor((d - u.left) / u.spacing + 1e-9))
    if i1 - i0 < 2:
        raise ValueError("window contains fewer than 3 samples")
    xs = u.left + u.spacing * np.arange(i0, i1 + 1)
    uu = u.values[i0:i1 + 1]
    vv = np.asarray(value_fn(xs), dtype=float)
    w = trapezoid_weights(xs.size, u.spacing)
    l1_gap = float(w @ np.abs(uu - vv))
    tv_u = float(np.abs(np.diff(uu)).sum())
    tv_v = sum(1.0 for s in locs if c < s < d)
    if isinstance(v, StaircaseSpec):
        tv_v = 2.0 * abs(v.V) * tv_v
    else:
        tv_v = v.total_variation((c, d))
    return l1_gap, abs(tv_u - tv_v)


def _translate_jump_locations(spec: StaircaseSpec, window: tuple[float, float]) -> list[float]:
    if spec.V == 0.0:
        return []
    if spec.kind == "vertical":
        shift = spec.H
    else:
        shift = spec.H * spec.tau0
    c, d = window
    k_lo = math.ceil((c - shift - spec.H) / (2.0 * spec.H)) - 1
    k_hi = math.floor((d - shift - spec.H) / (2.0 * spec.H)) + 1
    return [shift + (2 * k + 1) * spec.H for k in range(k_lo, k_hi + 1)
            if c < shift + (2 * k + 1) * spec.H < d]


def _translation_distance(u: SampledFunction, H: float, V: float, kind: str,
                          tau0: float, window: tuple[float, float]) -> float:
    spec = StaircaseSpec(H, V, kind, tau0)
    # evaluate directly: window endpoints were pre-checked by the caller to
    # avoid landing on jumps for any tau0 on the search grid
    c, d = window
    i0 = int(math.ceil((c - u.left) / u.spacing - 1e-9))
    i1 = int(math.floor((d - u.left) / u.spacing + 1e-9))
    xs = u.left + u.spacing * np.arange(i0, i1 + 1)
    uu = u.values[i0:i1 + 1]
    vv = np.asarray(spec.value(xs), dtype=float)
    w = trapezoid_weights(xs.size, u.spacing)
    l1_gap = float(w @ np.abs(uu - vv))
    tv_u = float(np.abs(np.diff(uu)).sum())
    tv_v = 2.0 * abs(V) * len(_translate_jump_locations(spec, (c, d)))
    return l1_gap + abs(tv_u - tv_v)


def nearest_translation(u: SampledFunction, H: float, V: float, kind: str,
                        window: tuple[float, float] | None = None) -> tuple[float, float]:
    """Best-fitting translate phase: argmin over tau0 of L1 gap + TV gap.

    Coarse 401-point grid on [-1, 1], then golden-section refinement of the
    winning bracket down to phase resolution 1e-3.  The degenerate case V = 0
    returns (0, integral of |u|).
    """
    if window is None:
        window = (u.left, u.right)
    if V == 0.0:
        c, d = window
        i0 = int(math.ceil((c - u.left) / u.spacing - 1e-9))
        i1 = int(math.floor((d - u.left) / u.spacing + 1e-9))
        xs_n = i1 - i0 + 1
        w = trapezoid_weights(xs_n, u.spacing)
        return 0.0, float(w @ np.abs(u.values[i0:i1 + 1]))
    taus = np.linspace(-1.0, 1.0, 401)
    dists = np.array([_translation_distance(u, H, V, kind, t, window) for t in taus])
    k = int(np.argmin(dists))
    lo = taus[max(0, k - 1)]
    hi = taus[min(taus.size - 1, k + 1)]
    # golden-section refinement to 1e-3 phase resolution
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1 = _translation_distance(u, H, V, kind, x1, window)
    f2 = _translation_distance(u, H, V, kind, x2, window)
    while hi - lo > 1e-3:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = _translation_distance(u, H, V, kind, x1, window)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = _translation_distance(u, H, V, kind, x2, window)
    tau_star = 0.5 * (lo + hi)
    return float(tau_star), float(_translation_distance(u, H, V, kind, tau_star, window))
