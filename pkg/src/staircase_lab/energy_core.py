"""Discrete evaluation of the perturbed Perona-Malik energies.

Three closely related functionals live here.  With ``w(e) = e*sqrt(|log e|)``
the microstructure scale, the original functional on an interval is

    PMF(u) = int e^6 w^4 u''^2 + log(1 + u'^2) + beta (u - f)^2 dx,

and its blow-up rescaling (substitute x = x0 + w*y, divide by w^3) is

    RPMF(v) = int e^6 v''^2 + (1/w^2) log(1 + v'^2) + beta (v - g)^2 dy,

with RPM the same thing without the fidelity term.  Derivatives are centered
finite differences (one-sided second order at the endpoints) and integrals are
trapezoid sums on the sample grid, so the change of variables above is exact in
floating point when both sides share the matched grid.

Also here: the closed-form cubic that minimizes bending energy among H^2
functions with prescribed endpoint values and slopes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GridError",
    "SampledFunction",
    "EnergyBreakdown",
    "CubicSolution",
    "omega",
    "first_derivative",
    "second_derivative",
    "trapezoid_weights",
    "eval_pmf",
    "eval_rpm",
    "eval_rpmf",
    "cubic_interpolant",
]


class GridError(ValueError):
    """Raised for malformed grids or mismatched grid pairs."""


def omega(eps: float) -> float:
    """Microstructure scale w(e) = e * |log e|^(1/2), for e in (0,1)."""
    if not 0.0 < eps < 1.0:
        raise GridError(f"eps must lie in (0,1), got {eps}")
    return eps * math.sqrt(abs(math.log(eps)))


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """A real function sampled on a uniform grid.

    The grid is ``left + k*spacing`` for ``k = 0..len(values)-1``.  At least
    three samples are required so that second differences exist.
    """

    left: float
    spacing: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.size < 3:
            raise GridError("need a 1-D array of at least 3 samples")
        if not self.spacing > 0:
            raise GridError(f"spacing must be positive, got {self.spacing}")
        if not np.all(np.isfinite(vals)):
            raise GridError("samples must be finite")

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def right(self) -> float:
        return self.left + self.spacing * (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return self.left + self.spacing * np.arange(self.n)

    @classmethod
    def from_callable(cls, fn, left: float, right: float, n: int) -> "SampledFunction":
        if not right > left:
            raise GridError("empty interval")
        if n < 3:
            raise GridError("need at least 3 samples")
        x = np.linspace(left, right, n)
        return cls(left, (right - left) / (n - 1), np.asarray(fn(x), dtype=float))

    def interp(self, x) -> np.ndarray:
        """Linear interpolation at points inside the grid."""
        return np.interp(x, self.x, self.values)

    def restrict(self, a: float, b: float) -> "SampledFunction":
        """Sub-grid between the nearest sample indices to ``a`` and ``b``."""
        i0 = max(0, int(round((a - self.left) / self.spacing)))
        i1 = min(self.n - 1, int(round((b - self.left) / self.spacing)))
        if i1 - i0 < 2:
            raise GridError("restriction would have fewer than 3 samples")
        return SampledFunction(self.left + i0 * self.spacing, self.spacing,
                               self.values[i0:i1 + 1])


@dataclass(frozen=True)
class EnergyBreakdown:
    """The three energy components and their sum."""

    bending: float
    gradient_log: float
    fidelity: float
    total: float

    @classmethod
    def of(cls, bending: float, gradient_log: float, fidelity: float) -> "EnergyBreakdown":
        return cls(bending, gradient_log, fidelity, bending + gradient_log + fidelity)


def _check_pair(u: SampledFunction, f: SampledFunction) -> None:
    if u.n != f.n:
        raise GridError(f"grid length mismatch: {u.n} vs {f.n}")
    tol = 1e-9 * max(1.0, abs(u.spacing))
    if abs(u.spacing - f.spacing) > tol or abs(u.left - f.left) > 1e-9 * max(1.0, abs(u.left), 1.0):
        raise GridError("grids differ in placement or spacing")


def first_derivative(u: SampledFunction) -> np.ndarray:
    """Centered first differences; one-sided second order at the endpoints."""
    v = u.values
    h = u.spacing
    d = np.empty_like(v)
    d[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    d[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    return d


def second_derivative(u: SampledFunction) -> np.ndarray:
    """Centered second differences; nearest interior stencil at the endpoints."""
    v = u.values
    h2 = u.spacing * u.spacing
    d = np.empty_like(v)
    d[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / h2
    d[0] = (v[0] - 2.0 * v[1] + v[2]) / h2
    d[-1] = (v[-1] - 2.0 * v[-2] + v[-3]) / h2
    return d


def trapezoid_weights(n: int, spacing: float) -> np.ndarray:
    w = np.full(n, spacing)
    w[0] = w[-1] = 0.5 * spacing
    return w


def _breakdown(u: SampledFunction, c_bend: float, c_log: float,
               beta: float, f: SampledFunction | None) -> EnergyBreakdown:
    w = trapezoid_weights(u.n, u.spacing)
    d1 = first_derivative(u)
    d2 = second_derivative(u)
    bending = c_bend * float(w @ (d2 * d2))
    grad_log = c_log * float(w @ np.log1p(d1 * d1))
    if f is None:
        fid = 0.0
    else:
        r = u.values - f.values
        fid = beta * float(w @ (r * r))
    return EnergyBreakdown.of(bending, grad_log, fid)


def eval_pmf(u: SampledFunction, eps: float, beta: float,
             f: SampledFunction) -> EnergyBreakdown:
    """Original functional: e^6 w^4 bending + log-gradient + beta fidelity."""
    _check_pair(u, f)
    if beta <= 0:
        raise GridError(f"beta must be positive, got {beta}")
    w = omega(eps)
    return _breakdown(u, eps ** 6 * w ** 4, 1.0, beta, f)


def eval_rpm(v: SampledFunction, eps: float) -> float:
    """Rescaled principal part: e^6 bending + (1/w^2) log-gradient."""
    w = omega(eps)
    return _breakdown(v, eps ** 6, 1.0 / (w * w), 1.0, None).total


def eval_rpmf(v: SampledFunction, eps: float, beta: float,
              g: SampledFunction) -> EnergyBreakdown:
    """Rescaled functional with fidelity against the rescaled forcing g."""
    _check_pair(v, g)
    if beta <= 0:
        raise GridError(f"beta must be positive, got {beta}")
    w = omega(eps)
    return _breakdown(v, eps ** 6, 1.0 / (w * w), beta, g)


@dataclass(frozen=True)
class CubicSolution:
    """The bending-optimal cubic for endpoint data (A0, A1) at a, (B0, B1) at b.

    Coefficients are for the variable ``y = x - (a+b)/2``.  ``min_bending``
    is the exact integral of w''^2, the smallest possible among H^2 functions
    matching the four endpoint data; the sup bounds dominate |w| and |w'|
    on [a, b].
    """

    a: float
    b: float
    coefficients: tuple[float, float, float, float]
    min_bending: float
    sup_value_bound: float
    sup_slope_bound: float

    def __call__(self, x):
        c0, c1, c2, c3 = self.coefficients
        y = np.asarray(x, dtype=float) - 0.5 * (self.a + self.b)
        return ((c3 * y + c2) * y + c1) * y + c0

    def derivative(self, x):
        c0, c1, c2, c3 = self.coefficients
        y = np.asarray(x, dtype=float) - 0.5 * (self.a + self.b)
        return (3.0 * c3 * y + 2.0 * c2) * y + c1

    def second_derivative(self, x):
        c0, c1, c2, c3 = self.coefficients
        y = np.asarray(x, dtype=float) - 0.5 * (self.a + self.b)
        return 6.0 * c3 * y + 2.0 * c2

    def sample(self, n: int) -> SampledFunction:
        x = np.linspace(self.a, self.b, n)
        return SampledFunction(self.a, (self.b - self.a) / (n - 1), self(x))


def cubic_interpolant(a: float, b: float, A0: float, A1: float,
                      B0: float, B1: float) -> CubicSolution:
    """Unique cubic with w(a)=A0, w'(a)=A1, w(b)=B0, w'(b)=B1.

    It minimizes int w''^2 among all H^2 competitors with those endpoint
    data; the minimum value is returned in closed form.
    """
    if not b > a:
        raise GridError(f"need a < b, got a={a}, b={b}")
    d = b - a
    c0 = 0.5 * (A0 + B0) - (B1 - A1) * d / 8.0
    c1 = 1.5 * (B0 - A0) / d - 0.25 * (A1 + B1)
    c2 = (B1 - A1) / (2.0 * d)
    c3 = -2.0 * (B0 - A0) / d ** 3 + (A1 + B1) / d ** 2
    min_bending = (B1 - A1) ** 2 / d + 12.0 / d ** 3 * ((B0 - A0) - 0.5 * (A1 + B1) * d) ** 2
    sup_value = 1.5 * (abs(A0) + abs(B0)) + 0.5 * (abs(A1) + abs(B1)) * d
    sup_slope = 3.0 * abs(B0 - A0) / d + 1.5 * (abs(A1) + abs(B1))
    return CubicSolution(a, b, (c0, c1, c2, c3), min_bending, sup_value, sup_slope)
