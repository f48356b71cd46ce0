"""Problem description and closed-form benchmark solutions on the unit ball.

For f(x) = P_k^{(s, n/2-1)}(2|x|^2 - 1) on the unit ball the Dirichlet
problem has the explicit solution

    u(x) = c(n,s,k) (1 - |x|^2)_+^s P_k^{(s, n/2-1)}(2|x|^2 - 1),
    c(n,s,k) = k! Gamma(n/2 + k) / (2^{2s} Gamma(1+s+k) Gamma(n/2+s+k)),

which drives every error computation in the package.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .special import gamma_fn, jacobi_poly, jacobi_poly_deriv

__all__ = ["Domain", "ProblemSpec", "exact_rhs", "exact_solution", "exact_gradient"]


class Domain(enum.Enum):
    INTERVAL = "interval"
    UNIT_DISK = "unit_disk"


@dataclass(frozen=True)
class ProblemSpec:
    n: int
    s: float
    k: int = 0
    domain: Domain = None

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.n}")
        if not 0.0 < self.s < 1.0:
            raise ValueError(f"fractional index must lie in (0,1), got {self.s}")
        if self.k < 0:
            raise ValueError("polynomial index k must be nonnegative")
        if self.domain is None:
            object.__setattr__(
                self, "domain", Domain.INTERVAL if self.n == 1 else Domain.UNIT_DISK
            )
        if (self.n == 1) != (self.domain is Domain.INTERVAL):
            raise ValueError("n = 1 requires the interval, n = 2 the unit disk")

    @property
    def jacobi_beta(self):
        return 0.5 * self.n - 1.0

    @property
    def solution_constant(self):
        k, s, n = self.k, self.s, self.n
        return (
            math.factorial(k)
            * gamma_fn(0.5 * n + k)
            / (2.0 ** (2 * s) * gamma_fn(1.0 + s + k) * gamma_fn(0.5 * n + s + k))
        )


def _radius_sq(spec, x):
    x = np.asarray(x, dtype=float)
    if spec.n == 1:
        return x * x
    return np.sum(x * x, axis=-1)


def _jacobi_vec(spec, t):
    # jacobi_poly is plain arithmetic in z, so it vectorizes over arrays
    t = np.asarray(t, dtype=float)
    return np.broadcast_to(np.asarray(
        jacobi_poly(spec.k, spec.s, spec.jacobi_beta, t), dtype=float), t.shape).copy()


def _jacobi_deriv_vec(spec, t):
    t = np.asarray(t, dtype=float)
    return np.broadcast_to(np.asarray(
        jacobi_poly_deriv(spec.k, spec.s, spec.jacobi_beta, t), dtype=float), t.shape).copy()


def exact_rhs(spec, x):
    """Right-hand side f(x) = P_k^{(s, n/2-1)}(2|x|^2 - 1)."""
    r2 = _radius_sq(spec, x)
    return _jacobi_vec(spec, 2.0 * r2 - 1.0)


def _weight_pow_s(r2, s):
    # (1 - r^2)_+^s via log1p to keep accuracy near the boundary.
    r2 = np.asarray(r2, dtype=float)
    out = np.zeros(r2.shape)
    inside = r2 < 1.0
    out[inside] = np.exp(s * np.log1p(-r2[inside]))
    return out


def exact_solution(spec, x):
    """Exact solution on the unit ball, extended by zero outside."""
    r2 = np.asarray(_radius_sq(spec, x))
    scalar = r2.ndim == 0
    r2 = np.atleast_1d(r2)
    vals = spec.solution_constant * _weight_pow_s(r2, spec.s) * _jacobi_vec(spec, 2.0 * r2 - 1.0)
    return vals[0] if scalar else vals


def exact_gradient(spec, x):
    """Gradient of the exact solution at strictly interior points.

    grad u = c x [ -2s (1-|x|^2)^{s-1} P(t) + 4 (1-|x|^2)^s P'(t) ],  t = 2|x|^2 - 1.

    Unbounded at the boundary, hence the strict |x| < 1 requirement.
    """
    x = np.asarray(x, dtype=float)
    r2 = np.asarray(_radius_sq(spec, x))
    if np.any(r2 >= 1.0):
        raise ValueError("exact_gradient requires strictly interior points")
    scalar = r2.ndim == 0
    r2 = np.atleast_1d(r2)
    t = 2.0 * r2 - 1.0
    s = spec.s
    w = np.exp(s * np.log1p(-r2))        # (1-r^2)^s
    wm1 = np.exp((s - 1.0) * np.log1p(-r2))  # (1-r^2)^{s-1}
    radial = spec.solution_constant * (
        -2.0 * s * wm1 * _jacobi_vec(spec, t) + 4.0 * w * _jacobi_deriv_vec(spec, t)
    )
    if spec.n == 1:
        g = radial * np.atleast_1d(x)
        return g[0] if scalar else g
    g = radial[..., None] * np.atleast_2d(x)
    return g[0] if scalar else g


def load_solution_pairing(spec):
    """Closed form of the duality pairing of f with the exact solution u.

    Jacobi orthogonality reduces the integral of f u over the ball to a
    single weighted norm of P_k^{(s, n/2-1)}; used to cross-check the
    quadrature route in the energy-error identity.
    """
    s, k, n = spec.s, spec.k, spec.n
    beta = spec.jacobi_beta
    c = spec.solution_constant
    # Radial substitution t = 2|x|^2 - 1 turns int f u into the squared
    # Jacobi norm with weight (1-t)^s (1+t)^beta:
    #   h_k = 2^{s+beta+1}/(2k+s+beta+1) * G(k+s+1)G(k+beta+1)/(G(k+s+beta+1) k!).
    hk = (
        2.0 ** (s + beta + 1.0)
        / (2.0 * k + s + beta + 1.0)
        * gamma_fn(k + s + 1.0)
        * gamma_fn(k + beta + 1.0)
        / (gamma_fn(k + s + beta + 1.0) * math.factorial(k))
    )
    angular = 1.0 if n == 1 else math.pi
    return c * angular * 2.0 ** (-(s + beta + 1.0)) * hk
