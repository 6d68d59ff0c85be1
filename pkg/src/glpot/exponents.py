"""Exponent arithmetic for fractional integration on R^d.

Pure double-precision formulas relating an integrability exponent p to the
exponent q gained under convolution with an |y|^(alpha-d) kernel, together
with the constant-free shape functions of the corresponding operator-norm
bounds.  Inputs are validated against their open intervals with a fixed
margin of 1e-12; endpoint blow-ups are the object of study, so out-of-range
values raise :class:`DomainError` instead of being clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

#: validation margin against open-interval endpoints
ENDPOINT_MARGIN = 1e-12


@dataclass(frozen=True)
class PotentialParams:
    """Dimension d and kernel order alpha, with 0 < alpha < d."""

    d: int
    alpha: float

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.d!r}")
        if not (0.0 < self.alpha < self.d):
            raise DomainError(f"order must satisfy 0 < alpha < d, got alpha={self.alpha}, d={self.d}")

    @property
    def q_lower(self) -> float:
        """Lower endpoint d/(d-alpha) of the image exponent interval."""
        return self.d / (self.d - self.alpha)

    @property
    def p_upper(self) -> float:
        """Upper endpoint d/alpha of the source exponent interval."""
        return self.d / self.alpha


@dataclass(frozen=True)
class MultiIndex:
    """Non-negative integer multi-index; ``order`` is the component sum."""

    components: tuple[int, ...]

    def __post_init__(self):
        comps = tuple(int(c) for c in self.components)
        if any(c < 0 for c in comps):
            raise DomainError(f"multi-index components must be >= 0, got {self.components!r}")
        object.__setattr__(self, "components", comps)

    @property
    def order(self) -> int:
        return sum(self.components)


def _require_open(value: float, lo: float, hi: float, name: str) -> None:
    if not (value - lo >= ENDPOINT_MARGIN and (hi == math.inf or hi - value >= ENDPOINT_MARGIN)):
        raise DomainError(f"{name}={value!r} outside open interval ({lo}, {hi})")


def _check_multiindex(params: PotentialParams, xi: MultiIndex) -> float:
    """Validate xi against params and return alpha - |xi|."""
    if len(xi.components) != params.d:
        raise DomainError(f"multi-index length {len(xi.components)} != dimension {params.d}")
    reduced = params.alpha - xi.order
    if reduced <= 0.0:
        raise DomainError(f"|xi|={xi.order} must be < alpha={params.alpha}")
    return reduced


def sobolev_q(p: float, params: PotentialParams) -> float:
    """Image exponent q with 1/q = 1/p - alpha/d, for p in (1, d/alpha)."""
    _require_open(p, 1.0, params.p_upper, "p")
    return p * params.d / (params.d - params.alpha * p)


def sobolev_p(q: float, params: PotentialParams) -> float:
    """Inverse of :func:`sobolev_q`: p = d q / (d + alpha q), for q > d/(d-alpha)."""
    _require_open(q, params.q_lower, math.inf, "q")
    return params.d * q / (params.d + params.alpha * q)


def holder_conjugate(p: float) -> float:
    """p / (p - 1) for p > 1; an involution, overflowing safely to inf as p -> 1+."""
    if p - 1.0 < ENDPOINT_MARGIN:
        raise DomainError(f"p={p!r} must exceed 1")
    return p / (p - 1.0)


def young_k(r: float, p: float) -> float:
    """Convolution exponent k with 1 + 1/r = 1/p + 1/k, i.e. k = r p'/(r + p').

    Requires r >= 1 and p > 1, and the relation must admit k >= 1.
    """
    if r < 1.0:
        raise DomainError(f"r={r!r} must be >= 1")
    pp = holder_conjugate(p)
    k = r * pp / (r + pp)
    if k < 1.0 - ENDPOINT_MARGIN:
        raise DomainError(f"Young relation gives k={k} < 1 for r={r}, p={p}")
    residual = 1.0 + 1.0 / r - 1.0 / p - 1.0 / k
    if abs(residual) > 1e-12:
        raise ArithmeticError(f"Young identity violated by {residual:.3e}")
    return k


def riesz_bound_shape(p: float, params: PotentialParams) -> float:
    """Constant-free shape [(p-1)(d/alpha - p)]^(alpha/d - 1) of the L_p -> L_q bound.

    Finite and positive on (1, d/alpha); diverges at both endpoints.
    """
    _require_open(p, 1.0, params.p_upper, "p")
    bracket = (p - 1.0) * (params.p_upper - p)
    return bracket ** (params.alpha / params.d - 1.0)


def derivative_bound_shape(p: float, params: PotentialParams, xi: MultiIndex) -> float:
    """Shape of the norm bound for order-|xi| derivatives of the potential."""
    reduced = _check_multiindex(params, xi)
    p_hi = params.d / reduced
    _require_open(p, 1.0, p_hi, "p")
    bracket = (p - 1.0) * (p_hi - p)
    lead = 1.0 / (params.alpha * (params.d - params.alpha))
    return lead * bracket ** (reduced / params.d - 1.0)


def singular_bound_shape(p: float) -> float:
    """p^2/(p-1), the operator-norm shape of the order-zero singular transform."""
    if p - 1.0 < ENDPOINT_MARGIN:
        raise DomainError(f"p={p!r} must exceed 1")
    return p * p / (p - 1.0)


def marcinkiewicz_theta(p: float, params: PotentialParams) -> tuple[float, float]:
    """Interpolation coordinate theta placing 1/p between the weak-type endpoints.

    Returns (theta, 1-theta) with theta = [d/(d-alpha)] (p-1)/p; the second
    component is computed directly as [alpha/(d-alpha)] (d/alpha - p)/p for
    accuracy near the endpoints.  Verifies 1/p = (1-theta) + theta*alpha/d.
    """
    _require_open(p, 1.0, params.p_upper, "p")
    d, alpha = params.d, params.alpha
    theta = d / (d - alpha) * (p - 1.0) / p
    one_minus = alpha / (d - alpha) * (params.p_upper - p) / p
    residual = 1.0 / p - (one_minus + theta * alpha / d)
    if abs(residual) > 1e-12:
        raise ArithmeticError(f"interpolation identity violated by {residual:.3e}")
    return theta, one_minus


def orlicz_exponent(gamma: float, params: PotentialParams) -> float:
    """Exponential-Orlicz growth exponent m with 1/m = 1 + gamma - alpha/d."""
    if gamma <= 0.0:
        raise DomainError(f"gamma={gamma!r} must be > 0")
    return 1.0 / (1.0 + gamma - params.alpha / params.d)
