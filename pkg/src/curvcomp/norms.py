"""Weighted integral norms over balls centered at the pole.

The norm of a radial function g is the p-th root of

    omega_{n-1} * integral_0^radius |g(t)|^p [sin(sqrt(H) t)^(q p)]
                  * A_f(t) e^{-a t} dt,

where A_f is the per-direction weighted volume element and q is the optional
sine weight exponent used by the extended-range display variants.  The
curvature norm applies this to the deficit of the weighted Ricci tensor
below (n-1)H (or of its m-variant below (n+m-1)H, with a = 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .mmspace import ball_volume, curvature, m_bakry_emery_excess, volume_element
from .modelspace import ParameterError
from .numerics import DEFAULT_SPEC, integrate

__all__ = [
    "NormSpec",
    "weighted_norm",
    "weighted_norm_power",
    "curvature_norm",
    "curvature_norm_power",
    "normalized_kbar",
]


@dataclass(frozen=True)
class NormSpec:
    """Parameters of one weighted norm evaluation."""

    p: float
    H: float
    radius: float
    a: float = 0.0
    m_param: float | None = None
    sin_weight: float = 0.0

    def __post_init__(self):
        if not self.p >= 1.0:
            raise ParameterError(f"norm exponent must be >= 1, got {self.p}")
        if not self.radius > 0.0:
            raise ParameterError(f"norm radius must be positive, got {self.radius}")
        if self.a < 0.0:
            raise ParameterError(f"weight slope must be >= 0, got {self.a}")
        if self.sin_weight < 0.0:
            raise ParameterError(f"sine weight exponent must be >= 0, got {self.sin_weight}")
        if self.m_param is not None:
            if not self.m_param > 0.0:
                raise ParameterError(f"m parameter must be positive, got {self.m_param}")
            if self.a != 0.0:
                raise ParameterError("the m-variant norm carries no radial weight; a must be 0")


def weighted_norm_power(space, g, spec, quad=DEFAULT_SPEC):
    """The p-th power of the weighted norm (the bare integral, with the
    sphere directions integrated out)."""
    from .modelspace import unit_sphere_area

    sqrt_h = math.sqrt(spec.H) if (spec.sin_weight and spec.H > 0.0) else 0.0

    def integrand(t):
        value = abs(g(t)) ** spec.p * volume_element(space, t)
        if spec.a:
            value *= math.exp(-spec.a * t)
        if sqrt_h:
            value *= math.sin(sqrt_h * t) ** (spec.sin_weight * spec.p)
        return value

    return unit_sphere_area(space.n) * integrate(integrand, 0.0, spec.radius, quad)


def weighted_norm(space, g, spec, quad=DEFAULT_SPEC):
    """Weighted L^p norm of a radial function over the ball of spec.radius."""
    return weighted_norm_power(space, g, spec, quad) ** (1.0 / spec.p)


def _excess_function(space, spec):
    if spec.m_param is not None:
        m = spec.m_param
        return lambda t: m_bakry_emery_excess(space, m, spec.H, t)
    return lambda t: curvature(space, spec.H, t).excess


def _require_curvature_p(space, spec):
    if spec.m_param is not None:
        if not spec.p > (space.n + spec.m_param) / 2.0:
            raise ParameterError(
                f"curvature norm needs p > (n+m)/2 = {(space.n + spec.m_param) / 2}, "
                f"got p={spec.p}"
            )
    elif not spec.p > space.n / 2.0:
        raise ParameterError(
            f"curvature norm needs p > n/2 = {space.n / 2}, got p={spec.p}"
        )


def curvature_norm_power(space, spec, quad=DEFAULT_SPEC):
    """Integral of the p-th power of the curvature deficit over the ball."""
    _require_curvature_p(space, spec)
    return weighted_norm_power(space, _excess_function(space, spec), spec, quad)


def curvature_norm(space, spec, quad=DEFAULT_SPEC):
    """Weighted L^p norm of the curvature deficit below the comparison level."""
    return curvature_norm_power(space, spec, quad) ** (1.0 / spec.p)


def normalized_kbar(space, spec, quad=DEFAULT_SPEC):
    """Volume-normalized curvature deficit; zero exactly under the pointwise
    lower bound, and the smallness hypothesis of the applications."""
    power = curvature_norm_power(space, spec, quad)
    volume = ball_volume(space, spec.radius, quad)
    return (power / volume) ** (1.0 / spec.p)
