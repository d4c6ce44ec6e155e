"""Rotationally symmetric smooth metric measure spaces.

A space is the metric dr^2 + phi(r)^2 g_{S^{n-1}} with radial weight f(r),
evaluated at the pole, where every minimal geodesic is a radial ray.  This
module computes the pointwise quantities the comparison estimates consume:
weighted Ricci eigenvalues and their deficit below (n-1)H, geodesic sphere
mean curvatures and their error against the model, the weighted volume
element, and volumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .expr import Expr, ExprDomainError, eval_jet2, parse
from .modelspace import mean_curvature_model, unit_sphere_area
from .numerics import DEFAULT_SPEC, integrate

__all__ = [
    "RotSymSpace",
    "CurvatureProfile",
    "MeanCurvatures",
    "InvariantViolation",
    "make_space",
    "validate_space",
    "weight_at_pole",
    "curvature",
    "mean_curvatures",
    "volume_element",
    "sphere_area",
    "ball_volume",
    "annulus_volume",
    "m_bakry_emery_excess",
]

_POLE_TOL_WARP = 1e-9
_POLE_TOL_WEIGHT = 1e-7
_VALIDATION_SAMPLES = 1024


class InvariantViolation(ValueError):
    """A profile fails one of the structural invariants; names which one."""


@dataclass(frozen=True)
class RotSymSpace:
    """Immutable rotationally symmetric space with radial weight."""

    n: int
    warp: Expr
    weight: Expr
    r_max: float
    name: str
    warp_text: str = ""
    weight_text: str = ""
    tags: tuple = ()
    hints: dict = field(default_factory=dict)

    def warp_jet(self, r):
        return eval_jet2(self.warp, r)

    def weight_jet(self, r):
        return eval_jet2(self.weight, r)


@dataclass(frozen=True)
class CurvatureProfile:
    """Weighted Ricci eigenvalues at one radius and the deficit below (n-1)H."""

    ric_rad: float
    ric_tan: float
    lambda_min: float
    excess: float


@dataclass(frozen=True)
class MeanCurvatures:
    """Sphere mean curvature, its weighted version, and the model errors."""

    m: float
    m_f: float
    error_I: float
    error_II: float


def _jet_at_pole(expr, cutoff):
    """Jet at r=0, falling back to quadratic extrapolation from the cutoff."""
    try:
        return eval_jet2(expr, 0.0)
    except ExprDomainError:
        j = eval_jet2(expr, cutoff)
        value = j.value - cutoff * j.d1 + 0.5 * cutoff * cutoff * j.d2
        slope = j.d1 - cutoff * j.d2
        return type(j)(value, slope, j.d2)


def weight_at_pole(space, spec=DEFAULT_SPEC):
    """Value of the radial weight at the pole (extrapolated if needed)."""
    return _jet_at_pole(space.weight, spec.pole_cutoff).value


def validate_space(space, spec=DEFAULT_SPEC):
    """Check the structural invariants, raising InvariantViolation if any fail."""
    if int(space.n) != space.n or space.n < 2:
        raise InvariantViolation(f"dimension must be an integer >= 2, got {space.n!r}")
    if not space.r_max > 0:
        raise InvariantViolation(f"r_max must be positive, got {space.r_max!r}")
    cutoff = spec.pole_cutoff
    w0 = _jet_at_pole(space.warp, cutoff)
    if abs(w0.value) > _POLE_TOL_WARP:
        raise InvariantViolation(f"warp(0) = {w0.value!r}, expected 0")
    if abs(w0.d1 - 1.0) > _POLE_TOL_WARP:
        raise InvariantViolation(f"warp'(0) = {w0.d1!r}, expected 1")
    f0 = _jet_at_pole(space.weight, cutoff)
    if abs(f0.d1) > _POLE_TOL_WEIGHT:
        raise InvariantViolation(f"weight'(0) = {f0.d1!r}, expected 0")
    for i in range(1, _VALIDATION_SAMPLES + 1):
        r = cutoff + (space.r_max - cutoff) * i / _VALIDATION_SAMPLES
        try:
            w = space.warp_jet(r)
            space.weight_jet(r)
        except ExprDomainError as exc:
            raise InvariantViolation(f"jets not finite at r={r!r}: {exc}") from exc
        if w.value <= 0.0:
            raise InvariantViolation(f"warp not positive at r={r!r}: {w.value!r}")
    return space


def make_space(name, n, warp_text, weight_text, r_max, tags=(), hints=None, spec=DEFAULT_SPEC):
    """Parse, assemble and validate a space from expression strings."""
    space = RotSymSpace(
        n=n,
        warp=parse(warp_text),
        weight=parse(weight_text),
        r_max=float(r_max),
        name=name,
        warp_text=warp_text,
        weight_text=weight_text,
        tags=tuple(tags),
        hints=dict(hints or {}),
    )
    return validate_space(space, spec)


def _check_radius(space, r):
    if not 0.0 < r <= space.r_max * (1.0 + 1e-12):
        raise ValueError(f"radius {r!r} outside (0, {space.r_max!r}]")


def curvature(space, H, r):
    """Radial and tangential weighted Ricci eigenvalues at radius r.

    In rotational symmetry these two families exhaust the spectrum, so the
    smallest eigenvalue and the deficit below (n-1)H follow directly.
    """
    _check_radius(space, r)
    n = space.n
    w = space.warp_jet(r)
    if w.value <= 0.0:
        raise ValueError(f"warp not positive at r={r!r}")
    f = space.weight_jet(r)
    ric_rad = -(n - 1) * w.d2 / w.value + f.d2
    ric_tan = (
        -w.d2 / w.value
        + (n - 2) * (1.0 - w.d1 * w.d1) / (w.value * w.value)
        + f.d1 * w.d1 / w.value
    )
    lam = min(ric_rad, ric_tan)
    return CurvatureProfile(ric_rad, ric_tan, lam, max(0.0, (n - 1) * H - lam))


def mean_curvatures(space, H, a, r):
    """Sphere mean curvatures at r and the error against the model values."""
    _check_radius(space, r)
    w = space.warp_jet(r)
    if w.value <= 0.0:
        raise ValueError(f"warp not positive at r={r!r}")
    m = (space.n - 1) * w.d1 / w.value
    m_f = m - space.weight_jet(r).d1
    m_h = mean_curvature_model(space.n, H, r)
    return MeanCurvatures(m, m_f, max(0.0, m_f - m_h - a), max(0.0, m_f - m_h))


def volume_element(space, r):
    """Weighted volume element per unit sphere direction, e^{-f} phi^{n-1}."""
    w = space.warp_jet(r)
    f = space.weight_jet(r)
    return math.exp(-f.value) * w.value ** (space.n - 1)


def sphere_area(space, r):
    """Weighted area of the geodesic sphere of radius r."""
    _check_radius(space, r)
    return unit_sphere_area(space.n) * volume_element(space, r)


def ball_volume(space, R, spec=DEFAULT_SPEC):
    """Weighted volume of the ball of radius R about the pole."""
    if R < 0:
        raise ValueError(f"radius must be >= 0, got {R!r}")
    _check_radius(space, max(R, spec.pole_cutoff))
    omega = unit_sphere_area(space.n)
    return omega * integrate(lambda t: volume_element(space, t), 0.0, R, spec)


def annulus_volume(space, r1, r2, spec=DEFAULT_SPEC):
    """Weighted volume between radii r1 <= r2."""
    if not 0.0 <= r1 <= r2:
        raise ValueError(f"annulus radii out of order: {r1!r}, {r2!r}")
    _check_radius(space, max(r2, spec.pole_cutoff))
    omega = unit_sphere_area(space.n)
    return omega * integrate(lambda t: volume_element(space, t), r1, r2, spec)


def m_bakry_emery_excess(space, m_param, H, r):
    """Deficit of the m-variant weighted Ricci tensor below (n+m-1)H.

    Subtracting df x df / m only moves the radial eigenvalue, by f'(r)^2/m.
    """
    if not m_param > 0:
        raise ValueError(f"m parameter must be positive, got {m_param!r}")
    profile = curvature(space, H, r)
    df = space.weight_jet(r).d1
    ric_rad_m = profile.ric_rad - df * df / m_param
    lam = min(ric_rad_m, profile.ric_tan)
    return max(0.0, (space.n + m_param - 1.0) * H - lam)
