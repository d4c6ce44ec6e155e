"""Comparison-model quantities for the constant curvature space and its
linearly weighted variant.

Everything here is closed-form or quadrature over closed forms: the warp
sn_H, model mean curvature, weighted sphere areas A^a_H and ball volumes
V^a_H, the constants appearing on the right side of the volume / area
comparison estimates, and the first Dirichlet eigenvalue of the weighted
model ball (by shooting).  The appendix variants evaluate the same formulas
at a real effective dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .numerics import (
    DEFAULT_SPEC,
    QuadratureSpec,
    bisect_root,
    fixed_panel,
    integrate,
    integrate_power_singular,
)

__all__ = [
    "ModelParams",
    "RangePolicy",
    "ParameterError",
    "SolverError",
    "sn",
    "sn_prime",
    "standard_range_max",
    "positivity_range_max",
    "validate_radius",
    "unit_sphere_area",
    "mean_curvature_model",
    "sphere_area_model",
    "ball_volume_model",
    "annulus_volume_model",
    "volume_constant_I",
    "annulus_constant",
    "area_constant",
    "ball_volume_table",
    "appendix_ball_volume_table",
    "appendix_sphere_area",
    "appendix_ball_volume",
    "appendix_volume_constant",
    "EigenSolution",
    "first_dirichlet_eigenvalue",
    "model_first_eigenvalue",
]


class ParameterError(ValueError):
    """A theorem parameter violates its stated admissible range."""


class SolverError(ArithmeticError):
    """Eigenvalue shooting failed to bracket or converge."""


class RangePolicy(str, Enum):
    """Radius regimes for positive model curvature.

    ``standard`` caps radii at the quarter period of sn_H; ``extended``
    admits the half period, where the sin-weighted display variants apply.
    """

    STANDARD = "standard"
    EXTENDED = "extended"


@dataclass(frozen=True)
class ModelParams:
    """Dimension, curvature and weight slope of the comparison model."""

    n: int
    H: float
    a: float = 0.0

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError(f"dimension must be >= 2, got {self.n}")
        if self.a < 0:
            raise ParameterError(f"weight slope must be >= 0, got {self.a}")


def sn(H, r):
    """Solution of sn'' + H sn = 0 with sn(0)=0, sn'(0)=1."""
    if H > 0.0:
        s = math.sqrt(H)
        return math.sin(s * r) / s
    if H < 0.0:
        s = math.sqrt(-H)
        return math.sinh(s * r) / s
    return r


def sn_prime(H, r):
    if H > 0.0:
        return math.cos(math.sqrt(H) * r)
    if H < 0.0:
        return math.cosh(math.sqrt(-H) * r)
    return 1.0


def standard_range_max(H):
    return math.pi / (2.0 * math.sqrt(H)) if H > 0.0 else math.inf


def positivity_range_max(H):
    return math.pi / math.sqrt(H) if H > 0.0 else math.inf


_RANGE_SLACK = 1.0 + 1e-12


def validate_radius(H, r, policy=RangePolicy.STANDARD):
    """Reject radii outside the regime the estimates are stated for."""
    policy = RangePolicy(policy)
    if policy is RangePolicy.STANDARD:
        if H > 0.0 and r > standard_range_max(H) * _RANGE_SLACK:
            raise ParameterError(
                f"radius {r} beyond standard range {standard_range_max(H)} for H={H}"
            )
        return
    if H <= 0.0:
        raise ParameterError("extended range is only meaningful for H > 0")
    if not standard_range_max(H) < r < positivity_range_max(H):
        raise ParameterError(
            f"radius {r} outside extended range "
            f"({standard_range_max(H)}, {positivity_range_max(H)}) for H={H}"
        )


def unit_sphere_area(n):
    """Area of the unit (n-1)-sphere, 2 pi^(n/2) / Gamma(n/2)."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def mean_curvature_model(n, H, r, spec=DEFAULT_SPEC):
    """Mean curvature (n-1) sn'/sn of the model geodesic sphere.

    ``n`` may be real; the appendix estimates evaluate it at an effective
    dimension.  Below the pole cutoff the cotangent-like series is used.
    """
    if r <= 0.0:
        raise ValueError(f"radius must be positive, got {r!r}")
    if r < spec.pole_cutoff:
        return (n - 1.0) * (1.0 / r - H * r / 3.0)
    s = sn(H, r)
    if s <= 0.0:
        raise ValueError(f"model sphere degenerate at r={r!r} for H={H!r}")
    return (n - 1.0) * sn_prime(H, r) / s


def sphere_area_model(params, r):
    """Weighted area of the model geodesic sphere, e^{ar} A_H(r)."""
    s = sn(params.H, r)
    if r > 0.0 and s <= 0.0:
        raise ValueError(f"radius {r!r} beyond the model's first conjugate point")
    return unit_sphere_area(params.n) * math.exp(params.a * r) * s ** (params.n - 1)


def ball_volume_model(params, R, spec=DEFAULT_SPEC):
    """Weighted volume of the model ball, the integral of the sphere areas."""
    if R < 0.0:
        raise ValueError(f"radius must be >= 0, got {R!r}")
    if params.H == 0.0 and params.a == 0.0:
        return unit_sphere_area(params.n) * R**params.n / params.n
    return integrate(lambda t: sphere_area_model(params, t), 0.0, R, spec)


def annulus_volume_model(params, r1, r2, spec=DEFAULT_SPEC):
    """Weighted model volume between radii r1 <= r2."""
    if not 0.0 <= r1 <= r2:
        raise ValueError(f"annulus radii out of order: {r1!r}, {r2!r}")
    if params.H == 0.0 and params.a == 0.0:
        return unit_sphere_area(params.n) * (r2**params.n - r1**params.n) / params.n
    return integrate(lambda t: sphere_area_model(params, t), r1, r2, spec)


def _comparison_prefactor(n, p):
    """((n-1) / ((2p-1)(2p-n)))^((p-1)/(2p-1)), shared by the constants."""
    return ((n - 1.0) / ((2.0 * p - 1.0) * (2.0 * p - n))) ** ((p - 1.0) / (2.0 * p - 1.0))


class _BallVolumeTable:
    """Fast evaluator of the model ball volume V(t) on [0, hi].

    The constants integrate expressions of t/V(t) at every quadrature node;
    re-integrating V adaptively per node is quadratic work.  Instead the
    reduced profile G(t) = V(t)/t^nu (analytic, G(0) = omega/nu) is tabulated
    on a uniform grid with one Kronrod panel per cell and interpolated by a
    cubic Hermite using the exact derivative
    G'(t) = (A(t) - nu V(t)/t) / t^nu, which keeps the relative error of V
    uniform down to the pole (about h^4).
    """

    def __init__(self, area_fn, nu, omega, a, hi, cells=2048):
        self.area_fn = area_fn
        self.nu = nu
        self.hi = hi
        self.h = hi / cells
        values = [0.0]
        for i in range(cells):
            values.append(values[-1] + fixed_panel(area_fn, i * self.h, (i + 1) * self.h))
        self.volumes = values
        g = [omega / nu]
        dg = [omega * a / (nu + 1.0)]
        for i in range(1, cells + 1):
            t = i * self.h
            g.append(values[i] / t**nu)
            dg.append((area_fn(t) - nu * values[i] / t) / t**nu)
        self.g = g
        self.dg = dg

    def __call__(self, t):
        if t <= 0.0:
            return 0.0
        if t >= self.hi:
            if t <= self.hi * (1.0 + 1e-12):
                return self.volumes[-1]
            raise ValueError(f"volume table bounds exceeded: {t!r} > {self.hi!r}")
        i = min(int(t / self.h), len(self.g) - 2)
        s = t / self.h - i
        s2 = s * s
        s3 = s2 * s
        g_val = (
            self.g[i] * (2.0 * s3 - 3.0 * s2 + 1.0)
            + self.dg[i] * self.h * (s3 - 2.0 * s2 + s)
            + self.g[i + 1] * (-2.0 * s3 + 3.0 * s2)
            + self.dg[i + 1] * self.h * (s3 - s2)
        )
        return g_val * t**self.nu


def ball_volume_table(params, hi, cells=2048):
    """Callable t -> V^a_H(t) on [0, hi] backed by a Hermite table."""
    omega = unit_sphere_area(params.n)

    def area_fn(t):
        return sphere_area_model(params, t)

    return _BallVolumeTable(area_fn, float(params.n), omega, params.a, hi, cells)


def appendix_ball_volume_table(n, nu, H, hi, cells=2048):
    """Callable t -> V^nu_H(t) on [0, hi] for the effective-dimension model."""
    omega = unit_sphere_area(n)

    def area_fn(t):
        return appendix_sphere_area(n, nu, H, t)

    return _BallVolumeTable(area_fn, float(nu), omega, 0.0, hi, cells)


def _require_p(p, threshold, label):
    if not p > threshold:
        raise ParameterError(f"exponent p must exceed {label}, got p={p}")


def volume_constant_I(n, p, H, a, R, spec=DEFAULT_SPEC):
    """Constant multiplying the curvature norm in the ball volume estimate.

    The integrand behaves like t^(-(n-1)/(2p-1)) at the origin, integrable
    exactly when p > n/2.
    """
    _require_p(p, n / 2.0, "n/2")
    if a < 0:
        raise ParameterError(f"weight slope must be >= 0, got {a}")
    validate_radius(H, R)
    omega = unit_sphere_area(n)
    q = 2.0 * p / (2.0 * p - 1.0)
    volume = ball_volume_table(ModelParams(n, H, a), R)

    def integrand(t):
        area = omega * sn(H, t) ** (n - 1)
        return area * (t * math.exp(a * t) / volume(t)) ** q

    beta = (n - 1.0) / (2.0 * p - 1.0)
    return _comparison_prefactor(n, p) * integrate_power_singular(integrand, beta, R, spec)


def annulus_constant(n, p, H, a, r1, r2, R1, R2, spec=DEFAULT_SPEC):
    """Constant of the annulus volume comparison estimate.

    Sum of two integrals: over the inner gap [r1, r2] against the annulus
    volume up to R1, and over the outer gap [R1, R2] against the annulus
    volume from r2.  Degenerate r2 == R1 makes both inner annuli collapse,
    so it is rejected rather than regularized.
    """
    _require_p(p, n / 2.0, "n/2")
    if a < 0:
        raise ParameterError(f"weight slope must be >= 0, got {a}")
    if not 0.0 <= r1 <= r2 <= R1 <= R2:
        raise ParameterError(f"radii must satisfy 0 <= r1 <= r2 <= R1 <= R2, got "
                             f"({r1}, {r2}, {R1}, {R2})")
    if r2 >= R1:
        raise ParameterError(f"degenerate annulus: r2={r2} must be strictly below R1={R1}")
    validate_radius(H, R2)
    omega = unit_sphere_area(n)
    q = 2.0 * p / (2.0 * p - 1.0)
    volume = ball_volume_table(ModelParams(n, H, a), R2)

    inner = 0.0
    if r2 > r1:
        area_R1 = omega * sn(H, R1) ** (n - 1)
        scale = R1 * math.exp(a * R1)
        vol_R1 = volume(R1)

        def inner_integrand(t):
            return area_R1 * (scale / (vol_R1 - volume(t))) ** q

        inner = integrate(inner_integrand, r1, r2, spec)

    outer = 0.0
    if R2 > R1:
        vol_r2 = volume(r2)

        def outer_integrand(t):
            area = omega * sn(H, t) ** (n - 1)
            return area * (t * math.exp(a * t) / (volume(t) - vol_r2)) ** q

        outer = integrate(outer_integrand, R1, R2, spec)

    return _comparison_prefactor(n, p) * (inner + outer)


def area_constant(n, p, H, R, spec=DEFAULT_SPEC):
    """Constant of the sphere area comparison estimate (standard range)."""
    _require_p(p, n / 2.0, "n/2")
    validate_radius(H, R)
    omega = unit_sphere_area(n)
    expo = -1.0 / (2.0 * p - 1.0)

    def integrand(t):
        return (omega * sn(H, t) ** (n - 1)) ** expo

    beta = (n - 1.0) / (2.0 * p - 1.0)
    return _comparison_prefactor(n, p) * integrate_power_singular(integrand, beta, R, spec)


# ---------------------------------------------------------------------------
# Effective-dimension variants used by the appendix estimates
# ---------------------------------------------------------------------------


def appendix_sphere_area(n, nu, H, r):
    """Model sphere area at effective dimension nu, integrated over the
    actual (n-1)-sphere of directions."""
    s = sn(H, r)
    if r > 0.0 and s <= 0.0:
        raise ValueError(f"radius {r!r} beyond the model's first conjugate point")
    return unit_sphere_area(n) * s ** (nu - 1.0)


def appendix_ball_volume(n, nu, H, R, spec=DEFAULT_SPEC):
    if R < 0.0:
        raise ValueError(f"radius must be >= 0, got {R!r}")
    if H == 0.0:
        return unit_sphere_area(n) * R**nu / nu
    return integrate(lambda t: appendix_sphere_area(n, nu, H, t), 0.0, R, spec)


def appendix_volume_constant(n, nu, p, H, R, spec=DEFAULT_SPEC):
    """Volume estimate constant with the model read at dimension nu."""
    _require_p(p, nu / 2.0, "(n+m)/2")
    validate_radius(H, R)
    q = 2.0 * p / (2.0 * p - 1.0)
    volume = appendix_ball_volume_table(n, nu, H, R)

    def integrand(t):
        return appendix_sphere_area(n, nu, H, t) * (t / volume(t)) ** q

    pref = ((nu - 1.0) / ((2.0 * p - 1.0) * (2.0 * p - nu))) ** ((p - 1.0) / (2.0 * p - 1.0))
    beta = (nu - 1.0) / (2.0 * p - 1.0)
    return pref * integrate_power_singular(integrand, beta, R, spec)


# ---------------------------------------------------------------------------
# First Dirichlet eigenvalue by shooting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenSolution:
    """First Dirichlet eigenvalue with the radial profile on the march grid."""

    eigenvalue: float
    radii: np.ndarray
    values: np.ndarray
    slopes: np.ndarray


def _march(coef, h, n_dim, lam, record=False):
    """RK4 march of u'' + c(r) u' + lam u = 0 from the series start.

    ``coef`` holds c at half-step resolution: coef[k] = c(k h / 2) for
    k = 2 .. 2N, with the march starting at r0 = h (k = 2) and ending at
    R = N h.  Returns (endpoint value, crossed flag) or the full profile.
    """
    steps = len(coef) // 2 - 1
    r0 = h
    u = 1.0 - lam * r0 * r0 / (2.0 * n_dim)
    v = -lam * r0 / n_dim
    crossed = False
    if record:
        us = [u]
        vs = [v]
    h6 = h / 6.0
    half = 0.5 * h
    for i in range(1, steps + 1):
        c0 = coef[2 * i]
        c1 = coef[2 * i + 1]
        c2 = coef[2 * i + 2]
        k1u = v
        k1v = -c0 * v - lam * u
        u2 = u + half * k1u
        v2 = v + half * k1v
        k2u = v2
        k2v = -c1 * v2 - lam * u2
        u3 = u + half * k2u
        v3 = v + half * k2v
        k3u = v3
        k3v = -c1 * v3 - lam * u3
        u4 = u + h * k3u
        v4 = v + h * k3v
        k4u = v4
        k4v = -c2 * v4 - lam * u4
        u = u + h6 * (k1u + 2.0 * (k2u + k3u) + k4u)
        v = v + h6 * (k1v + 2.0 * (k2v + k3v) + k4v)
        if record:
            us.append(u)
            vs.append(v)
        elif u <= 0.0 and i < steps:
            crossed = True
            break
    if record:
        return np.array(us), np.array(vs)
    return u, crossed


def first_dirichlet_eigenvalue(coef_fn, n_dim, R, steps=4096):
    """Smallest lam > 0 whose regular radial solution first vanishes at R.

    ``coef_fn`` supplies the first-order coefficient (model: m_H + a,
    scenario: the weighted mean curvature).  The endpoint value is monitored
    for interior zeros so the bisection always homes in on the first
    eigenvalue.  Series initialization happens at the first grid point,
    where the 1/r coefficient is still resolved by the fixed step.
    """
    if steps < 16:
        raise ValueError("need at least 16 march steps")
    h = R / steps
    coef = [0.0, 0.0] + [coef_fn((k * h) / 2.0) for k in range(2, 2 * steps + 1)]

    def endpoint(lam):
        value, crossed = _march(coef, h, n_dim, lam)
        if crossed:
            return -1.0 - abs(value)
        return value

    lo = 0.0
    hi = None
    base = 4.0 * n_dim / (R * R)
    for k in range(1, 65):
        candidate = base * k * k
        if endpoint(candidate) < 0.0:
            hi = candidate
            break
        lo = candidate
    if hi is None:
        raise SolverError("eigenvalue bracket expansion exhausted")
    lam = bisect_root(endpoint, lo, hi, 1e-11 * max(1.0, hi))
    values, slopes = _march(coef, h, n_dim, lam, record=True)
    radii = np.arange(1, steps + 1) * h
    return EigenSolution(lam, radii, values, slopes)


def model_first_eigenvalue(params, R, steps=4096, spec=DEFAULT_SPEC):
    """First Dirichlet eigenvalue of the weighted model ball of radius R.

    Returns (eigenvalue, profile); the profile is the shooting solution
    normalized to 1 at the center.
    """
    validate_radius(params.H, R)

    def coef_fn(r):
        return mean_curvature_model(params.n, params.H, r, spec) + params.a

    solution = first_dirichlet_eigenvalue(coef_fn, params.n, R, steps)
    return solution.eigenvalue, solution
