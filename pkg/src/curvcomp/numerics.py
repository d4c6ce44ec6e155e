"""Shared numeric kernels: adaptive quadrature, root bisection, Riccati residual.

The quadrature is an adaptive Gauss-Kronrod 7-15 scheme.  Kronrod nodes are
strictly interior, so integrands that are only defined on the open interval
(volume elements at the pole, mean curvatures) can be integrated from 0
without special casing.  Integrands with a known algebraic blow-up t^(-beta)
at the left endpoint go through :func:`integrate_power_singular`, which
replaces the cell below the pole cutoff by a two-term series extrapolation.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .expr import eval_jet2

__all__ = [
    "QuadratureSpec",
    "QuadratureError",
    "BracketError",
    "integrate",
    "integrate_power_singular",
    "fixed_panel",
    "bisect_root",
    "riccati_residual",
    "DEFAULT_SPEC",
]

_EPS = sys.float_info.epsilon

# Gauss-Kronrod 7-15 abscissae and weights on [-1, 1]; even-indexed entries
# of _XK are the Kronrod extension, odd-indexed ones the Gauss-7 nodes.
_XK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
)
_WK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance contract for adaptive quadrature."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 40
    pole_cutoff: float = 1e-6

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be a positive integer")
        if self.pole_cutoff <= 0:
            raise ValueError("pole_cutoff must be positive")


DEFAULT_SPEC = QuadratureSpec()


class QuadratureError(ArithmeticError):
    """Tolerance not reached at max_depth; carries the best estimate."""

    def __init__(self, estimate, error_bound):
        super().__init__(
            f"quadrature did not converge: estimate {estimate!r}, "
            f"error bound {error_bound!r}"
        )
        self.estimate = estimate
        self.error_bound = error_bound


class BracketError(ValueError):
    """bisect_root called without a sign change on the bracket."""


def _gk15(g, a, b):
    """One Gauss-Kronrod 7-15 panel; returns (kronrod, |kronrod - gauss|)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = g(c)
    resk = _WK[7] * fc
    resg = _WG[3] * fc
    for i in range(7):
        x = h * _XK[i]
        fsum = g(c - x) + g(c + x)
        resk += _WK[i] * fsum
        if i % 2 == 1:
            resg += _WG[i // 2] * fsum
    return resk * h, abs(resk - resg) * abs(h)


def integrate(g, lo, hi, spec=DEFAULT_SPEC):
    """Adaptive estimate of the integral of ``g`` over [lo, hi].

    The result satisfies error <= abs_tol + rel_tol * |result| unless
    :class:`QuadratureError` is raised.  Endpoints are never evaluated.
    """
    lo = float(lo)
    hi = float(hi)
    if lo > hi:
        raise ValueError(f"integration bounds out of order: {lo} > {hi}")
    if lo == hi:
        return 0.0
    whole, _ = _gk15(g, lo, hi)
    tol = spec.abs_tol + spec.rel_tol * abs(whole)
    width = hi - lo
    total = 0.0
    unresolved = 0.0
    stack = [(lo, hi, 0)]
    while stack:
        a, b, depth = stack.pop()
        k, err = _gk15(g, a, b)
        budget = tol * (b - a) / width
        floor = 50.0 * _EPS * abs(k)
        if err <= max(budget, floor) or b - a <= 4.0 * _EPS * max(abs(a), abs(b)):
            total += k
        elif depth >= spec.max_depth:
            total += k
            unresolved += err
        else:
            m = 0.5 * (a + b)
            stack.append((m, b, depth + 1))
            stack.append((a, m, depth + 1))
    if unresolved > tol:
        raise QuadratureError(total, unresolved)
    return total


def fixed_panel(g, a, b):
    """Single non-adaptive Kronrod panel, for cumulative grids whose cells
    are already fine enough that subdivision buys nothing."""
    return _gk15(g, a, b)[0]


def integrate_power_singular(g, beta, hi, spec=DEFAULT_SPEC):
    """Integral of ``g`` over (0, hi] when g(t) ~ c * t^(-beta) as t -> 0.

    Requires 0 <= beta < 1 (integrable).  Below the pole cutoff the smooth
    factor s(t) = g(t) * t^beta is extrapolated linearly from two samples and
    the power law is integrated in closed form; the rest is adaptive.
    """
    if beta >= 1.0:
        raise ValueError(f"non-integrable endpoint power {beta!r}")
    if beta <= 0.0:
        return integrate(g, 0.0, hi, spec)
    if hi <= 0.0:
        return 0.0
    cut = min(spec.pole_cutoff, 0.5 * hi)
    s_half = g(0.5 * cut) * (0.5 * cut) ** beta
    s_full = g(cut) * cut**beta
    slope = (s_full - s_half) / (0.5 * cut)
    s0 = s_half - slope * 0.5 * cut
    cell = s0 * cut ** (1.0 - beta) / (1.0 - beta) + slope * cut ** (2.0 - beta) / (2.0 - beta)
    return cell + integrate(g, cut, hi, spec)


def bisect_root(g, lo, hi, tol):
    """Root of ``g`` on [lo, hi] by bisection; needs a sign change."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    flo = g(lo)
    fhi = g(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketError(f"no sign change on [{lo!r}, {hi!r}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # bracket at float resolution
        fmid = g(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def riccati_residual(space, r):
    """Defect of the radial Riccati identity m' + m^2/(n-1) + Ric(dr,dr) at r.

    For a rotationally symmetric metric this vanishes identically, so it is
    used as a consistency oracle tying the mean curvature and curvature
    formulas together.  ``space`` needs fields n, warp, r_max.
    """
    if not 0.0 < r <= space.r_max:
        raise ValueError(f"radius {r!r} outside (0, {space.r_max!r}]")
    n = space.n
    w = eval_jet2(space.warp, r)
    if w.value <= 0.0:
        raise ValueError(f"warp factor not positive at r={r!r}")
    q = w.d1 / w.value
    u = w.d2 / w.value
    m_prime = (n - 1) * (u - q * q)
    m_sq = (n - 1) * q * q
    ric_rr = -(n - 1) * u
    return m_prime + m_sq + ric_rr
