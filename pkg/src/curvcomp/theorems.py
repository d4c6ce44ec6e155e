"""Checkers for the comparison estimates: one per theorem display.

Every checker computes both sides of the stated inequality on a scenario
space and returns a :class:`CheckReport` with the margin (rhs - lhs) and a
magnitude-scaled tolerance.  Hypothesis gates (lower gradient bound on the
weight, weight bound) are sampled; a violated hypothesis yields a
distinguished precondition report rather than a failed check, while
inadmissible parameters raise :class:`ParameterError`.

Pointwise displays are certified on a radial grid plus a golden-section
refinement around the grid maximizer: the reported lhs is the largest
pointwise defect (display lhs minus display rhs), so the report margin is
its negation and satisfaction means no grid point violates the display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .mmspace import (
    annulus_volume,
    ball_volume,
    curvature,
    m_bakry_emery_excess,
    mean_curvatures,
    sphere_area,
    volume_element,
    weight_at_pole,
)
from .modelspace import (
    ModelParams,
    ParameterError,
    RangePolicy,
    annulus_constant,
    annulus_volume_model,
    appendix_ball_volume,
    appendix_volume_constant,
    area_constant,
    ball_volume_model,
    first_dirichlet_eigenvalue,
    mean_curvature_model,
    model_first_eigenvalue,
    sn,
    sphere_area_model,
    unit_sphere_area,
    validate_radius,
    volume_constant_I,
)
from .norms import NormSpec, curvature_norm, curvature_norm_power, normalized_kbar, weighted_norm
from .numerics import DEFAULT_SPEC, fixed_panel, integrate, integrate_power_singular

__all__ = [
    "CheckReport",
    "CHECK_TOL_SCALE",
    "check_mc_I",
    "check_vol_I",
    "check_annulus",
    "check_area_I",
    "check_doubling",
    "check_mc_II",
    "check_area_II",
    "check_vol_II",
    "check_mc_m",
    "check_vol_m",
    "scenario_first_eigenvalue",
    "check_eigen",
    "check_volume_growth",
    "CHECKERS",
    "run_checker",
    "VOLUME_GROWTH_HEURISTIC_FACTOR",
]

CHECK_TOL_SCALE = 1e-7
HYPOTHESIS_SAMPLES = 1024
DEFAULT_GRID = 256
# documented heuristic stand-in for the inexplicit linear-growth constant:
# the reference slope is V_f(pole,1) / (2 * heuristic * n)
VOLUME_GROWTH_HEURISTIC_FACTOR = 2.0


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one theorem display on one scenario."""

    theorem_id: str
    scenario: str
    params: dict
    lhs: float
    rhs: float
    margin: float
    satisfied: bool | None
    check_tol: float
    diagnostics: dict = field(default_factory=dict)
    status: str = "checked"
    reason: str = ""


def _checked(theorem_id, space, params, lhs, rhs, diagnostics=None):
    lhs = float(lhs)
    rhs = float(rhs)
    tol = CHECK_TOL_SCALE * (1.0 + abs(lhs) + abs(rhs))
    margin = rhs - lhs
    return CheckReport(
        theorem_id,
        space.name,
        {k: float(v) for k, v in params.items()},
        lhs,
        rhs,
        margin,
        bool(margin >= -tol),
        tol,
        {k: float(v) for k, v in (diagnostics or {}).items()},
    )


def _skipped(theorem_id, space, params, reason):
    nan = math.nan
    return CheckReport(
        theorem_id,
        space.name,
        {k: float(v) for k, v in params.items()},
        nan,
        nan,
        nan,
        None,
        nan,
        {},
        status="precondition",
        reason=reason,
    )


def _hypothesis_grid(space, upto, quad):
    lo = quad.pole_cutoff
    return [lo + (upto - lo) * i / HYPOTHESIS_SAMPLES for i in range(1, HYPOTHESIS_SAMPLES + 1)]


def _gradient_gate(space, a, upto, quad=DEFAULT_SPEC):
    """Reason string if the sampled radial gradient dips below -a, else None."""
    slack = 1e-12 * (1.0 + abs(a))
    for r in _hypothesis_grid(space, upto, quad):
        df = space.weight_jet(r).d1
        if df < -a - slack:
            return f"weight gradient {df:.6g} < -a = {-a:.6g} at r={r:.6g}"
    return None


def _nonneg_gradient_gate(space, upto, quad=DEFAULT_SPEC):
    for r in _hypothesis_grid(space, upto, quad):
        df = space.weight_jet(r).d1
        if df < -1e-12:
            return f"weight gradient {df:.6g} < 0 at r={r:.6g}"
    return None


def _bound_gate(space, k, upto, quad=DEFAULT_SPEC):
    slack = 1e-12 * (1.0 + abs(k))
    for r in _hypothesis_grid(space, upto, quad):
        f = space.weight_jet(r).value
        if abs(f) > k + slack:
            return f"|weight| = {abs(f):.6g} > k = {k:.6g} at r={r:.6g}"
    return None


def _require_radius_in_space(space, r, label="radius"):
    if not 0.0 <= r <= space.r_max * (1.0 + 1e-12):
        raise ParameterError(f"{label} {r} outside the scenario range (0, {space.r_max}]")


def _require_p_above(p, threshold, label):
    if not p > threshold:
        raise ParameterError(f"exponent p must exceed {label} = {threshold}, got p={p}")


# ---------------------------------------------------------------------------
# cumulative grids and pointwise display machinery
# ---------------------------------------------------------------------------


def _cumulative_on_grid(g, grid, quad, beta=0.0):
    """Cumulative integral of g from 0 at each grid point.

    First cell adaptively (or by the power-singular rule when g blows up
    like t^-beta), later cells by one Kronrod panel each.
    """
    out = np.empty(len(grid))
    if beta > 0.0:
        out[0] = integrate_power_singular(g, beta, grid[0], quad)
    else:
        out[0] = integrate(g, 0.0, grid[0], quad)
    for i in range(1, len(grid)):
        out[i] = out[i - 1] + fixed_panel(g, grid[i - 1], grid[i])
    return out


def _cumulative_at(g, grid, cums, t):
    """Cumulative value at an off-grid point via the nearest grid value."""
    j = int(np.searchsorted(grid, t))
    if j == 0:
        return cums[0] - fixed_panel(g, t, grid[0])
    return cums[j - 1] + fixed_panel(g, grid[j - 1], t)


def _golden_max(fn, lo, hi, iters=48):
    """Golden-section maximizer; returns (argmax, max)."""
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc = fn(c)
    fd = fn(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = fn(d)
    if fc >= fd:
        return c, fc
    return d, fd


def _pointwise_max(grid, defects, defect_fn):
    """Largest pointwise defect: grid scan refined by local search."""
    j = int(np.argmax(defects))
    lo = grid[j - 1] if j > 0 else grid[0] * 0.5
    hi = grid[j + 1] if j + 1 < len(grid) else grid[-1]
    t_star, d_star = _golden_max(defect_fn, lo, hi)
    if defects[j] >= d_star:
        return float(grid[j]), float(defects[j])
    return float(t_star), float(d_star)


def _pointwise_grid(lo, hi, points):
    return np.linspace(lo, hi, points + 1)[1:]


# ---------------------------------------------------------------------------
# mean curvature comparison, lower gradient bound on the weight
# ---------------------------------------------------------------------------


def check_mc_I(space, p, H, a, r, policy=RangePolicy.STANDARD, grid_points=DEFAULT_GRID,
               quad=DEFAULT_SPEC):
    """Both displays of the weighted mean curvature estimate.

    Returns the norm-form report and the pointwise-form report (sine-weighted
    versions under the extended policy).
    """
    n = space.n
    _require_p_above(p, n / 2.0, "n/2")
    if a < 0:
        raise ParameterError(f"weight slope bound a must be >= 0, got {a}")
    _require_radius_in_space(space, r)
    policy = RangePolicy(policy)
    validate_radius(H, r, policy)
    extended = policy is RangePolicy.EXTENDED
    sin_exp = (4.0 * p - n - 1.0) if extended else 0.0
    norm_id = "mc_I_sin_norm" if extended else "mc_I_norm"
    point_id = "mc_I_sin_pointwise" if extended else "mc_I_pointwise"
    params = {"p": p, "H": H, "a": a, "r": r}

    reason = _gradient_gate(space, a, r, quad)
    if reason:
        return [
            _skipped(norm_id, space, params, reason),
            _skipped(point_id, space, params, reason),
        ]

    def error_fn(t):
        return mean_curvatures(space, H, a, t).error_I

    norm_spec = NormSpec(p=2.0 * p, H=H, radius=r, a=a, sin_weight=sin_exp / (2.0 * p))
    lhs_norm = weighted_norm(space, error_fn, norm_spec, quad)
    excess_norm = curvature_norm(space, NormSpec(p=p, H=H, radius=r, a=a), quad)
    rhs_norm = math.sqrt((n - 1.0) * (2.0 * p - 1.0) / (2.0 * p - n) * excess_norm)
    reports = [
        _checked(norm_id, space, params, lhs_norm, rhs_norm,
                 {"error_norm": lhs_norm, "excess_norm": excess_norm}),
    ]

    const = (2.0 * p - 1.0) ** p * ((n - 1.0) / (2.0 * p - n)) ** (p - 1.0)
    sqrt_h = math.sqrt(H) if H > 0.0 else 0.0

    def rhs_integrand(t):
        return curvature(space, H, t).excess ** p * volume_element(space, t) * math.exp(-a * t)

    def display_lhs(t):
        value = error_fn(t) ** (2.0 * p - 1.0) * volume_element(space, t) * math.exp(-a * t)
        if extended:
            value *= math.sin(sqrt_h * t) ** sin_exp
        return value

    grid = _pointwise_grid(quad.pole_cutoff, r, grid_points)
    cums = _cumulative_on_grid(rhs_integrand, grid, quad)
    defects = np.array([display_lhs(t) for t in grid]) - const * cums

    def defect_at(t):
        return display_lhs(t) - const * _cumulative_at(rhs_integrand, grid, cums, t)

    t_star, worst = _pointwise_max(grid, defects, defect_at)
    reports.append(
        _checked(point_id, space, params, worst, 0.0,
                 {"worst_radius": t_star,
                  "display_lhs_at_worst": display_lhs(t_star),
                  "display_rhs_at_worst": display_lhs(t_star) - worst})
    )
    return reports


# ---------------------------------------------------------------------------
# volume comparison, lower gradient bound on the weight
# ---------------------------------------------------------------------------


def _volume_ratio_side(space, params_model, p, radii, quad):
    """(V_f/V^a_H)^(1/(2p-1)) at each radius."""
    out = []
    for radius in radii:
        vf = ball_volume(space, radius, quad)
        vh = ball_volume_model(params_model, radius, quad)
        out.append((vf / vh) ** (1.0 / (2.0 * p - 1.0)))
    return out


def check_vol_I(space, p, H, a, r, R, quad=DEFAULT_SPEC):
    """Relative (or absolute, when r = 0) ball volume comparison."""
    n = space.n
    _require_p_above(p, n / 2.0, "n/2")
    if a < 0:
        raise ParameterError(f"weight slope bound a must be >= 0, got {a}")
    if not 0.0 <= r <= R:
        raise ParameterError(f"need 0 <= r <= R, got r={r}, R={R}")
    if R <= 0.0:
        raise ParameterError("outer radius must be positive")
    _require_radius_in_space(space, R, "outer radius")
    validate_radius(H, R)
    theorem_id = "vol_I_absolute" if r == 0.0 else "vol_I"
    params = {"p": p, "H": H, "a": a, "r": r, "R": R}

    reason = _gradient_gate(space, a, R, quad)
    if reason:
        return _skipped(theorem_id, space, params, reason)

    model = ModelParams(n, H, a)
    norm_power = curvature_norm_power(space, NormSpec(p=p, H=H, radius=R, a=a), quad)
    constant = volume_constant_I(n, p, H, a, R, quad)
    root = 1.0 / (2.0 * p - 1.0)
    diagnostics = {"constant": constant, "excess_norm_power": norm_power}

    if r == 0.0:
        lhs = ball_volume(space, R, quad)
        f_pole = weight_at_pole(space, quad)
        bracket = math.exp(-f_pole * root) + constant * norm_power**root
        rhs = bracket ** (2.0 * p - 1.0) * ball_volume_model(model, R, quad)
        diagnostics["weight_at_pole"] = f_pole
        return _checked(theorem_id, space, params, lhs, rhs, diagnostics)

    ratio_r, ratio_R = _volume_ratio_side(space, model, p, (r, R), quad)
    lhs = ratio_R - ratio_r
    rhs = constant * norm_power**root
    diagnostics.update({"ratio_root_inner": ratio_r, "ratio_root_outer": ratio_R})
    return _checked(theorem_id, space, params, lhs, rhs, diagnostics)


def check_annulus(space, p, H, a, r1, r2, R1, R2, quad=DEFAULT_SPEC):
    """Relative volume comparison between two nested annuli."""
    n = space.n
    _require_p_above(p, n / 2.0, "n/2")
    _require_radius_in_space(space, R2, "outer radius")
    # parameter ordering and the degenerate band are policed by the constant
    constant = annulus_constant(n, p, H, a, r1, r2, R1, R2, quad)
    params = {"p": p, "H": H, "a": a, "r1": r1, "r2": r2, "R1": R1, "R2": R2}

    reason = _gradient_gate(space, a, R2, quad)
    if reason:
        return _skipped("annulus", space, params, reason)

    model = ModelParams(n, H, a)
    root = 1.0 / (2.0 * p - 1.0)
    inner = annulus_volume(space, r1, R1, quad) / annulus_volume_model(model, r1, R1, quad)
    outer = annulus_volume(space, r2, R2, quad) / annulus_volume_model(model, r2, R2, quad)
    lhs = outer**root - inner**root
    norm_power = curvature_norm_power(space, NormSpec(p=p, H=H, radius=R2, a=a), quad)
    rhs = constant * norm_power**root
    return _checked(
        "annulus", space, params, lhs, rhs,
        {"constant": constant, "excess_norm_power": norm_power,
         "ratio_root_inner": inner**root, "ratio_root_outer": outer**root},
    )


def check_area_I(space, p, H, a, r, R, policy=RangePolicy.STANDARD, quad=DEFAULT_SPEC):
    """Sphere area comparison, standard or extended range."""
    n = space.n
    _require_p_above(p, n / 2.0, "n/2")
    if not 0.0 < r <= R:
        raise ParameterError(f"need 0 < r <= R, got r={r}, R={R}")
    _require_radius_in_space(space, R, "outer radius")
    policy = RangePolicy(policy)
    extended = policy is RangePolicy.EXTENDED
    if extended:
        validate_radius(H, r, RangePolicy.EXTENDED)
        validate_radius(H, R, RangePolicy.EXTENDED)
    else:
        validate_radius(H, R)
    theorem_id = "area_I_extended" if extended else "area_I"
    params = {"p": p, "H": H, "a": a, "r": r, "R": R}

    reason = _gradient_gate(space, a, R, quad)
    if reason:
        return _skipped(theorem_id, space, params, reason)

    model = ModelParams(n, H, a)
    root = 1.0 / (2.0 * p - 1.0)
    ratio_r = sphere_area(space, r) / sphere_area_model(model, r)
    ratio_R = sphere_area(space, R) / sphere_area_model(model, R)
    lhs = ratio_R**root - ratio_r**root
    norm = curvature_norm(space, NormSpec(p=p, H=H, radius=R, a=a), quad)
    diagnostics = {"excess_norm": norm,
                   "ratio_root_inner": ratio_r**root, "ratio_root_outer": ratio_R**root}
    if extended:
        sqrt_h = math.sqrt(H)
        power = (n - 1.0) / (2.0 * p - 1.0)

        def kernel(t):
            return sqrt_h**power / math.sin(sqrt_h * t) ** 2

        pref = ((n - 1.0) / ((2.0 * p - 1.0) * (2.0 * p - n))) ** ((p - 1.0) / (2.0 * p - 1.0))
        factor = pref * integrate(kernel, r, R, quad)
        diagnostics["range_kernel"] = factor
    else:
        factor = area_constant(n, p, H, R, quad)
        diagnostics["constant"] = factor
    rhs = factor * norm ** (p / (2.0 * p - 1.0))
    return _checked(theorem_id, space, params, lhs, rhs, diagnostics)


def check_doubling(space, alpha, p, H, a, r1, r2, R, quad=DEFAULT_SPEC):
    """Volume doubling bound implied by the ball volume comparison."""
    n = space.n
    _require_p_above(p, n / 2.0, "n/2")
    if not alpha > 1.0:
        raise ParameterError(f"doubling factor alpha must exceed 1, got {alpha}")
    if not 0.0 < r1 < r2 <= R:
        raise ParameterError(f"need 0 < r1 < r2 <= R, got ({r1}, {r2}, {R})")
    _require_radius_in_space(space, R, "outer radius")
    validate_radius(H, R)
    params = {"alpha": alpha, "p": p, "H": H, "a": a, "r1": r1, "r2": r2, "R": R}

    reason = _gradient_gate(space, a, R, quad)
    if reason:
        return _skipped("doubling", space, params, reason)

    model = ModelParams(n, H, a)
    lhs = ball_volume(space, r2, quad) / ball_volume(space, r1, quad)
    rhs = alpha * ball_volume_model(model, r2, quad) / ball_volume_model(model, r1, quad)

    def sigma(radius):
        kbar = normalized_kbar(space, NormSpec(p=p, H=H, radius=radius, a=a), quad)
        c = volume_constant_I(n, p, H, a, radius, quad)
        v = ball_volume_model(model, radius, quad)
        return c * v ** (1.0 / (2.0 * p - 1.0)) * kbar ** (p / (2.0 * p - 1.0))

    kbar_R = normalized_kbar(space, NormSpec(p=p, H=H, radius=R, a=a), quad)
    diagnostics = {
        "sigma_inner": sigma(r2),
        "sigma_outer": sigma(R),
        "kbar": kbar_R,
        "scale_invariant_kbar": R * R * kbar_R,
    }
    return _checked("doubling", space, params, lhs, rhs, diagnostics)


# ---------------------------------------------------------------------------
# mean curvature and volume comparison with no assumption on the weight
# ---------------------------------------------------------------------------


def _second_kind_weights(space, p, H, extended):
    """Weight factor and exponential weight-factor of the no-hypothesis
    displays: sn_H^2 (standard) or sin^(4p-n-1) (extended), times
    e^((4p-2) f / (n-1))."""
    n = space.n
    sqrt_h = math.sqrt(H) if H > 0.0 else 0.0
    c_f = (4.0 * p - 2.0) / (n - 1.0)

    if extended:

        def shape(t):
            return math.sin(sqrt_h * t) ** (4.0 * p - n - 1.0)

    else:

        def shape(t):
            return sn(H, t) ** 2

    def weight(t):
        return shape(t) * math.exp(c_f * space.weight_jet(t).value)

    return weight, shape


def _moment_beta(n, p, extended):
    """Endpoint power of the model mean curvature moment integrand."""
    return 0.0 if extended else max(0.0, 2.0 * p - n - 1.0)


def _mc_II_window(space, p, extended=False):
    n = space.n
    if n == 2:
        _require_p_above(p, 1.25, "5/4 (two dimensions)")
    else:
        _require_p_above(p, n / 2.0, "n/2")
    # the sine-weighted moment is regular at the pole for every admissible p
    if not extended and p >= n / 2.0 + 1.0:
        return (
            f"model mean curvature moment diverges for p >= n/2 + 1 (p={p}, n={n}); "
            "the estimate is vacuous there"
        )
    return None


def check_mc_II(space, p, H, r, policy=RangePolicy.STANDARD, grid_points=DEFAULT_GRID,
                quad=DEFAULT_SPEC):
    """Mean curvature comparison with no hypothesis on the weight."""
    n = space.n
    _require_radius_in_space(space, r)
    policy = RangePolicy(policy)
    validate_radius(H, r, policy)
    extended = policy is RangePolicy.EXTENDED
    norm_id = "mc_II_sin_norm" if extended else "mc_II_norm"
    point_id = "mc_II_sin_pointwise" if extended else "mc_II_pointwise"
    params = {"p": p, "H": H, "r": r}

    divergence = _mc_II_window(space, p, extended)
    if divergence:
        return [
            _skipped(norm_id, space, params, divergence),
            _skipped(point_id, space, params, divergence),
        ]

    weight, _ = _second_kind_weights(space, p, H, extended)

    def psi(t):
        return mean_curvatures(space, H, 0.0, t).error_II

    def g_psi(t):
        return weight(t) * psi(t) ** (2.0 * p) * volume_element(space, t)

    def g_moment(t):
        return weight(t) * mean_curvature_model(n, H, t, quad) ** (2.0 * p) * volume_element(
            space, t
        )

    def g_excess(t):
        return weight(t) * curvature(space, H, t).excess ** p * volume_element(space, t)

    beta = _moment_beta(n, p, extended)
    grid = _pointwise_grid(quad.pole_cutoff, r, grid_points)
    cums_psi = _cumulative_on_grid(g_psi, grid, quad)
    cums_m = _cumulative_on_grid(g_moment, grid, quad, beta=beta)
    cums_x = _cumulative_on_grid(g_excess, grid, quad)

    moment = cums_m[-1] ** (1.0 / p)
    excess_part = (n - 1.0) * cums_x[-1] ** (1.0 / p)
    lhs_norm = cums_psi[-1] ** (1.0 / p)
    rhs_norm = (2.0 * p - 1.0) / (2.0 * p - n) * (moment + excess_part)
    diagnostics = {"moment_term": moment, "excess_term": excess_part}
    reports = [_checked(norm_id, space, params, lhs_norm, rhs_norm, diagnostics)]

    if extended:
        const = (2.0 * p - 1.0) ** p * ((n - 1.0) / (2.0 * p - n)) ** (p - 1.0)
    else:
        const = (2.0 * p - 1.0) ** p / ((n - 1.0) * (2.0 * p - n) ** (p - 1.0))

    def display_lhs(t):
        return weight(t) * psi(t) ** (2.0 * p - 1.0) * volume_element(space, t)

    def bound_from(cm, cx):
        return const * (cm ** (1.0 / p) + (n - 1.0) * cx ** (1.0 / p)) ** p

    defects = np.array([display_lhs(t) for t in grid]) - bound_from(cums_m, cums_x)

    def defect_at(t):
        cm = _cumulative_at(g_moment, grid, cums_m, t)
        cx = _cumulative_at(g_excess, grid, cums_x, t)
        return display_lhs(t) - bound_from(cm, cx)

    t_star, worst = _pointwise_max(grid, defects, defect_at)
    reports.append(
        _checked(point_id, space, params, worst, 0.0,
                 {"worst_radius": t_star, "moment_term": moment, "excess_term": excess_part})
    )
    return reports


def _pq_moments(space, p, H, R, quad):
    """Unweighted-exponential moments of the bounded-weight displays."""
    n = space.n

    def g_p(t):
        return sn(H, t) ** 2 * mean_curvature_model(n, H, t, quad) ** (2.0 * p) * volume_element(
            space, t
        )

    def g_q(t):
        return sn(H, t) ** 2 * curvature(space, H, t).excess ** p * volume_element(space, t)

    beta = max(0.0, 2.0 * p - n - 1.0)
    if beta > 0.0:
        moment = integrate_power_singular(g_p, beta, R, quad)
    else:
        moment = integrate(g_p, 0.0, R, quad)
    excess = integrate(g_q, 0.0, R, quad)
    return moment ** (1.0 / p), (n - 1.0) * excess ** (1.0 / p)


def check_area_II(space, p, H, r, R, k=None, grid_points=512, quad=DEFAULT_SPEC):
    """Sphere area comparison with no hypothesis on the weight.

    Returns the general display report, plus the bounded-weight variant when
    a bound k is supplied.
    """
    n = space.n
    if not 0.0 < r <= R:
        raise ParameterError(f"need 0 < r <= R, got r={r}, R={R}")
    _require_radius_in_space(space, R, "outer radius")
    validate_radius(H, R)
    params = {"p": p, "H": H, "r": r, "R": R}
    divergence = _mc_II_window(space, p)
    if divergence:
        reports = [_skipped("area_II", space, params, divergence)]
        if k is not None:
            reports.append(_skipped("area_II_bounded", space, dict(params, k=k), divergence))
        return reports

    weight, _ = _second_kind_weights(space, p, H, extended=False)
    unweighted = ModelParams(n, H, 0.0)
    root = 1.0 / (2.0 * p - 1.0)
    cnp = ((2.0 * p - n) / (n - 1.0)) ** root * ((2.0 * p - 1.0) / (2.0 * p - n)) ** (
        p * root
    )

    ratio_r = sphere_area(space, r) / sphere_area_model(unweighted, r)
    ratio_R = sphere_area(space, R) / sphere_area_model(unweighted, R)
    lhs = ratio_R**root - ratio_r**root

    def g_moment(t):
        return weight(t) * mean_curvature_model(n, H, t, quad) ** (2.0 * p) * volume_element(
            space, t
        )

    def g_excess(t):
        return weight(t) * curvature(space, H, t).excess ** p * volume_element(space, t)

    beta = _moment_beta(n, p, extended=False)
    inner_cells = max(64, grid_points // 2)
    inner = np.linspace(0.0, r, inner_cells + 1)[1:]
    outer_cells = grid_points if grid_points % 2 == 0 else grid_points + 1
    outer = np.linspace(r, R, outer_cells + 1)[1:]
    grid = np.concatenate((inner, outer))
    cums_m = _cumulative_on_grid(g_moment, grid, quad, beta=beta)
    cums_x = _cumulative_on_grid(g_excess, grid, quad)

    c_f = -2.0 / (n - 1.0)
    omega = unit_sphere_area(n)

    def outer_integrand_at(idx):
        t = grid[idx]
        m_term = cums_m[idx] ** (1.0 / p)
        x_term = (n - 1.0) * cums_x[idx] ** (1.0 / p)
        area_h = omega * sn(H, t) ** (n - 1)
        return (
            (m_term + x_term) ** (p * root)
            * sn(H, t) ** (-2.0 * root)
            * math.exp(c_f * space.weight_jet(t).value)
            * area_h ** (-root)
        )

    # composite Simpson over the outer section of the grid (even cell count)
    values = np.array([outer_integrand_at(len(inner) + j) for j in range(len(outer))])
    start = np.array([outer_integrand_at(len(inner) - 1)])  # node at t = r
    nodes = np.concatenate((start, values))
    h = (R - r) / outer_cells
    simpson = h / 3.0 * (nodes[0] + nodes[-1] + 4.0 * nodes[1:-1:2].sum() + 2.0 * nodes[2:-2:2].sum())
    rhs = cnp * simpson
    moment = cums_m[-1] ** (1.0 / p)
    excess_part = (n - 1.0) * cums_x[-1] ** (1.0 / p)
    reports = [
        _checked("area_II", space, params, lhs, rhs,
                 {"moment_term": moment, "excess_term": excess_part,
                  "ratio_root_inner": ratio_r**root, "ratio_root_outer": ratio_R**root})
    ]

    if k is not None:
        kparams = dict(params, k=k)
        if not (n / 2.0 < p < n / 2.0 + 1.0) or (n == 2 and not 1.25 < p < 2.0):
            raise ParameterError(
                f"bounded-weight variant needs n/2 < p < n/2 + 1 (5/4 < p < 2 for n=2), got p={p}"
            )
        reason = _bound_gate(space, k, R, quad)
        if reason:
            reports.append(_skipped("area_II_bounded", space, kparams, reason))
            return reports
        moment_p, excess_q = _pq_moments(space, p, H, R, quad)

        def kernel(t):
            area_h = omega * sn(H, t) ** (n - 1)
            return sn(H, t) ** (-2.0 * root) * area_h ** (-root)

        outer2 = integrate(kernel, r, R, quad)
        rhs_k = (
            cnp
            * math.exp(4.0 * k / (n - 1.0))
            * (moment_p + excess_q) ** (p * root)
            * outer2
        )
        reports.append(
            _checked("area_II_bounded", space, kparams, lhs, rhs_k,
                     {"moment_term": moment_p, "excess_term": excess_q,
                      "range_kernel": outer2})
        )
    return reports


def check_vol_II(space, p, H, k, r, R, quad=DEFAULT_SPEC):
    """Ball volume comparison under a two-sided weight bound."""
    n = space.n
    if n == 2:
        if not 1.25 < p < 2.0:
            raise ParameterError(f"need 5/4 < p < 2 for n=2, got p={p}")
    elif not n / 2.0 < p < n / 2.0 + 1.0:
        raise ParameterError(f"need n/2 < p < n/2 + 1, got p={p}, n={n}")
    if k < 0:
        raise ParameterError(f"weight bound k must be >= 0, got {k}")
    if not 0.0 < r <= R:
        raise ParameterError(f"need 0 < r <= R, got r={r}, R={R}")
    _require_radius_in_space(space, R, "outer radius")
    validate_radius(H, R)
    params = {"p": p, "H": H, "k": k, "r": r, "R": R}

    reason = _bound_gate(space, k, R, quad)
    if reason:
        return _skipped("vol_II", space, params, reason)

    unweighted = ModelParams(n, H, 0.0)
    root = 1.0 / (2.0 * p - 1.0)
    vr = ball_volume(space, r, quad) / ball_volume_model(unweighted, r, quad)
    vR = ball_volume(space, R, quad) / ball_volume_model(unweighted, R, quad)
    lhs = vR**root - vr**root

    moment_p, excess_q = _pq_moments(space, p, H, R, quad)
    omega = unit_sphere_area(n)
    q_exp = 2.0 * p * root
    model_volume = ball_volume_table(unweighted, R)

    def kernel(t):
        area_h = omega * sn(H, t) ** (n - 1)
        return area_h * (t ** (1.0 - 1.0 / p) / model_volume(t)) ** q_exp

    outer = integrate(kernel, r, R, quad)
    cnp = (4.0 * p - 2.0) / (p - 1.0) * (
        (n - 1.0) ** (-1.0 / (p - 1.0)) / ((2.0 * p - 1.0) * (2.0 * p - n))
    ) ** ((p - 1.0) / (2.0 * p - 1.0))
    rhs = cnp * math.exp(4.0 * k / (n - 1.0)) * (moment_p + excess_q) ** (p * root) * outer
    return _checked(
        "vol_II", space, params, lhs, rhs,
        {"moment_term": moment_p, "excess_term": excess_q,
         "ratio_root_inner": vr**root, "ratio_root_outer": vR**root},
    )


# ---------------------------------------------------------------------------
# appendix: m-variant weighted Ricci tensor
# ---------------------------------------------------------------------------


def check_mc_m(space, m_param, p, H, r, policy=RangePolicy.STANDARD,
               grid_points=DEFAULT_GRID, quad=DEFAULT_SPEC):
    """Mean curvature comparison against the effective-dimension model."""
    n = space.n
    if not m_param > 0:
        raise ParameterError(f"m parameter must be positive, got {m_param}")
    nu = n + m_param
    _require_p_above(p, nu / 2.0, "(n+m)/2")
    _require_radius_in_space(space, r)
    policy = RangePolicy(policy)
    validate_radius(H, r, policy)
    extended = policy is RangePolicy.EXTENDED
    sin_exp = (4.0 * p - nu - 1.0) if extended else 0.0
    norm_id = "mc_m_sin_norm" if extended else "mc_m_norm"
    point_id = "mc_m_sin_pointwise" if extended else "mc_m_pointwise"
    params = {"m": m_param, "p": p, "H": H, "r": r}

    def error_fn(t):
        w = space.warp_jet(t)
        m_f = (n - 1) * w.d1 / w.value - space.weight_jet(t).d1
        return max(0.0, m_f - mean_curvature_model(nu, H, t, quad))

    norm_spec = NormSpec(p=2.0 * p, H=H, radius=r, sin_weight=sin_exp / (2.0 * p))
    lhs_norm = weighted_norm(space, error_fn, norm_spec, quad)
    excess_norm = curvature_norm(
        space, NormSpec(p=p, H=H, radius=r, m_param=m_param), quad
    )
    rhs_norm = math.sqrt((nu - 1.0) * (2.0 * p - 1.0) / (2.0 * p - nu) * excess_norm)
    reports = [
        _checked(norm_id, space, params, lhs_norm, rhs_norm,
                 {"error_norm": lhs_norm, "excess_norm": excess_norm}),
    ]

    const = (2.0 * p - 1.0) ** p * ((nu - 1.0) / (2.0 * p - nu)) ** (p - 1.0)
    sqrt_h = math.sqrt(H) if H > 0.0 else 0.0

    def rhs_integrand(t):
        return m_bakry_emery_excess(space, m_param, H, t) ** p * volume_element(space, t)

    def display_lhs(t):
        value = error_fn(t) ** (2.0 * p - 1.0) * volume_element(space, t)
        if extended:
            value *= math.sin(sqrt_h * t) ** sin_exp
        return value

    grid = _pointwise_grid(quad.pole_cutoff, r, grid_points)
    cums = _cumulative_on_grid(rhs_integrand, grid, quad)
    defects = np.array([display_lhs(t) for t in grid]) - const * cums

    def defect_at(t):
        return display_lhs(t) - const * _cumulative_at(rhs_integrand, grid, cums, t)

    t_star, worst = _pointwise_max(grid, defects, defect_at)
    reports.append(
        _checked(point_id, space, params, worst, 0.0, {"worst_radius": t_star})
    )
    return reports


def check_vol_m(space, m_param, p, H, r, R, quad=DEFAULT_SPEC):
    """Ball volume comparison against the effective-dimension model."""
    n = space.n
    if not m_param > 0:
        raise ParameterError(f"m parameter must be positive, got {m_param}")
    nu = n + m_param
    _require_p_above(p, nu / 2.0, "(n+m)/2")
    if not 0.0 < r <= R:
        raise ParameterError(f"need 0 < r <= R, got r={r}, R={R}")
    _require_radius_in_space(space, R, "outer radius")
    validate_radius(H, R)
    params = {"m": m_param, "p": p, "H": H, "r": r, "R": R}

    root = 1.0 / (2.0 * p - 1.0)
    vr = ball_volume(space, r, quad) / appendix_ball_volume(n, nu, H, r, quad)
    vR = ball_volume(space, R, quad) / appendix_ball_volume(n, nu, H, R, quad)
    lhs = vR**root - vr**root
    constant = appendix_volume_constant(n, nu, p, H, R, quad)
    norm_power = curvature_norm_power(
        space, NormSpec(p=p, H=H, radius=R, m_param=m_param), quad
    )
    rhs = constant * norm_power**root
    return _checked(
        "vol_m", space, params, lhs, rhs,
        {"constant": constant, "excess_norm_power": norm_power,
         "ratio_root_inner": vr**root, "ratio_root_outer": vR**root},
    )


# ---------------------------------------------------------------------------
# applications: eigenvalue bound and volume growth
# ---------------------------------------------------------------------------


def scenario_first_eigenvalue(space, R, steps=4096, quad=DEFAULT_SPEC):
    """First Dirichlet eigenvalue of the weighted Laplacian on the ball."""
    _require_radius_in_space(space, R, "ball radius")
    if not R > 0:
        raise ParameterError("ball radius must be positive")
    n = space.n

    def coef_fn(t):
        w = space.warp_jet(t)
        return (n - 1) * w.d1 / w.value - space.weight_jet(t).d1

    return first_dirichlet_eigenvalue(coef_fn, n, R, steps).eigenvalue


def check_eigen(space, p, H, a, R, delta, steps=4096, quad=DEFAULT_SPEC):
    """Eigenvalue upper bound against (1 + delta) times the model value."""
    n = space.n
    _require_p_above(p, n / 2.0, "n/2")
    if not delta > 0:
        raise ParameterError(f"slack delta must be positive, got {delta}")
    if a < 0:
        raise ParameterError(f"weight slope bound a must be >= 0, got {a}")
    _require_radius_in_space(space, R, "ball radius")
    validate_radius(H, R)
    params = {"p": p, "H": H, "a": a, "R": R, "delta": delta}

    reason = _gradient_gate(space, a, R, quad)
    if reason:
        return _skipped("eigen", space, params, reason)

    lam_scenario = scenario_first_eigenvalue(space, R, steps, quad)
    lam_model, profile = model_first_eigenvalue(ModelParams(n, H, a), R, steps, quad)
    rhs = (1.0 + delta) * lam_model

    # Rayleigh quotient of the transplanted model eigenfunction (Simpson on
    # the march grid, with the vanishing volume element closing it at 0)
    radii = np.concatenate(([0.0], profile.radii))
    phi = np.concatenate(([1.0], profile.values))
    dphi = np.concatenate(([0.0], profile.slopes))
    elements = np.array([0.0] + [volume_element(space, float(t)) for t in profile.radii])
    h = profile.radii[1] - profile.radii[0]

    def simpson(vals):
        return h / 3.0 * (vals[0] + vals[-1] + 4.0 * vals[1:-1:2].sum() + 2.0 * vals[2:-2:2].sum())

    rayleigh = simpson(dphi**2 * elements) / simpson(phi**2 * elements)
    kbar = normalized_kbar(space, NormSpec(p=p, H=H, radius=R, a=a), quad)
    return _checked(
        "eigen", space, params, lam_scenario, rhs,
        {"model_eigenvalue": lam_model, "rayleigh_quotient": rayleigh,
         "rayleigh_gap": rayleigh - lam_scenario, "kbar": kbar},
    )


def check_volume_growth(space, p, R_list, quad=DEFAULT_SPEC):
    """Qualitative linear volume growth under a nonnegative weight gradient.

    The growth constant of the source result is not explicit, so the check
    asserts positivity of V_f(R)/R and non-collapse across the radius list,
    and reports the normalized curvature smallness plus a documented
    heuristic reference slope.
    """
    n = space.n
    _require_p_above(p, n / 2.0, "n/2")
    radii = sorted(float(R) for R in R_list)
    if not radii:
        raise ParameterError("need at least one radius")
    if radii[0] < 2.0:
        raise ParameterError(f"radii must be >= 2, got {radii[0]}")
    _require_radius_in_space(space, radii[-1], "largest radius")
    params = {"p": p, "R_min": radii[0], "R_max": radii[-1], "R_count": float(len(radii))}

    reason = _nonneg_gradient_gate(space, radii[-1], quad)
    if reason:
        return _skipped("volume_growth", space, params, reason)

    slopes = {R: ball_volume(space, R, quad) / R for R in radii}
    base = slopes[radii[0]]
    lhs = 0.5 * base
    rhs = slopes[radii[-1]]

    kbar_radius = min(radii[-1] + 1.0, space.r_max)
    kbar = normalized_kbar(space, NormSpec(p=p, H=0.0, radius=kbar_radius, a=0.0), quad)
    heuristic = 2.0 * n * VOLUME_GROWTH_HEURISTIC_FACTOR
    c_ref = ball_volume(space, 1.0, quad) / heuristic
    diagnostics = {
        "min_slope": min(slopes.values()),
        "kbar": kbar,
        "kbar_radius": kbar_radius,
        "reference_slope": c_ref,
        "meets_reference": float(min(slopes.values()) >= c_ref),
    }
    for R, value in slopes.items():
        diagnostics[f"slope_at_{R:g}"] = value
    report = _checked("volume_growth", space, params, lhs, rhs, diagnostics)
    if report.satisfied and min(slopes.values()) <= 0.0:
        report = CheckReport(
            report.theorem_id, report.scenario, report.params, report.lhs, report.rhs,
            report.margin, False, report.check_tol, report.diagnostics,
        )
    return report


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

CHECKERS = {
    "mc_I": (check_mc_I, ("p", "H", "a", "r"), ("policy", "grid_points")),
    "vol_I": (check_vol_I, ("p", "H", "a", "r", "R"), ()),
    "annulus": (check_annulus, ("p", "H", "a", "r1", "r2", "R1", "R2"), ()),
    "area_I": (check_area_I, ("p", "H", "a", "r", "R"), ("policy",)),
    "doubling": (check_doubling, ("alpha", "p", "H", "a", "r1", "r2", "R"), ()),
    "mc_II": (check_mc_II, ("p", "H", "r"), ("policy", "grid_points")),
    "area_II": (check_area_II, ("p", "H", "r", "R"), ("k", "grid_points")),
    "vol_II": (check_vol_II, ("p", "H", "k", "r", "R"), ()),
    "mc_m": (check_mc_m, ("m", "p", "H", "r"), ("policy", "grid_points")),
    "vol_m": (check_vol_m, ("m", "p", "H", "r", "R"), ()),
    "eigen": (check_eigen, ("p", "H", "a", "R", "delta"), ()),
    "volume_growth": (check_volume_growth, ("p", "R_list"), ()),
}

_PARAM_ALIASES = {"m": "m_param"}


def run_checker(name, space, quad=DEFAULT_SPEC, **params):
    """Dispatch a checker by id; always returns a list of reports."""
    if name not in CHECKERS:
        raise KeyError(f"unknown theorem id {name!r}")
    fn, required, optional = CHECKERS[name]
    missing = [key for key in required if key not in params]
    if missing:
        raise ParameterError(f"checker {name!r} missing parameters {missing}")
    unknown = [key for key in params if key not in required + optional]
    if unknown:
        raise ParameterError(f"checker {name!r} got unknown parameters {unknown}")
    kwargs = {_PARAM_ALIASES.get(key, key): value for key, value in params.items()}
    result = fn(space, quad=quad, **kwargs)
    return list(result) if isinstance(result, (list, tuple)) else [result]
