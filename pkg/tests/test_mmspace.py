import math

import numpy as np
import pytest

import oracles
from curvcomp.mmspace import (
    InvariantViolation,
    annulus_volume,
    ball_volume,
    curvature,
    m_bakry_emery_excess,
    make_space,
    mean_curvatures,
    sphere_area,
    volume_element,
)
from curvcomp.numerics import riccati_residual
from curvcomp.scenarios import make_scenario


@pytest.fixture(scope="module")
def gaussian3():
    return make_scenario("gaussian", 3)


@pytest.fixture(scope="module")
def flare3():
    return make_scenario("flare", 3)


@pytest.fixture(scope="module")
def wobble3():
    return make_scenario("wobble", 3)


def test_model_curvature_is_constant():
    for n in (2, 3, 4):
        for H in (-1.0, 0.0, 1.0):
            space = make_scenario("model", n, H=H)
            for r in (0.3, 0.8, 1.3):
                prof = curvature(space, H, r)
                assert prof.ric_rad == pytest.approx((n - 1) * H, abs=1e-9)
                assert prof.ric_tan == pytest.approx((n - 1) * H, abs=1e-9)
                assert prof.excess <= 1e-9


def test_gaussian_is_unit_soliton(gaussian3):
    # weight r^2/2 has unit Hessian, flat warp has no curvature
    for r in (0.5, 1.0, 2.0):
        prof = curvature(gaussian3, 0.5, r)
        assert prof.ric_rad == pytest.approx(1.0, abs=1e-12)
        assert prof.ric_tan == pytest.approx(1.0, abs=1e-12)
        assert prof.lambda_min == pytest.approx(1.0, abs=1e-12)
        # (n-1) H = 1 exactly at H = 1/2, n = 3
        assert prof.excess == pytest.approx(0.0, abs=1e-12)


def test_flare_has_negative_curvature_somewhere(flare3):
    prof = curvature(flare3, 0.0, 1.0)
    assert prof.lambda_min < 0
    assert prof.excess > 0
    assert prof.excess == pytest.approx(-prof.lambda_min, abs=1e-15)


def test_curvature_matches_symbolic_oracle(flare3, wobble3, gaussian3):
    for space in (flare3, wobble3, gaussian3):
        sym = oracles.SymScenario(space)
        t = np.linspace(0.05, space.r_max, 40)
        rad = np.array([curvature(space, 0.0, float(r)).ric_rad for r in t])
        tan = np.array([curvature(space, 0.0, float(r)).ric_tan for r in t])
        assert np.allclose(rad, sym.ric_radial(t), atol=1e-9)
        assert np.allclose(tan, sym.ric_tangential(t), atol=1e-9)


def test_curvature_matches_finite_difference_oracle(flare3, wobble3):
    # jets replaced by central differences of plain evaluations
    h = 1e-4
    for space in (flare3, wobble3):
        n = space.n
        for r in (0.4, 1.1, 2.3):
            phi = [space.warp_jet(r + k * h).value for k in (-1, 0, 1)]
            f = [space.weight_jet(r + k * h).value for k in (-1, 0, 1)]
            dphi = (phi[2] - phi[0]) / (2 * h)
            d2phi = (phi[2] - 2 * phi[1] + phi[0]) / (h * h)
            df = (f[2] - f[0]) / (2 * h)
            d2f = (f[2] - 2 * f[1] + f[0]) / (h * h)
            rad_fd = -(n - 1) * d2phi / phi[1] + d2f
            tan_fd = (
                -d2phi / phi[1]
                + (n - 2) * (1 - dphi**2) / phi[1] ** 2
                + df * dphi / phi[1]
            )
            prof = curvature(space, 0.0, r)
            assert prof.ric_rad == pytest.approx(rad_fd, abs=1e-5)
            assert prof.ric_tan == pytest.approx(tan_fd, abs=1e-5)


def test_excess_nondecreasing_in_H(wobble3):
    for r in (0.5, 1.5, 2.5):
        values = [curvature(wobble3, H, r).excess for H in (-1.0, -0.5, 0.0, 0.5, 1.0)]
        assert all(a <= b + 1e-14 for a, b in zip(values, values[1:]))


def test_weighted_model_mean_curvature_equality():
    # linear-weight model: m_f equals the model value plus the slope, so the
    # error vanishes; smoothing at the pole costs at most ~1e-6
    for H in (-1.0, 0.0, 1.0):
        space = make_scenario("weighted-model", 3, H=H, a=0.5)
        for r in (0.3, 0.9, 1.4):
            mc = mean_curvatures(space, H, 0.5, r)
            assert mc.error_I <= 1e-6


def test_gaussian_mean_curvatures_closed_form(gaussian3):
    mc = mean_curvatures(gaussian3, 0.5, 0.0, 1.0)
    assert mc.m == pytest.approx(2.0, abs=1e-12)
    assert mc.m_f == pytest.approx(1.0, abs=1e-12)
    m_h = math.sqrt(2.0) / math.tan(1.0 / math.sqrt(2.0))
    assert mc.error_I == 0.0
    assert mc.m_f < m_h


def test_flare_overshoots_flat_model(flare3):
    # warp grows faster than r, so m_f exceeds the flat model value
    hits = [r for r in np.linspace(0.1, 1.5, 20) if
            mean_curvatures(flare3, 0.0, 0.0, float(r)).error_I > 0]
    assert hits


def test_zero_weight_reduces_to_classical(flare3):
    for r in (0.4, 1.0, 2.0):
        mc = mean_curvatures(flare3, 0.0, 0.0, r)
        assert mc.m_f == mc.m
        assert mc.error_I == mc.error_II


def test_volume_element_values(gaussian3, wobble3):
    flat = make_scenario("model", 3, H=0.0)
    assert volume_element(flat, 2.0) == pytest.approx(4.0, rel=1e-14)
    assert volume_element(gaussian3, 1.0) == pytest.approx(math.exp(-0.5), rel=1e-12)
    expected = math.exp(0.1) * (math.pi / 2) ** 2
    assert volume_element(wobble3, math.pi / 2) == pytest.approx(expected, rel=1e-12)


def test_unit_ball_volume():
    flat = make_scenario("model", 3, H=0.0)
    assert ball_volume(flat, 1.0) == pytest.approx(4 * math.pi / 3, rel=1e-10)
    assert sphere_area(flat, 1.0) == pytest.approx(4 * math.pi, rel=1e-12)


def test_ball_volume_monotone(gaussian3):
    radii = np.linspace(0.2, 3.0, 8)
    vols = [ball_volume(gaussian3, float(R)) for R in radii]
    assert all(a < b for a, b in zip(vols, vols[1:]))


def test_gaussian_volume_dense_oracle(gaussian3):
    sym = oracles.SymScenario(gaussian3)
    value = ball_volume(gaussian3, 1.0)
    dense = oracles.dense_ball_volume(sym, 1.0)
    assert value == pytest.approx(dense, abs=1e-8 * (1 + abs(dense)))


def test_annulus_volume_consistency(gaussian3):
    whole = ball_volume(gaussian3, 2.0)
    split = ball_volume(gaussian3, 0.7) + annulus_volume(gaussian3, 0.7, 2.0)
    assert whole == pytest.approx(split, abs=1e-9)


def test_m_bakry_emery_reduces_when_weight_zero(flare3):
    for r in (0.5, 1.5):
        prof = curvature(flare3, 0.0, r)
        excess_m = m_bakry_emery_excess(flare3, 2.0, 0.0, r)
        # f = 0 collapses the m-variant to the plain tensor; only the
        # comparison level (n+m-1)H changes, and H=0 keeps it equal
        assert excess_m == pytest.approx(max(0.0, -prof.lambda_min), abs=1e-14)


def test_m_bakry_emery_gaussian_closed_form(gaussian3):
    assert m_bakry_emery_excess(gaussian3, 1.0, 0.0, 1.0) == pytest.approx(0.0, abs=1e-12)
    assert m_bakry_emery_excess(gaussian3, 1.0, 0.0, 2.0) == pytest.approx(3.0, abs=1e-12)


def test_m_bakry_emery_rejects_bad_parameter(gaussian3):
    with pytest.raises(ValueError):
        m_bakry_emery_excess(gaussian3, 0.0, 0.0, 1.0)


def test_riccati_residual_on_scenarios(gaussian3, flare3, wobble3):
    rng = np.random.RandomState(7)
    for space in (gaussian3, flare3, wobble3):
        for r in rng.uniform(1e-6, space.r_max, 100):
            assert abs(riccati_residual(space, float(r))) <= 1e-8


def test_validation_rejects_bad_profiles():
    with pytest.raises(InvariantViolation):
        make_space("bad-slope", 3, "2*r", "0", 1.0)
    with pytest.raises(InvariantViolation):
        make_space("bad-weight", 3, "r", "r", 1.0)
    with pytest.raises(InvariantViolation):
        make_space("bad-offset", 3, "r + 1", "0", 1.0)
    with pytest.raises(InvariantViolation):
        make_space("negative-warp", 3, "sin(r)", "0", 4.0)
