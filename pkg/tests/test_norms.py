import math

import numpy as np
import pytest

import oracles
from curvcomp.modelspace import ParameterError
from curvcomp.norms import (
    NormSpec,
    curvature_norm,
    curvature_norm_power,
    normalized_kbar,
    weighted_norm,
)
from curvcomp.scenarios import make_scenario


@pytest.fixture(scope="module")
def flat3():
    return make_scenario("model", 3, H=0.0)


@pytest.fixture(scope="module")
def gaussian3():
    return make_scenario("gaussian", 3)


def test_norm_of_zero_function(flat3):
    spec = NormSpec(p=2.0, H=0.0, radius=1.0)
    assert weighted_norm(flat3, lambda t: 0.0, spec) == 0.0


def test_norm_of_one_is_ball_volume(flat3):
    spec = NormSpec(p=1.0, H=0.0, radius=1.0)
    assert weighted_norm(flat3, lambda t: 1.0, spec) == pytest.approx(
        4 * math.pi / 3, rel=1e-10
    )


def test_norm_against_dense_oracle():
    flare = make_scenario("flare", 3)
    sym = oracles.SymScenario(flare)
    spec = NormSpec(p=2.0, H=0.0, radius=1.0)
    value = curvature_norm(flare, spec)
    dense = oracles.dense_weighted_norm_power(sym, lambda t: sym.excess(0.0, t), 2.0, 0.0, 1.0)
    assert value == pytest.approx(dense**0.5, abs=1e-7 * (1 + dense**0.5))


def test_gaussian_norm_vanishes_at_matching_level(gaussian3):
    spec = NormSpec(p=2.0, H=0.5, radius=2.0)
    assert curvature_norm(gaussian3, spec) == 0.0


def test_model_norm_vanishes_at_matching_curvature():
    space = make_scenario("model", 3, H=1.0)
    spec = NormSpec(p=2.0, H=1.0, radius=1.4)
    assert curvature_norm(space, spec) <= 1e-9


def test_wobble_norm_positive_and_matches_dense_oracle():
    wobble = make_scenario("wobble", 3)
    sym = oracles.SymScenario(wobble)
    spec = NormSpec(p=2.0, H=0.0, a=0.2, radius=2.0)
    value = curvature_norm(wobble, spec)
    assert value > 0
    dense = oracles.dense_weighted_norm_power(
        sym, lambda t: sym.excess(0.0, t), 2.0, 0.2, 2.0
    )
    assert value == pytest.approx(dense**0.5, abs=1e-7 * (1 + dense**0.5))


def test_norm_zero_iff_pointwise_bound():
    # both directions on catalog members, at matched and unmatched levels
    cases = [
        (make_scenario("gaussian", 3), 0.5, True),
        (make_scenario("gaussian", 3), 0.6, False),
        (make_scenario("model", 4, H=-1.0), -1.0, True),
        (make_scenario("model", 4, H=-1.0), -0.9, False),
        (make_scenario("flare", 3), 0.0, False),
    ]
    for space, H, expect_zero in cases:
        spec = NormSpec(p=2.5, H=H, radius=2.0)
        value = curvature_norm(space, spec)
        from curvcomp.mmspace import curvature

        deficit = max(
            curvature(space, H, float(r)).excess for r in np.linspace(0.01, 2.0, 200)
        )
        if expect_zero:
            assert value <= 1e-9
            assert deficit <= 1e-9
        else:
            assert value > 1e-9
            assert deficit > 1e-9


def test_norm_nondecreasing_in_radius():
    wobble = make_scenario("wobble", 3)
    values = [
        curvature_norm(wobble, NormSpec(p=2.0, H=0.0, radius=R)) for R in (0.5, 1.0, 2.0, 3.0)
    ]
    assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))


def test_sin_weight_reduces_norm():
    # the sine factor is at most one on the admissible range
    capped = make_scenario("capped", 3)
    plain = NormSpec(p=2.0, H=1.0, radius=2.0)
    weighted = NormSpec(p=2.0, H=1.0, radius=2.0, sin_weight=0.75)
    assert curvature_norm(capped, weighted) <= curvature_norm(capped, plain) + 1e-12


def test_kbar_zero_on_equality_scenarios(gaussian3):
    assert normalized_kbar(gaussian3, NormSpec(p=2.0, H=0.5, radius=2.0)) == 0.0


def test_kbar_linear_in_wobble_amplitude():
    values = []
    for eps in (0.1, 0.05, 0.025):
        space = make_scenario("wobble", 3, eps=eps)
        values.append(normalized_kbar(space, NormSpec(p=2.0, H=0.0, radius=2.0)))
    assert values[0] / values[1] == pytest.approx(2.0, abs=0.1)
    assert values[1] / values[2] == pytest.approx(2.0, abs=0.1)


def test_kbar_scale_invariant_combination():
    wobble = make_scenario("wobble", 3)
    for radius in (1.0, 2.0):
        kbar = normalized_kbar(wobble, NormSpec(p=2.0, H=0.0, radius=radius))
        assert kbar >= 0
        assert np.isfinite(radius * radius * kbar)


def test_m_variant_norm(gaussian3):
    spec = NormSpec(p=3.0, H=0.0, radius=1.0, m_param=1.0)
    # radial eigenvalue 1 - r^2 stays nonnegative up to 1, so no deficit
    assert curvature_norm(gaussian3, spec) == 0.0
    wide = NormSpec(p=3.0, H=0.0, radius=2.0, m_param=1.0)
    assert curvature_norm(gaussian3, wide) > 0


def test_norm_parameter_validation(gaussian3):
    with pytest.raises(ParameterError):
        NormSpec(p=0.5, H=0.0, radius=1.0)
    with pytest.raises(ParameterError):
        NormSpec(p=2.0, H=0.0, radius=-1.0)
    with pytest.raises(ParameterError):
        NormSpec(p=2.0, H=0.0, radius=1.0, a=-0.1)
    with pytest.raises(ParameterError):
        NormSpec(p=2.0, H=0.0, radius=1.0, m_param=1.0, a=0.5)
    with pytest.raises(ParameterError):
        curvature_norm_power(gaussian3, NormSpec(p=1.2, H=0.0, radius=1.0))


def test_classical_reduction_matches_unweighted_formula():
    # with f = 0 and a = 0 the norm is the plain manifold integral
    flare = make_scenario("flare", 3)
    sym = oracles.SymScenario(flare)
    spec = NormSpec(p=2.0, H=0.0, radius=1.5)
    value = curvature_norm_power(flare, spec)
    t = np.linspace(0.0, 1.5, 400_001)[1:]
    classical = oracles.unit_sphere_area(3) * np.trapezoid(
        np.concatenate(([0.0], sym.excess(0.0, t) ** 2 * sym.phi(t) ** 2)),
        np.linspace(0.0, 1.5, 400_001),
    )
    assert value == pytest.approx(classical, rel=1e-8)
