import json

import numpy as np
import pytest

from curvcomp.mmspace import InvariantViolation, curvature
from curvcomp.numerics import riccati_residual
from curvcomp.scenarios import catalog, load, make_scenario


@pytest.fixture(scope="module")
def members():
    return catalog()


def test_catalog_covers_families_and_dimensions(members):
    names = [space.name for space in members]
    assert len(names) == len(set(names))
    for n in (2, 3, 4):
        for family in ("model", "weighted-model", "gaussian", "flare", "wobble", "bump",
                       "capped"):
            assert any(name.startswith(f"{family}:n={n}") for name in names)
    # model families carry every catalog curvature
    for H in ("H=-1", "H=0", "H=1"):
        assert any(H in name and name.startswith("model:") for name in names)


def test_catalog_passes_riccati_suite(members):
    rng = np.random.RandomState(11)
    for space in members:
        radii = rng.uniform(1e-6, space.r_max, 25)
        for r in radii:
            assert abs(riccati_residual(space, float(r))) <= 1e-8, space.name


def test_gaussian_eigenvalue_constant_on_grid():
    space = make_scenario("gaussian", 3, c=1.0)
    for r in np.linspace(0.1, 3.0, 30):
        prof = curvature(space, 0.0, float(r))
        assert prof.lambda_min == pytest.approx(1.0, abs=1e-10)


def test_bump_weight_bounds():
    space = make_scenario("bump", 3, k=0.5)
    for r in np.linspace(0.05, 3.0, 60):
        f = space.weight_jet(float(r))
        assert abs(f.value) <= 0.5 + 1e-12
        assert f.d1 >= -1e-12


def test_flare_excess_is_negative_part():
    space = make_scenario("flare", 3, eps=0.1)
    found = False
    for r in np.linspace(0.1, 3.0, 30):
        prof = curvature(space, 0.0, float(r))
        if prof.lambda_min < 0:
            found = True
            assert prof.excess == pytest.approx(-prof.lambda_min, abs=1e-14)
        else:
            assert prof.excess == 0.0
    assert found


def test_load_model_file(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(
        json.dumps(
            {
                "name": "round-cap",
                "dimension": 3,
                "warp": "sin(r)",
                "weight": "0",
                "r_max": 1.5,
            }
        )
    )
    space = load(str(path))
    assert space.name == "round-cap"
    assert space.n == 3
    prof = curvature(space, 1.0, 0.7)
    assert prof.excess <= 1e-9


def test_load_inline_text_and_dict():
    payload = {
        "name": "inline",
        "dimension": 2,
        "warp": "r",
        "weight": "0.25*r^2",
        "r_max": 2.0,
        "tags": ["soliton"],
        "expected": {"nonneg_gradient": True},
    }
    from_text = load(json.dumps(payload))
    from_dict = load(payload)
    assert from_text.name == from_dict.name == "inline"
    assert from_text.hints == {"nonneg_gradient": True}
    assert from_text.tags == ("soliton",)


def test_load_rejects_bad_slope(tmp_path):
    with pytest.raises(InvariantViolation) as err:
        load(json.dumps({"name": "x", "dimension": 3, "warp": "2*r", "weight": "0",
                         "r_max": 1.0}))
    assert "warp'(0)" in str(err.value)


def test_load_rejects_bad_weight_slope():
    with pytest.raises(InvariantViolation) as err:
        load(json.dumps({"name": "x", "dimension": 3, "warp": "r", "weight": "r",
                         "r_max": 1.0}))
    assert "weight'(0)" in str(err.value)


def test_load_rejects_malformed_objects():
    with pytest.raises(ValueError):
        load("not json at all {")
    with pytest.raises(ValueError):
        load(json.dumps({"name": "x"}))
    with pytest.raises(ValueError):
        load(json.dumps({"name": "x", "dimension": 3, "warp": "r", "weight": "0",
                         "r_max": 1.0, "surprise": 1}))
    with pytest.raises(InvariantViolation):
        load(json.dumps({"name": "x", "dimension": 2.5, "warp": "r", "weight": "0",
                         "r_max": 1.0}))


def test_make_scenario_rejects_unknown():
    with pytest.raises(KeyError):
        make_scenario("torus", 3)
    with pytest.raises(KeyError):
        make_scenario("gaussian", 3, epsilon=1.0)
