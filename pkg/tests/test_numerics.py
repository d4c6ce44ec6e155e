import math
from types import SimpleNamespace

import pytest

from curvcomp.expr import parse
from curvcomp.numerics import (
    BracketError,
    QuadratureError,
    QuadratureSpec,
    bisect_root,
    integrate,
    integrate_power_singular,
    riccati_residual,
)


def test_integrate_polynomial():
    assert integrate(lambda t: t * t, 0.0, 1.0) == pytest.approx(1.0 / 3.0, abs=1e-10)


def test_integrate_sine():
    assert integrate(math.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-10)


def test_integrate_empty_interval():
    assert integrate(math.sin, 1.0, 1.0) == 0.0


def test_integrate_rejects_reversed_bounds():
    with pytest.raises(ValueError):
        integrate(math.sin, 1.0, 0.0)


def test_power_singular_cube_root():
    # closed-form antiderivative: (3/2) t^(2/3), so the integral over (0,1] is 1.5
    value = integrate_power_singular(lambda t: t ** (-1.0 / 3.0), 1.0 / 3.0, 1.0)
    assert value == pytest.approx(1.5, abs=1e-8)


def test_power_singular_rejects_divergent():
    with pytest.raises(ValueError):
        integrate_power_singular(lambda t: 1.0 / t, 1.0, 1.0)


def test_additivity_over_split():
    def g(t):
        return math.exp(-t) * math.cos(3 * t)

    whole = integrate(g, 0.0, 2.0)
    parts = integrate(g, 0.0, 0.7) + integrate(g, 0.7, 2.0)
    assert whole == pytest.approx(parts, abs=3e-10)


def test_sharp_spike_resolved():
    # narrow bump at 1e-8 scale, like the smoothed model weight curvature
    eta = 1e-8

    def g(t):
        return t / (t * t + eta * eta)

    # exact: 0.5*log(1 + (1/eta)^2)
    exact = 0.5 * math.log1p((1.0 / eta) ** 2)
    assert integrate(g, 0.0, 1.0) == pytest.approx(exact, rel=1e-9)


def test_convergence_failure_carries_estimate():
    spec = QuadratureSpec(max_depth=8)
    with pytest.raises(QuadratureError) as err:
        integrate(lambda t: t ** (-0.99), 0.0, 1.0, spec)
    assert err.value.estimate > 0
    assert err.value.error_bound > 0


def test_bisect_sqrt2():
    root = bisect_root(lambda x: x * x - 2.0, 1.0, 2.0, 1e-12)
    assert root == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_bisect_cos():
    assert bisect_root(math.cos, 1.0, 2.0, 1e-12) == pytest.approx(math.pi / 2, abs=1e-12)


def test_bisect_requires_bracket():
    with pytest.raises(BracketError):
        bisect_root(lambda x: x * x + 1.0, -1.0, 1.0, 1e-8)


def _stub_space(warp_text, n=3, r_max=3.0):
    return SimpleNamespace(n=n, warp=parse(warp_text), r_max=r_max)


@pytest.mark.parametrize(
    "warp,r",
    [
        ("sin(r)", 0.5),  # curvature +1 model
        ("r", 2.0),  # flat
        ("sinh(r)", 1.3),  # curvature -1 model
        ("r*(1 + 0.1*r^2)", 1.0),  # flare
        ("sin(r)*(1 + 0.1*sin(r)^2)", 1.2),  # capped
    ],
)
def test_riccati_identity(warp, r):
    assert abs(riccati_residual(_stub_space(warp), r)) <= 1e-9


def test_riccati_identity_via_symbolic_oracle():
    sympy = pytest.importorskip("sympy")
    r = sympy.Symbol("r", positive=True)
    phi = r * (1 + sympy.Rational(1, 10) * r**2)
    n = 3
    m = (n - 1) * sympy.diff(phi, r) / phi
    residual = sympy.diff(m, r) + m**2 / (n - 1) - (n - 1) * sympy.diff(phi, r, 2) / phi
    assert sympy.simplify(residual) == 0


def test_riccati_rejects_out_of_range():
    with pytest.raises(ValueError):
        riccati_residual(_stub_space("r"), 0.0)
    with pytest.raises(ValueError):
        riccati_residual(_stub_space("r", r_max=1.0), 2.0)
