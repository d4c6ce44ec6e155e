import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvcomp.expr import (
    BinOp,
    ExprDomainError,
    ExprSyntaxError,
    Func,
    Neg,
    Num,
    Pow,
    Var,
    eval_jet2,
    parse,
    to_string,
)


def test_parse_variable():
    assert parse("r") == Var()


def test_parse_power_of_function():
    assert parse("sin(r)^2") == Pow(Func("sin", Var()), 2.0)


def test_parse_one_minus_gaussian():
    expected = BinOp("-", Num(1.0), Func("exp", Neg(Pow(Var(), 2.0))))
    assert parse("1 - exp(-r^2)") == expected


def test_precedence():
    # ^ binds tighter than unary minus, which binds tighter than * /
    assert parse("-r^2") == Neg(Pow(Var(), 2.0))
    assert parse("2*r + 1") == BinOp("+", BinOp("*", Num(2.0), Var()), Num(1.0))
    assert parse("1 - 2 - 3") == BinOp("-", BinOp("-", Num(1.0), Num(2.0)), Num(3.0))


def test_parse_pi_constant():
    assert parse("pi") == Num(math.pi)


def test_syntax_error_carries_offset():
    with pytest.raises(ExprSyntaxError) as err:
        parse("sin(r) + @")
    assert err.value.offset == 9


def test_unknown_identifier_rejected():
    with pytest.raises(ExprSyntaxError):
        parse("foo(r)")
    with pytest.raises(ExprSyntaxError):
        parse("x + 1")


def test_nonconstant_exponent_rejected():
    with pytest.raises(ExprSyntaxError):
        parse("r^r")


def test_eval_polynomial():
    jet = eval_jet2(parse("r^2"), 3.0)
    assert (jet.value, jet.d1, jet.d2) == (9.0, 6.0, 2.0)


def test_eval_sin_at_zero():
    jet = eval_jet2(parse("sin(r)"), 0.0)
    assert (jet.value, jet.d1, jet.d2) == (0.0, 1.0, 0.0)


def test_eval_matches_central_differences():
    # derived oracle: central differences of 1 - exp(-r^2) with step 1e-5,
    # evaluated in 50-digit arithmetic so only the jet under test is float64
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 50
    expr = parse("1 - exp(-r^2)")
    r, h = mp.mpf("0.7"), mp.mpf("1e-5")

    def f(x):
        return 1 - mp.exp(-(x**2))

    jet = eval_jet2(expr, 0.7)
    d1_fd = (f(r + h) - f(r - h)) / (2 * h)
    d2_fd = (f(r + h) - 2 * f(r) + f(r - h)) / (h * h)
    assert abs(jet.value - float(f(r))) < 1e-12
    assert abs(jet.d1 - float(d1_fd)) < 1e-7
    assert abs(jet.d2 - float(d2_fd)) < 1e-7


def test_domain_errors():
    with pytest.raises(ExprDomainError):
        eval_jet2(parse("log(r)"), 0.0)
    with pytest.raises(ExprDomainError):
        eval_jet2(parse("1/r"), 0.0)
    with pytest.raises(ExprDomainError):
        eval_jet2(parse("sqrt(r)"), -1.0)
    with pytest.raises(ExprDomainError):
        eval_jet2(parse("exp(r)"), 1e4)


def test_integer_power_of_negative_base():
    jet = eval_jet2(parse("r^3"), -2.0)
    assert (jet.value, jet.d1, jet.d2) == (-8.0, 12.0, -12.0)


def test_jet_addition_identity_exact():
    e = parse("sin(r) * exp(r) - r^2")
    doubled = BinOp("+", e, e)
    for r in (0.1, 0.7, 1.9):
        a = eval_jet2(e, r)
        b = eval_jet2(doubled, r)
        assert b.value == 2.0 * a.value
        assert b.d1 == 2.0 * a.d1
        assert b.d2 == 2.0 * a.d2


ROUND_TRIP_CASES = [
    "r",
    "-r^2",
    "1 - exp(-r^2)",
    "r*(1 + 0.1*r^2)",
    "-0.5*sqrt(r^2 + 1e-16)",
    "sin(r)*(1 + 0.1*sin(r)^2)",
    "(r + 1)^(-2)",
    "r / (1 + r) / (2 - r)",
    "cos(r)^2 + sin(r)^2",
    "tanh(r) - sinh(r)/cosh(r)",
    "2*pi*r",
]


@pytest.mark.parametrize("text", ROUND_TRIP_CASES)
def test_round_trip_stability(text):
    tree = parse(text)
    printed = to_string(tree)
    assert parse(printed) == tree
    # printing is a fixed point after one round
    assert to_string(parse(printed)) == printed


@st.composite
def expr_trees(draw, depth=0):
    choices = ["num", "var"]
    if depth < 4:
        choices += ["neg", "bin", "pow", "func"]
    kind = draw(st.sampled_from(choices))
    if kind == "num":
        return Num(draw(st.floats(0.0, 10.0, allow_nan=False)))
    if kind == "var":
        return Var()
    if kind == "neg":
        return Neg(draw(expr_trees(depth=depth + 1)))
    if kind == "bin":
        op = draw(st.sampled_from("+-*/"))
        return BinOp(op, draw(expr_trees(depth=depth + 1)), draw(expr_trees(depth=depth + 1)))
    if kind == "pow":
        exponent = float(draw(st.integers(-3, 4)))
        return Pow(draw(expr_trees(depth=depth + 1)), exponent)
    name = draw(st.sampled_from(["sin", "cos", "exp", "sqrt", "tanh"]))
    return Func(name, draw(expr_trees(depth=depth + 1)))


@given(expr_trees())
@settings(max_examples=200, deadline=None)
def test_round_trip_random_trees(tree):
    assert parse(to_string(tree)) == tree


FD_DOMAINS = {
    "sin": (-3.0, 3.0),
    "cos": (-3.0, 3.0),
    "sinh": (-2.0, 2.0),
    "cosh": (-2.0, 2.0),
    "exp": (-2.0, 2.0),
    "log": (0.1, 5.0),
    "sqrt": (0.1, 5.0),
    "tanh": (-2.0, 2.0),
}


@pytest.mark.parametrize("name", sorted(FD_DOMAINS))
def test_function_jets_match_finite_differences(name):
    lo, hi = FD_DOMAINS[name]
    expr = parse(f"{name}(r)")
    fn = getattr(math, name)
    h = 1e-5
    for i in range(101):
        r = lo + (hi - lo) * i / 100
        jet = eval_jet2(expr, r)
        d1 = (fn(r + h) - fn(r - h)) / (2 * h)
        d2 = (fn(r + h) - 2 * fn(r) + fn(r - h)) / (h * h)
        assert abs(jet.d1 - d1) <= 1e-6 * (1 + abs(jet.d1))
        assert abs(jet.d2 - d2) <= 1e-4 * (1 + abs(jet.d2))
