import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from paraslant.expr import (
    BinOp,
    Call,
    ExprEvalError,
    ExprSyntaxError,
    FUNCTIONS,
    Neg,
    Num,
    Pow,
    ScalarField,
    Var,
    coord_env,
    diff,
    parse_expr,
    print_expr,
    variables,
)


def ev(src, **env):
    return parse_expr(src).evaluate(env)


def test_sine_field_example():
    node = parse_expr("2 + 0.5*sin(x1)")
    assert node.evaluate({"x1": 0.0}) == 2.0
    assert variables(node) == {"x1"}


@pytest.mark.parametrize("src, value", [
    ("-2^2", -4.0),
    ("2*3^2", 18.0),
    ("1 - 2 - 3", -4.0),
    ("8/4/2", 1.0),
    ("(1 + 2)*3", 9.0),
    ("-x1*x2", -6.0),
    ("2^0", 1.0),
    ("abs(-3) + sqrt(16)", 7.0),
    ("1.5e1 + .5", 15.5),
    ("exp(0) + cos(0)", 2.0),
])
def test_precedence_and_values(src, value):
    assert ev(src, x1=2.0, x2=3.0) == pytest.approx(value)


@pytest.mark.parametrize("src, col, fragment", [
    ("sqrt(x1", 8, "expected ')'"),
    ("2 +", 4, "end of input"),
    ("foo(x1)", 1, "unknown identifier"),
    ("y1 + 1", 1, "unknown identifier"),
    ("sin()", 5, "takes 1 argument"),
    ("sin(x1, x2)", 7, "takes 1 argument"),
    ("sin x1", 5, "argument list"),
    ("x1^2.5", 4, "non-negative integer"),
    ("x1^2^3", 5, "chained powers"),
    ("2 $ 3", 3, "unexpected character"),
    ("(x1))", 5, "unexpected ')'"),
])
def test_syntax_errors_carry_location(src, col, fragment):
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr(src)
    assert info.value.col == col
    assert info.value.line == 1
    assert fragment in info.value.message


def test_syntax_error_on_second_line():
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr("1 +\n  * 2")
    assert (info.value.line, info.value.col) == (2, 3)


def test_division_by_zero_at_runtime():
    node = parse_expr("1/x1")
    with pytest.raises(ExprEvalError) as info:
        node.evaluate({"x1": 0.0})
    assert "division by zero" in str(info.value) and info.value.col == 2


def test_sqrt_of_negative_and_unbound_variable():
    with pytest.raises(ExprEvalError):
        ev("sqrt(x1)", x1=-1.0)
    with pytest.raises(ExprEvalError):
        ev("x3 + 1", x1=0.0)


def test_scalar_field_rejects_foreign_variables():
    with pytest.raises(ExprEvalError):
        ScalarField("u1 + x1")
    ScalarField("u1 + u2", dim=2, prefix="u")


def test_scalar_field_vectorized_matches_pointwise(rng):
    f = ScalarField("2 + 0.5*sin(x1) - x2*x3^2")
    pts = rng.uniform(-1, 1, (20, 4))
    np.testing.assert_allclose(f.evaluate_many(pts), [f(p) for p in pts], rtol=1e-15)
    np.testing.assert_array_equal(ScalarField("3").evaluate_many(pts), np.full(20, 3.0))


def test_coord_env():
    assert coord_env([1.0, 2.0], "u") == {"u1": 1.0, "u2": 2.0}


# --- random trees --------------------------------------------------------------------

VARS = ["x1", "x2", "x3", "x4"]
leaves = st.one_of(
    st.floats(0, 1e6, allow_nan=False, allow_infinity=False).map(Num),
    st.sampled_from(VARS).map(Var),
)


def extend(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(st.sampled_from("+-*/"), children, children).map(lambda t: BinOp(*t)),
        st.tuples(children, st.integers(0, 4)).map(lambda t: Pow(*t)),
        st.tuples(st.sampled_from(sorted(FUNCTIONS)), children).map(lambda t: Call(*t)),
    )


trees = st.recursive(leaves, extend, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(trees)
def test_print_parse_round_trip(tree):
    assert parse_expr(print_expr(tree)) == tree


# smooth trees for derivative checks: no abs, sqrt or division
smooth = st.recursive(
    st.one_of(st.floats(0, 3, allow_nan=False).map(Num), st.sampled_from(VARS).map(Var)),
    lambda c: st.one_of(
        c.map(Neg),
        st.tuples(st.sampled_from("+-*"), c, c).map(lambda t: BinOp(*t)),
        st.tuples(c, st.integers(0, 3)).map(lambda t: Pow(*t)),
        st.tuples(st.sampled_from(["sin", "cos"]), c).map(lambda t: Call(*t)),
    ),
    max_leaves=6,
)


@settings(max_examples=100, deadline=None)
@given(smooth, st.sampled_from(VARS), st.lists(st.floats(-1, 1), min_size=4, max_size=4))
def test_symbolic_derivative_matches_finite_difference(tree, var, point):
    env = dict(zip(VARS, point))
    h = 1e-6
    up, dn = dict(env), dict(env)
    up[var] += h
    dn[var] -= h
    fd = (tree.evaluate(up) - tree.evaluate(dn)) / (2 * h)
    exact = diff(tree, var).evaluate(env)
    scale = max(1.0, abs(tree.evaluate(env)), abs(exact))
    assert abs(fd - exact) <= 1e-5 * scale


def test_derivative_examples():
    f = ScalarField("2 + 0.5*sin(x1)")
    np.testing.assert_allclose(f.gradient([0.3, 0, 0, 0]), [0.5 * np.cos(0.3), 0, 0, 0])
    g = ScalarField("sqrt(x1) + abs(x2) + x3/x4 + exp(x1*x2)")
    p = np.array([0.5, -2.0, 1.0, 4.0])
    want = [0.5 / np.sqrt(0.5) - 2 * np.exp(-1.0), -1 + 0.5 * np.exp(-1.0), 0.25, -1 / 16]
    np.testing.assert_allclose(g.gradient(p), want, rtol=1e-12)
