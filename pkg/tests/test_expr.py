import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from squeezedyn.errors import EvaluationError, ParseError
from squeezedyn.expr import FUNCTIONS, BinOp, Call, CoefficientFn, Neg, Num, Var, as_coefficient, evaluate, parse, parse_tree, to_source


@pytest.mark.parametrize("source, t, expected", [
    ("0.5", 0.0, 0.5),
    ("0.5*cos(2*t)", 0.0, 0.5),
    ("0.5*cos(2*t)", math.pi / 2, -0.5),
    ("1/(1+t^2)", 2.0, 0.2),
    ("t^2", 3.0, 9.0),
    ("-t^2", 2.0, -4.0),
    ("2^3^2", 0.0, 512.0),
    ("-2^2", 0.0, -4.0),
    ("2^-1", 0.0, 0.5),
    ("(-2)^2", 0.0, 4.0),
    ("2*-t", 3.0, -6.0),
    ("1 - 2 - 3", 0.0, -4.0),
    ("8/4/2", 0.0, 1.0),
    ("sqrt(exp(2*t))", 1.0, math.e),
    ("sinh(t) + cosh(t)", 1.5, math.exp(1.5)),
    ("1.5e-1 + .5", 0.0, 0.65),
    ("sin(t)^2 + cos(t)^2", 0.7, 1.0),
])
def test_examples(source, t, expected):
    assert evaluate(parse(source), t) == pytest.approx(expected, rel=1e-15, abs=1e-15)


def test_constant_detection():
    assert parse("0.5*2").is_constant
    assert parse("0.5*2").constant_value == 1.0
    assert not parse("t").is_constant
    with pytest.raises(ValueError):
        parse("cos(t)").constant_value


def test_array_evaluation():
    t = np.linspace(0, 1, 5)
    assert np.allclose(parse("t^2 + 1")(t), t**2 + 1)
    assert np.allclose(parse("3")(t), 3.0)
    assert parse("3")(t).shape == t.shape


@pytest.mark.parametrize("source, offset", [
    ("", 0),
    ("1 +", 3),
    ("(1 + t", 6),
    ("1 + t)", 5),
    ("foo(t)", 0),
    ("x + 1", 0),
    ("1 $ 2", 2),
    ("sin t", 4),
    ("2 3", 2),
])
def test_parse_errors_carry_offsets(source, offset):
    with pytest.raises(ParseError) as info:
        parse(source)
    assert info.value.offset == offset


def test_offset_is_in_bytes():
    # the non-ascii character occupies two bytes
    with pytest.raises(ParseError) as info:
        parse("1 + é")
    assert info.value.offset == 4
    with pytest.raises(ParseError) as info:
        parse("é")
    assert info.value.offset == 0
    with pytest.raises(ParseError) as info:
        parse("(é) + ?")
    assert info.value.offset == 1


def test_division_by_zero_reports_time():
    f = parse("1/(t-2)")
    with pytest.raises(EvaluationError) as info:
        f(2.0)
    assert info.value.t == 2.0
    assert f(3.0) == 1.0


def test_constant_factory_and_coercion():
    assert CoefficientFn.constant(-1.5)(0.3) == -1.5
    assert as_coefficient(2)(7.0) == 2.0
    assert as_coefficient("t")(7.0) == 7.0
    f = parse("t")
    assert as_coefficient(f) is f
    with pytest.raises(TypeError):
        as_coefficient([1, 2])


def test_equality_is_structural():
    assert parse("1 + t") == parse("(1)+(t)")
    assert parse("1 + t") != parse("t + 1")


# -- properties -------------------------------------------------------------------------

numbers = st.floats(min_value=0, max_value=1e6, allow_nan=False, allow_infinity=False).map(Num)
leaves = st.one_of(numbers, st.just(Var()))


def _grow(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(st.sampled_from("+-*/^"), children, children).map(lambda a: BinOp(a[0], a[1], a[2])),
        st.tuples(st.sampled_from(sorted(FUNCTIONS)), children).map(lambda a: Call(a[0], a[1])),
    )


trees = st.recursive(leaves, _grow, max_leaves=25)


@given(trees)
def test_printed_tree_reparses_identically(tree):
    assert parse_tree(to_source(tree)) == tree
    assert parse_tree(to_source(parse_tree(to_source(tree)))) == tree


@given(trees, st.floats(min_value=-50, max_value=50, allow_nan=False))
def test_evaluation_never_crashes(tree, t):
    f = CoefficientFn(tree)
    try:
        out = f(t)
    except EvaluationError:
        return
    assert isinstance(out, float)
