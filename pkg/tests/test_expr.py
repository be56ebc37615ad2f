"""Parser, evaluator, and symbolic-derivative tests."""

import math

import hypothesis.strategies as st
import pytest
from hypothesis import given

from mvtlab.expr import (
    Bin, Call, Const, FUNCTIONS, Neg, ParseError, Var,
    compile_fn, differentiate, evaluate, parse, sign_sensitive_args,
    simplify, substitute, unparse,
)


def ev(src, x):
    return evaluate(parse(src), x)


class TestParsing:
    def test_number_formats(self):
        assert ev("2", 0) == 2.0
        assert ev("2.5", 0) == 2.5
        assert ev(".5", 0) == 0.5
        assert ev("3.", 0) == 3.0
        assert ev("1e3", 0) == 1000.0
        assert ev("2.5e-2", 0) == 0.025
        assert ev("1E+2", 0) == 100.0

    def test_precedence(self):
        assert ev("2+3*4", 0) == 14.0
        assert ev("2*3^2", 0) == 18.0
        assert ev("(2+3)*4", 0) == 20.0
        assert ev("1-2-3", 0) == -4.0
        assert ev("8/4/2", 0) == 1.0

    def test_power_right_associative(self):
        assert ev("2^3^2", 0) == 512.0

    def test_unary_minus_binds_tighter_than_power(self):
        # documented grammar choice: -x^2 is (-x)^2
        assert ev("-x^2", 3.0) == 9.0
        assert ev("-(x^2)", 3.0) == -9.0
        assert ev("3-x^2", 3.0) == -6.0

    def test_double_negation(self):
        assert ev("--x", 4.0) == 4.0

    def test_constants(self):
        assert ev("pi", 0) == math.pi
        assert ev("e", 0) == math.e
        assert ev("2*pi", 0) == 2 * math.pi

    def test_functions(self):
        assert ev("sin(0)", 0) == 0.0
        assert ev("cos(0)", 0) == 1.0
        assert ev("exp(1)", 0) == math.e
        assert ev("ln(e)", 0) == pytest.approx(1.0)
        assert ev("sqrt(9)", 0) == 3.0
        assert ev("abs(-3)", 0) == 3.0
        assert ev("sgn(-7)", 0) == -1.0
        assert ev("atan(1)", 0) == pytest.approx(math.pi / 4)

    def test_nested_calls(self):
        assert ev("sin(cos(0))", 0) == pytest.approx(math.sin(1.0))

    def test_whitespace(self):
        assert ev("  1 +  2 * x ", 3.0) == 7.0

    def test_variable(self):
        assert parse("x") == Var()

    def test_no_implicit_multiplication(self):
        with pytest.raises(ParseError):
            parse("2x")

    def test_error_offset_double_caret(self):
        with pytest.raises(ParseError) as ei:
            parse("x^^2")
        assert ei.value.offset == 2

    def test_error_unclosed_paren(self):
        with pytest.raises(ParseError) as ei:
            parse("(x+1")
        assert ei.value.expected == "')'"

    def test_error_function_without_argument(self):
        with pytest.raises(ParseError, match="needs an argument"):
            parse("sin")

    def test_error_unknown_name(self):
        with pytest.raises(ParseError, match="unknown name"):
            parse("foo(x)")

    def test_error_empty_input(self):
        with pytest.raises(ParseError) as ei:
            parse("")
        assert ei.value.offset == 0

    def test_error_trailing_input(self):
        with pytest.raises(ParseError, match="trailing"):
            parse("x 2")


class TestEvaluation:
    def test_division_by_zero_signed(self):
        assert ev("1/x", 0.0) == math.inf
        assert ev("-1/x", 0.0) == -math.inf

    def test_zero_over_zero_is_nan(self):
        assert math.isnan(ev("x/x", 0.0))

    def test_sqrt_of_negative_is_nan(self):
        assert math.isnan(ev("sqrt(x)", -1.0))

    def test_ln_domain(self):
        assert ev("ln(x)", 0.0) == -math.inf
        assert math.isnan(ev("ln(x)", -1.0))

    def test_negative_base_fractional_power_is_nan(self):
        assert math.isnan(ev("x^0.5", -2.0))
        assert ev("x^2", -2.0) == 4.0

    def test_zero_to_negative_power(self):
        assert ev("x^(0-1)", 0.0) == math.inf

    def test_nan_absorbs(self):
        assert math.isnan(ev("sqrt(x)+1", -1.0))
        assert math.isnan(ev("1^sqrt(x)", -1.0))

    def test_asin_out_of_domain(self):
        assert math.isnan(ev("asin(x)", 1.5))

    def test_overflow_to_infinity(self):
        assert ev("exp(x)", 1e6) == math.inf

    def test_sgn_values(self):
        assert ev("sgn(x)", 2.0) == 1.0
        assert ev("sgn(x)", -2.0) == -1.0
        assert ev("sgn(x)", 0.0) == 0.0


# strategies shaped like what the parser itself can produce: constants are
# nonnegative, negation is explicit
_const = st.builds(Const, st.floats(0.0, 8.0, allow_nan=False).map(abs))
_leaf = st.one_of(_const, st.just(Var()))
_expr = st.recursive(
    _leaf,
    lambda sub: st.one_of(
        st.builds(Neg, sub),
        st.builds(Bin, st.sampled_from("+-*/^"), sub, sub),
        st.builds(Call, st.sampled_from(FUNCTIONS), sub),
    ),
    max_leaves=16,
)


@given(_expr)
def test_unparse_parse_round_trip(e):
    assert parse(unparse(e)) == e


@given(_expr, st.floats(-4.0, 4.0, allow_nan=False))
def test_compile_matches_evaluate(e, x):
    a = evaluate(e, x)
    b = compile_fn(e)(x)
    assert a == b or (math.isnan(a) and math.isnan(b))


@given(_expr, st.floats(-4.0, 4.0, allow_nan=False))
def test_simplify_preserves_value(e, x):
    a = evaluate(e, x)
    b = evaluate(simplify(e), x)
    if math.isnan(a):
        return  # simplification may enlarge the domain, never shrink it
    if math.isinf(a):
        assert b == a or math.isnan(b) is False
        return
    assert b == pytest.approx(a, rel=1e-12, abs=1e-12)


class TestDifferentiation:
    def test_polynomial(self):
        d = differentiate(parse("x^3+2*x-1"))
        for x in (-2.0, -0.5, 0.0, 1.0, 3.0):
            assert evaluate(d, x) == pytest.approx(3 * x * x + 2)

    def test_second_order(self):
        d2 = differentiate(parse("x^4"), 2)
        assert evaluate(d2, 2.0) == pytest.approx(48.0)

    @pytest.mark.parametrize("src,deriv", [
        ("sin(x)", math.cos),
        ("cos(x)", lambda x: -math.sin(x)),
        ("exp(x)", math.exp),
        ("tan(x)", lambda x: 1 / math.cos(x) ** 2),
        ("atan(x)", lambda x: 1 / (1 + x * x)),
        ("asin(x)", lambda x: 1 / math.sqrt(1 - x * x)),
        ("acos(x)", lambda x: -1 / math.sqrt(1 - x * x)),
        ("ln(x)", lambda x: 1 / x),
        ("sqrt(x)", lambda x: 0.5 / math.sqrt(x)),
    ])
    def test_function_rules(self, src, deriv):
        d = differentiate(parse(src))
        for x in (0.2, 0.5, 0.9):
            assert evaluate(d, x) == pytest.approx(deriv(x), rel=1e-12)

    def test_quotient_rule(self):
        d = differentiate(parse("x/(1+x^2)"))
        x = 0.7
        want = (1 + x * x - x * 2 * x) / (1 + x * x) ** 2
        assert evaluate(d, x) == pytest.approx(want, rel=1e-12)

    def test_general_power_rule(self):
        d = differentiate(parse("x^x"))
        x = 1.3
        want = x ** x * (math.log(x) + 1)
        assert evaluate(d, x) == pytest.approx(want, rel=1e-12)

    def test_constant_base_power(self):
        d = differentiate(parse("2^x"))
        assert evaluate(d, 3.0) == pytest.approx(8.0 * math.log(2), rel=1e-12)

    def test_abs_derivative_is_sign(self):
        d = differentiate(parse("abs(x)"))
        assert evaluate(d, 2.0) == 1.0
        assert evaluate(d, -2.0) == -1.0

    def test_order_validation(self):
        with pytest.raises(ValueError):
            differentiate(parse("x"), 0)
        with pytest.raises(ValueError):
            differentiate(parse("x"), 1.5)


class TestSimplify:
    def test_constant_folding(self):
        assert simplify(parse("2+3*4")) == Const(14.0)

    def test_identity_elimination(self):
        assert simplify(Bin("*", Const(1.0), Var())) == Var()
        assert simplify(Bin("+", Const(0.0), Var())) == Var()
        assert simplify(Bin("^", Var(), Const(1.0))) == Var()

    def test_self_difference(self):
        assert simplify(Bin("-", Var(), Var())) == Const(0.0)

    def test_never_folds_to_nonfinite(self):
        e = simplify(parse("1/0"))
        assert not isinstance(e, Const)


class TestStructure:
    def test_substitute(self):
        e = substitute(parse("x^2+x"), parse("x+1"))
        assert evaluate(e, 2.0) == 12.0

    def test_sign_sensitive_args(self):
        args = sign_sensitive_args(parse("abs(x)*sgn(x-1)+sin(x)"))
        assert parse("x") in args
        assert parse("x-1") in args
        assert len(args) == 2

    def test_operator_overloading(self):
        e = (Var() + 1) * 2 - Var() ** 2
        assert evaluate(e, 3.0) == -1.0

    def test_str_is_parseable(self):
        e = parse("sin(x)^2/(1+x)")
        assert parse(str(e)) == e
