"""Tests for evaluation and symbolic partial derivatives of expressions."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nablavar.errors import EvalError
from nablavar.expr import evaluate, lagrangian_from_expression, parse, partial, partials_defect, to_source


class TestEvaluate:
    """Tests for evaluate."""

    def test_scalar_result_is_float(self) -> None:
        value = evaluate(parse("t + u0*u1", 1), 2.0, [3.0, 4.0])
        assert isinstance(value, float)
        assert value == 14.0

    def test_vectorized(self) -> None:
        e = parse("t*u0 + u1", 1)
        out = evaluate(e, np.array([1.0, 2.0]), [np.array([3.0, 4.0]), np.array([5.0, 6.0])])
        np.testing.assert_array_equal(out, [8.0, 14.0])

    def test_sign_and_abs(self) -> None:
        assert evaluate(parse("sign(u0) + abs(u1)", 1), 0.0, [-2.0, -3.0]) == 2.0

    def test_negative_base_integer_power(self) -> None:
        assert evaluate(parse("u0^3", 1), 0.0, [-2.0, 0.0]) == -8.0

    @pytest.mark.parametrize(
        "source",
        ["log(u0)", "sqrt(u0)", "1/u1", "u1^-1", "u0^0.5", "exp(1000 + 1000*t)"],
    )
    def test_domain_errors(self, source: str) -> None:
        with pytest.raises(EvalError):
            evaluate(parse(source, 1), 1.0, [-1.0, 0.0])

    def test_missing_argument(self) -> None:
        with pytest.raises(EvalError):
            evaluate(parse("u1", 1), 0.0, [1.0])


class TestPartial:
    """Tests for partial."""

    @pytest.mark.parametrize(
        ("source", "i", "expected"),
        [
            ("u1^2", 1, "2.0*u1"),
            ("u1^2", 0, "0.0"),
            ("u0^3", 0, "3.0*u0^2.0"),
            ("sin(u0)*u1", 0, "cos(u0)*u1"),
            ("cos(u0)", 0, "-sin(u0)"),
            ("exp(2*u0)", 0, "2.0*exp(2.0*u0)"),
            ("log(u1)", 1, "1.0/u1"),
            ("sqrt(u0)", 0, "1.0/(2.0*sqrt(u0))"),
            ("abs(u1)", 1, "sign(u1)"),
            ("sign(u0)", 0, "0.0"),
            ("u0/u1", 1, "-u0/u1^2.0"),
            ("u0^u1", 1, "u0^u1*log(u0)"),
            ("t*u0", 1, "0.0"),
        ],
    )
    def test_simplified_trees(self, source: str, i: int, expected: str) -> None:
        assert to_source(partial(parse(source, 1), i)) == expected

    def test_abs_derivative_at_zero(self) -> None:
        d = partial(parse("abs(u1)", 1), 1)
        assert evaluate(d, 0.0, [0.0, 0.0]) == 0.0

    def test_negative_index(self) -> None:
        with pytest.raises(ValueError):
            partial(parse("u0", 1), -1)

    @given(
        st.floats(min_value=-10.0, max_value=10.0),
        st.floats(min_value=-10.0, max_value=10.0),
        st.floats(min_value=-10.0, max_value=10.0),
    )
    def test_quadratic_form(self, c0: float, c1: float, c2: float) -> None:
        e = parse(f"{c0!r}*u0^2 + {c1!r}*u0*u1 + {c2!r}*t*u1", 1)
        u0, u1, t = 1.3, -0.7, 0.5
        d0 = evaluate(partial(e, 0), t, [u0, u1])
        d1 = evaluate(partial(e, 1), t, [u0, u1])
        assert d0 == pytest.approx(2.0 * c0 * u0 + c1 * u1, rel=1e-9, abs=1e-9)
        assert d1 == pytest.approx(c1 * u0 + c2 * t, rel=1e-9, abs=1e-9)


class TestPartialsAgainstDifferences:
    """Symbolic partials agree with central differences."""

    @pytest.mark.parametrize(
        "source",
        [
            "sin(u0)*u1^2 + exp(t*u0) + sqrt(1 + u1^2)",
            "u0^2*u1 - cos(t*u1) + u2^3",
            "abs(u1)*u0 + log(1 + u0^2)",
            "u1/(2 + sin(u0))",
        ],
    )
    def test_defect_is_small(self, source: str) -> None:
        assert partials_defect(lagrangian_from_expression(source, 2), samples=50) < 1e-6
