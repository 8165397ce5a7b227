"""Tests for Lagrangian construction from expressions and callables."""

import numpy as np
import pytest

from nablavar.expr import lagrangian_from_callable, lagrangian_from_expression, partials_defect


class TestExpressionLagrangian:
    """Tests for lagrangian_from_expression."""

    def test_value_and_partials(self) -> None:
        lagrangian = lagrangian_from_expression("u1^2 + u0^2", 1)
        assert lagrangian.symbolic
        assert lagrangian.order == 1
        assert lagrangian(0.0, [1.0, 2.0]) == 5.0
        assert lagrangian.partial(0, 0.0, [1.0, 2.0]) == 2.0
        assert lagrangian.partial(1, 0.0, [1.0, 2.0]) == 4.0

    def test_vectorized_partials(self) -> None:
        lagrangian = lagrangian_from_expression("t*u2^2", 2)
        t = np.array([1.0, 2.0, 3.0])
        u = [np.zeros(3), np.zeros(3), np.array([1.0, 1.0, 2.0])]
        np.testing.assert_array_equal(lagrangian.partial(2, t, u), [2.0, 4.0, 12.0])

    def test_source(self) -> None:
        assert lagrangian_from_expression("u1^2 + u0", 1).source() == "u1^2.0 + u0"

    def test_negated(self) -> None:
        lagrangian = lagrangian_from_expression("u1^2 + u0^2", 1).negated()
        assert lagrangian.symbolic
        assert lagrangian.source() == "-(u1^2.0 + u0^2.0)"
        assert lagrangian(0.0, [1.0, 2.0]) == -5.0
        assert lagrangian.partial(1, 0.0, [1.0, 2.0]) == -4.0


class TestCallableLagrangian:
    """Tests for lagrangian_from_callable."""

    @staticmethod
    def _cubic(t, u):
        return u[0] ** 2 * u[1]

    def test_finite_difference_partials(self) -> None:
        lagrangian = lagrangian_from_callable(self._cubic, 1)
        assert not lagrangian.symbolic
        assert lagrangian.source() == "<callable>"
        assert float(lagrangian.partial(0, 0.0, [1.5, 2.0])) == pytest.approx(6.0, abs=1e-6)
        assert float(lagrangian.partial(1, 0.0, [1.5, 2.0])) == pytest.approx(2.25, abs=1e-6)

    def test_negated(self) -> None:
        lagrangian = lagrangian_from_callable(self._cubic, 1).negated()
        assert lagrangian(0.0, [1.5, 2.0]) == -4.5
        assert float(lagrangian.partial(1, 0.0, [1.5, 2.0])) == pytest.approx(-2.25, abs=1e-6)

    def test_order_must_be_positive(self) -> None:
        with pytest.raises(ValueError):
            lagrangian_from_callable(self._cubic, 0)

    def test_defect_against_itself_is_zero(self) -> None:
        assert partials_defect(lagrangian_from_callable(self._cubic, 1)) == 0.0
