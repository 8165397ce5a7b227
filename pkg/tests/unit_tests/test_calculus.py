"""Tests for nabla derivatives, rho-compositions and nabla integrals."""

import numpy as np
import pytest
from pydantic import ValidationError

from nablavar.calculus import (
    antiderivative,
    common_domain,
    compose_rho,
    from_callable,
    integration_by_parts_defect,
    linear_combination,
    mixed_operator,
    nabla_derivative,
    nabla_derivative_n,
    nabla_integral,
    product,
    restrict,
)
from nablavar.errors import DomainTooSmall, NotInDomain, NotInScale
from nablavar.state import GridFunction, TimeScale
from nablavar.timescale import h_coefficients


class TestGridFunction:
    """Tests for the GridFunction model and its constructors."""

    def test_on_and_accessors(self, integers: TimeScale) -> None:
        f = GridFunction.on(integers, [1.0, 2.0, 3.0], start=2)
        assert (f.start, f.stop, f.size) == (2, 4, 3)
        assert list(f.points) == [2.0, 3.0, 4.0]
        assert f.sup_norm() == 3.0

    def test_domain_beyond_scale_rejected(self, integers: TimeScale) -> None:
        with pytest.raises(ValidationError):
            GridFunction.on(integers, [0.0, 1.0], start=4)

    def test_non_finite_values_rejected(self, integers: TimeScale) -> None:
        with pytest.raises(ValidationError):
            GridFunction.on(integers, [0.0, np.nan, 1.0, 2.0, 3.0])

    def test_from_callable(self, half_lattice: TimeScale) -> None:
        f = from_callable(half_lattice, lambda t: t**2, start=1)
        assert f.start == 1
        assert f.values[0] == 0.25

    def test_restrict(self, integers: TimeScale) -> None:
        f = GridFunction.on(integers, [0.0, 1.0, 4.0, 9.0, 16.0])
        g = restrict(f, 1, 3)
        assert (g.start, g.values) == (1, (1.0, 4.0, 9.0))

    def test_restrict_outside(self, integers: TimeScale) -> None:
        f = GridFunction.on(integers, [1.0, 1.0, 1.0], start=1)
        with pytest.raises(NotInDomain):
            restrict(f, 0)

    def test_common_domain(self, integers: TimeScale) -> None:
        f = GridFunction.on(integers, [1.0] * 4)
        g = GridFunction.on(integers, [1.0] * 3, start=2)
        assert common_domain(f, g) == (2, 3)

    def test_product_and_combination(self, integers: TimeScale) -> None:
        f = GridFunction.on(integers, [1.0, 2.0, 3.0, 4.0, 5.0])
        g = GridFunction.on(integers, [2.0, 2.0, 2.0], start=2)
        assert product(f, g).values == (6.0, 8.0, 10.0)
        combined = linear_combination([1.0, -0.5], [f, g])
        assert combined.start == 2
        assert combined.values == (2.0, 3.0, 4.0)


class TestNablaDerivative:
    """Tests for nabla_derivative and its iterates."""

    def test_backward_difference_on_integers(self, integers: TimeScale) -> None:
        f = GridFunction.on(integers, [0.0, 1.0, 4.0, 9.0, 16.0])
        d = nabla_derivative(f)
        assert d.start == 1
        assert d.values == (1.0, 3.0, 5.0, 7.0)

    def test_q_lattice_quotient(self, geometric: TimeScale) -> None:
        # f(t) = t^2 has f^nabla(t) = t + rho(t) = (1 + 1/q) t
        f = from_callable(geometric, lambda t: t**2)
        d = nabla_derivative(f)
        np.testing.assert_allclose(d.array, 1.5 * geometric.array[1:])

    def test_linear_functions_have_constant_derivative(self, irregular: TimeScale) -> None:
        f = from_callable(irregular, lambda t: 3.0 * t - 1.0)
        np.testing.assert_allclose(nabla_derivative(f).array, 3.0)
        np.testing.assert_allclose(nabla_derivative_n(f, 2).array, 0.0, atol=1e-12)

    def test_iterate_drops_points(self, integers: TimeScale) -> None:
        f = from_callable(integers, lambda t: t**3)
        d3 = nabla_derivative_n(f, 3)
        assert d3.start == 3
        np.testing.assert_allclose(d3.array, 6.0)

    def test_zeroth_derivative_is_identity(self, integers: TimeScale) -> None:
        f = from_callable(integers, np.sin)
        assert nabla_derivative_n(f, 0) is f

    def test_too_few_points(self, integers: TimeScale) -> None:
        f = GridFunction.on(integers, [1.0], start=4)
        with pytest.raises(DomainTooSmall):
            nabla_derivative(f)
        g = GridFunction.on(integers, [1.0, 2.0, 3.0])
        with pytest.raises(DomainTooSmall):
            nabla_derivative_n(g, 3)


class TestComposition:
    """Tests for compose_rho and mixed_operator."""

    def test_compose_shifts_values(self, integers: TimeScale) -> None:
        f = GridFunction.on(integers, [10.0, 11.0, 12.0, 13.0, 14.0])
        g = compose_rho(f, 2)
        assert g.start == 2
        assert g.values == (10.0, 11.0, 12.0)

    def test_compose_too_far(self, integers: TimeScale) -> None:
        f = GridFunction.on(integers, [1.0, 2.0])
        with pytest.raises(DomainTooSmall):
            compose_rho(f, 2)

    def test_composition_first(self, geometric: TimeScale) -> None:
        f = from_callable(geometric, np.log)
        mixed = mixed_operator(f, 1, 1)
        expected = nabla_derivative(compose_rho(f, 1))
        assert (mixed.start, mixed.values) == (expected.start, expected.values)
        assert mixed.start == 2

    def test_exchange_factor_under_h(self, geometric: TimeScale) -> None:
        # f^{rho nabla} = a1 f^{nabla rho}
        a1 = h_coefficients(geometric, 2).a1
        f = from_callable(geometric, lambda t: np.sqrt(t) + t**2)
        lhs = mixed_operator(f, 1, 1)
        rhs = compose_rho(nabla_derivative(f), 1)
        np.testing.assert_allclose(lhs.array, a1 * rhs.array, rtol=1e-12)

    def test_mixed_operator_domain_guard(self, integers: TimeScale) -> None:
        f = GridFunction.on(integers, [0.0, 1.0, 2.0])
        with pytest.raises(DomainTooSmall):
            mixed_operator(f, 2, 1)


class TestNablaIntegral:
    """Tests for nabla_integral and antiderivative."""

    def test_sum_over_half_open_interval(self, integers: TimeScale) -> None:
        f = GridFunction.on(integers, [100.0, 1.0, 2.0, 3.0, 4.0])
        # f(0) is never read
        assert nabla_integral(f, 0.0, 4.0) == 10.0
        assert nabla_integral(f, 1.0, 3.0) == 5.0

    def test_reversed_and_empty(self, integers: TimeScale) -> None:
        f = from_callable(integers, lambda t: t + 1.0)
        assert nabla_integral(f, 3.0, 1.0) == -nabla_integral(f, 1.0, 3.0)
        assert nabla_integral(f, 2.0, 2.0) == 0.0

    def test_graininess_weights(self, geometric: TimeScale) -> None:
        f = GridFunction.on(geometric, np.ones(7))
        assert nabla_integral(f, 1.0, 64.0) == 63.0

    def test_lower_limit_may_precede_domain(self, integers: TimeScale) -> None:
        f = GridFunction.on(integers, [1.0, 1.0, 1.0], start=2)
        assert nabla_integral(f, 1.0, 4.0) == 3.0
        with pytest.raises(NotInDomain):
            nabla_integral(f, 0.0, 4.0)

    def test_limit_not_in_scale(self, integers: TimeScale) -> None:
        f = from_callable(integers, np.cos)
        with pytest.raises(NotInScale):
            nabla_integral(f, 0.0, 3.5)

    def test_antiderivative_inverts_derivative(self, irregular: TimeScale) -> None:
        f = from_callable(irregular, lambda t: np.exp(-t))
        big_f = antiderivative(f, irregular.points[0])
        assert big_f.start == 0
        assert big_f.values[0] == 0.0
        np.testing.assert_allclose(nabla_derivative(big_f).array, f.array[1:], rtol=1e-12)

    def test_antiderivative_outside_domain(self, integers: TimeScale) -> None:
        f = GridFunction.on(integers, [1.0, 1.0], start=3)
        with pytest.raises(NotInDomain):
            antiderivative(f, 0.0)


class TestIntegrationByParts:
    """Tests for integration_by_parts_defect."""

    @pytest.mark.parametrize("variant", ["rho", "plain"])
    def test_identity_holds(self, irregular: TimeScale, variant) -> None:
        rng = np.random.default_rng(3)
        f = GridFunction.on(irregular, rng.uniform(-1.0, 1.0, 6))
        g = GridFunction.on(irregular, rng.uniform(-1.0, 1.0, 6))
        defect = integration_by_parts_defect(f, g, 0.0, 3.0, variant)
        assert abs(defect) < 1e-12

    def test_sub_interval(self, half_lattice: TimeScale) -> None:
        f = from_callable(half_lattice, np.sin)
        g = from_callable(half_lattice, lambda t: t**2)
        assert abs(integration_by_parts_defect(f, g, 0.5, 2.5, "rho")) < 1e-12

    def test_jump_sits_on_the_documented_factor(self, integers: TimeScale) -> None:
        """f = g = t on [0, 2]: [f g] = 4 and int f^nabla g = 3, so only f^rho balances."""
        f = from_callable(integers, lambda t: t)
        g = from_callable(integers, lambda t: t)
        f_nabla, g_nabla = nabla_derivative(f), nabla_derivative(g)

        assert nabla_integral(product(compose_rho(f, 1), g_nabla), 0.0, 2.0) == 1.0
        assert 4.0 - nabla_integral(product(f_nabla, g), 0.0, 2.0) == 1.0
        assert nabla_integral(product(f, g_nabla), 0.0, 2.0) == 3.0
        assert 4.0 - nabla_integral(product(f_nabla, compose_rho(g, 1)), 0.0, 2.0) == 3.0

        assert integration_by_parts_defect(f, g, 0.0, 2.0, "rho") == 0.0
        assert integration_by_parts_defect(f, g, 0.0, 2.0, "plain") == 0.0

    def test_unknown_variant(self, integers: TimeScale) -> None:
        f = from_callable(integers, np.cos)
        with pytest.raises(ValueError, match="unknown integration-by-parts variant"):
            integration_by_parts_defect(f, f, 0.0, 4.0, "7")  # type: ignore[arg-type]

    def test_interval_outside_domain(self, integers: TimeScale) -> None:
        f = GridFunction.on(integers, [1.0, 2.0, 3.0], start=2)
        g = from_callable(integers, np.cos)
        with pytest.raises(NotInDomain):
            integration_by_parts_defect(f, g, 0.0, 4.0, "plain")
