"""Tests for the property-check oracle and the suite runner."""

import numpy as np
import pytest

from nablavar.errors import Degenerate, HViolated
from nablavar.oracle import (
    IDENTITY_CHECKS,
    check_fundamental_lemma,
    check_identity_suite,
    check_positivity,
    check_vanishing_lemmas,
    default_suite_scales,
    identities,
    identity_reports,
    run_suite,
)
from nablavar.oracle.identities import TOLERANCE
from nablavar.state import GridFunction, TimeScale
from nablavar.timescale import custom_scale, make_lattice


class TestPositivity:
    """Tests for check_positivity."""

    def test_whole_scale(self, integers: TimeScale) -> None:
        report = check_positivity(integers)
        assert report.name == "positivity"
        assert report.trials == 2**5 + 1
        assert report.passed

    def test_window(self, integers: TimeScale) -> None:
        assert check_positivity(integers, 1.0, 3.0).trials == 2**3 + 1

    def test_large_window_is_truncated(self) -> None:
        ts = make_lattice("integer_lattice", None, 0.0, 10.0)
        assert check_positivity(ts).trials == 2**8 + 1


class TestVanishingLemmas:
    """Tests for check_vanishing_lemmas."""

    def test_first_order(self, irregular: TimeScale) -> None:
        report = check_vanishing_lemmas(irregular, 1, 10)
        assert report.name == "vanishing_lemmas_r1"
        assert report.trials == 10
        assert report.passed

    def test_second_order(self, half_lattice: TimeScale) -> None:
        assert check_vanishing_lemmas(half_lattice, 2, 10).passed

    def test_too_few_points(self, integers: TimeScale) -> None:
        with pytest.raises(Degenerate):
            check_vanishing_lemmas(integers, 2, 1)

    def test_condition_h(self, irregular: TimeScale) -> None:
        with pytest.raises(HViolated):
            check_vanishing_lemmas(irregular, 2, 1)


class TestFundamentalLemma:
    """Tests for check_fundamental_lemma."""

    def test_first_order(self, irregular: TimeScale) -> None:
        report = check_fundamental_lemma(irregular, 1, 10)
        assert report.name == "fundamental_lemma_r1"
        assert report.passed, report.seeds

    def test_second_order_on_q_lattice(self, geometric: TimeScale) -> None:
        assert check_fundamental_lemma(geometric, 2, 10).passed

    def test_too_few_points(self) -> None:
        with pytest.raises(Degenerate):
            check_fundamental_lemma(custom_scale([0.0, 1.0, 2.0, 3.0]), 2, 1)


class TestIdentities:
    """Tests for the identity registry."""

    def test_every_identity_reports(self, geometric: TimeScale) -> None:
        reports = identity_reports(geometric, 5)
        assert [r.name for r in reports] == list(IDENTITY_CHECKS)
        assert all(r.passed for r in reports), [r.name for r in reports if not r.passed]

    def test_aggregate(self, half_lattice: TimeScale) -> None:
        report = check_identity_suite(half_lattice, 5)
        assert report.name == "identities"
        assert report.trials == 5
        assert report.passed

    def test_registered_failure_is_caught(self, integers: TimeScale, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setitem(IDENTITY_CHECKS, "broken", lambda ts, f, g, rng: (1.0, 1.0))
        report = check_identity_suite(integers, 3, seed=7)
        assert not report.passed
        assert report.failures == 3
        assert report.seeds == [7, 8, 9]

    def test_positivity_is_strict(self, integers: TimeScale, monkeypatch: pytest.MonkeyPatch) -> None:
        """A vanishing integral of a positive integrand fails, not just a negative one."""
        zeros = GridFunction.on(integers, np.zeros(5))
        rng = np.random.default_rng(0)
        assert identities.positivity(integers, zeros, zeros, rng) == (0.0, 5.0)
        monkeypatch.setattr(identities, "nabla_integral", lambda f, a, b: 0.0)
        defect, magnitude = identities.positivity(integers, zeros, zeros, rng)
        assert defect > TOLERANCE * magnitude
        assert defect == 4.0


class TestRunSuite:
    """Tests for run_suite."""

    def test_default_scales(self) -> None:
        assert [len(ts.points) for ts in default_suite_scales()] == [11, 11, 7]

    def test_names_and_pass(self) -> None:
        reports = run_suite(trials=3)
        names = [r.name for r in reports]
        assert len(reports) == 21
        assert names[:3] == [
            "integer_lattice[0,10]:point_classes",
            "integer_lattice[0,10]:identities",
            "integer_lattice[0,10]:positivity",
        ]
        assert "q_lattice(2)[1,64]:fundamental_lemma_r2" in names
        assert all(r.passed for r in reports), [r.name for r in reports if not r.passed]

    def test_skips_orders_without_h(self, irregular: TimeScale) -> None:
        names = [r.name.split(":")[1] for r in run_suite([irregular], trials=2)]
        assert names == [
            "point_classes",
            "identities",
            "positivity",
            "vanishing_lemmas_r1",
            "fundamental_lemma_r1",
        ]

    def test_deterministic(self, geometric: TimeScale) -> None:
        first = [r.model_dump() for r in run_suite([geometric], trials=3, seed=5)]
        second = [r.model_dump() for r in run_suite([geometric], trials=3, seed=5)]
        assert first == second
