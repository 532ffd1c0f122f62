"""Core signed-measure container: evaluation, Jordan split, round trips."""

import json

import numpy as np
import pytest

from signed_measures import (
    Atom,
    BorelSet,
    Interval,
    MarkedPointPattern,
    SignedAtomicMeasure,
    StepDensity,
    evaluate,
    from_marked_point_pattern,
    jordan_decompose,
    linear_combine,
    to_marked_point_pattern,
    total_variation,
)
from signed_measures.errors import DuplicateLocation, NonAtomicInput

from conftest import random_atomic, set_grid

TWO_ATOMS = SignedAtomicMeasure([Atom(0.5, 2.0), Atom(0.7, -3.0)])
UNIT = BorelSet.interval(0.0, 1.0)


class TestEvaluate:
    def test_two_atoms_full_interval(self):
        assert evaluate(TWO_ATOMS, UNIT) == -1.0

    def test_empty_set_is_zero(self):
        assert evaluate(TWO_ATOMS, BorelSet.empty()) == 0.0

    def test_diffuse_constant_density(self):
        mu = SignedAtomicMeasure(diffuse=StepDensity.constant(1.0, 0.0, 1.0))
        assert evaluate(mu, BorelSet.interval(0.0, 0.5)) == pytest.approx(0.5)

    def test_half_open_boundary(self):
        # [0, 0.5) excludes the atom sitting exactly at 0.5
        assert evaluate(TWO_ATOMS, BorelSet.interval(0.0, 0.5)) == 0.0
        assert evaluate(TWO_ATOMS, BorelSet.interval(0.5, 0.7)) == 2.0

    def test_additivity_over_disjoint_union(self):
        g = np.random.default_rng(3)
        for _ in range(20):
            mu = random_atomic(g, with_diffuse=True)
            left = evaluate(mu, BorelSet.interval(0.0, 0.4))
            right = evaluate(mu, BorelSet.interval(0.4, 1.0))
            both = evaluate(mu, BorelSet([(0.0, 0.4), (0.4, 1.0)]))
            assert both == pytest.approx(left + right, abs=1e-12)


class TestJordan:
    def test_two_atoms(self):
        pos, neg = jordan_decompose(TWO_ATOMS)
        assert pos == SignedAtomicMeasure([Atom(0.5, 2.0)])
        assert neg == SignedAtomicMeasure([Atom(0.7, 3.0)])

    def test_zero(self):
        pos, neg = jordan_decompose(SignedAtomicMeasure.zero())
        assert pos.is_zero() and neg.is_zero()

    def test_reconstruction_on_grid(self):
        # evaluation oracle: mu(B) == pos(B) - neg(B) over the whole grid
        g = np.random.default_rng(11)
        grid = set_grid(50)
        for _ in range(100):
            mu = random_atomic(g, with_diffuse=True)
            pos, neg = jordan_decompose(mu)
            for B in grid:
                assert evaluate(mu, B) == pytest.approx(
                    evaluate(pos, B) - evaluate(neg, B), abs=1e-12
                )

    def test_parts_are_nonnegative(self):
        g = np.random.default_rng(12)
        for _ in range(30):
            pos, neg = jordan_decompose(random_atomic(g, with_diffuse=True))
            for part in (pos, neg):
                assert all(a.weight > 0 for a in part.atoms)
                assert all(l >= 0 for l in part.diffuse.levels)


class TestTotalVariation:
    def test_two_atoms(self):
        assert total_variation(TWO_ATOMS, UNIT) == 5.0

    def test_zero(self):
        assert total_variation(SignedAtomicMeasure.zero(), UNIT) == 0.0

    def test_dominates_evaluation(self):
        g = np.random.default_rng(4)
        grid = set_grid(50)
        for _ in range(20):
            mu = random_atomic(g, with_diffuse=True)
            for B in grid:
                assert total_variation(mu, B) >= abs(evaluate(mu, B)) - 1e-12


class TestMarkedPointPattern:
    def test_direct_encoding(self):
        pattern = to_marked_point_pattern(TWO_ATOMS)
        assert set(pattern.points) == {(0.5, 2.0), (0.7, -3.0)}

    def test_empty(self):
        assert to_marked_point_pattern(SignedAtomicMeasure.zero()).points == ()

    def test_round_trip_identity(self):
        g = np.random.default_rng(9)
        for _ in range(1000):
            mu = random_atomic(g)
            assert from_marked_point_pattern(to_marked_point_pattern(mu)) == mu

    def test_diffuse_part_rejected(self):
        mu = SignedAtomicMeasure(diffuse=StepDensity.constant(1.0))
        with pytest.raises(NonAtomicInput):
            to_marked_point_pattern(mu)

    def test_duplicate_location_rejected(self):
        with pytest.raises(DuplicateLocation):
            from_marked_point_pattern(MarkedPointPattern(((0.3, 1.0), (0.3, 2.0))))


class TestLinearCombine:
    def test_cancellation(self):
        assert linear_combine(1.0, TWO_ATOMS, -1.0, TWO_ATOMS).is_zero()

    def test_both_zero_coefficients(self):
        assert linear_combine(0.0, TWO_ATOMS, 0.0, TWO_ATOMS).is_zero()

    def test_evaluation_linearity(self):
        g = np.random.default_rng(5)
        grid = set_grid(50)
        for _ in range(20):
            mu = random_atomic(g, with_diffuse=True)
            nu = random_atomic(g, with_diffuse=True)
            a, b = float(g.normal()), float(g.normal())
            combo = linear_combine(a, mu, b, nu)
            for B in grid:
                assert evaluate(combo, B) == pytest.approx(
                    a * evaluate(mu, B) + b * evaluate(nu, B), abs=1e-10
                )


class TestSerialization:
    def test_json_round_trip(self):
        g = np.random.default_rng(6)
        for _ in range(50):
            mu = random_atomic(g, with_diffuse=bool(g.integers(0, 2)))
            again = SignedAtomicMeasure.from_json(json.loads(mu.to_json_str()))
            assert again == mu

    def test_borel_set_round_trip(self):
        for B in set_grid(20):
            assert BorelSet.from_json(B.to_json()) == B

    def test_zero_weight_atoms_dropped(self):
        mu = SignedAtomicMeasure([Atom(0.2, 1.0)])
        assert len(linear_combine(0.0, mu, 1.0, SignedAtomicMeasure.zero()).atoms) == 0

    def test_interval_validation(self):
        with pytest.raises(ValueError):
            Interval(1.0, 0.5)
