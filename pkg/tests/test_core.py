import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localbound.core import (AllUndefined, DimensionMismatch, EmptyProfile,
                             LocalEnergyProfile, NonPositiveTestVector,
                             OptimizerConfig, TestFamily, extrema,
                             optimize_lower, optimize_upper,
                             profile_from_operator, rayleigh_quotient)
from localbound.discrete import PeriodicPotential, local_energy_discrete

from conftest import random_symmetric


def harper_diagonal(n, m, v0):
    # hand evaluation of the cosine potential, independent of the library
    return [-v0 * math.cos(2 * math.pi * q * m / n) for q in range(n)]


class TestExtrema:
    def test_constant_profile(self):
        b = extrema(LocalEnergyProfile(range(3), [-2.0, -2.0, -2.0]))
        assert (b.lower, b.upper) == (-2.0, -2.0)
        assert b.argmin == 0 and b.argmax == 0
        assert b.rigorous

    def test_infinite_value_dominates(self):
        b = extrema(LocalEnergyProfile(range(3), [-0.5, -1.5, math.inf]))
        assert b.lower == -1.5
        assert b.upper == math.inf
        assert b.argmax == 2

    def test_harper_flat_test_vector(self):
        # V(q) - 2 for the three-site cosine potential: (-3, -3/2, -3/2)
        values = [v - 2.0 for v in harper_diagonal(3, 1, 1.0)]
        b = extrema(LocalEnergyProfile(range(3), values))
        assert b.lower == pytest.approx(-3.0, abs=1e-14)
        assert b.upper == pytest.approx(-1.5, abs=1e-14)

    def test_tie_breaks_to_first_site(self):
        b = extrema(LocalEnergyProfile("abcd", [1.0, 0.0, 0.0, 1.0]))
        assert b.argmin == "b"
        assert b.argmax == "a"

    def test_undefined_sites_skipped(self):
        b = extrema(LocalEnergyProfile(range(3), [math.nan, 2.0, 1.0]))
        assert (b.lower, b.upper) == (1.0, 2.0)

    def test_all_undefined_raises(self):
        with pytest.raises(AllUndefined):
            extrema(LocalEnergyProfile(range(2), [math.nan, math.nan]))

    def test_empty_profile_raises(self):
        with pytest.raises(EmptyProfile):
            LocalEnergyProfile([], [])

    def test_length_mismatch_raises(self):
        with pytest.raises(DimensionMismatch):
            LocalEnergyProfile(range(2), [1.0])


class TestProfileFromOperator:
    def test_marks_zero_sites_undefined(self):
        prof = profile_from_operator(lambda v: np.ones_like(v), [1.0, 0.0, 2.0])
        assert math.isnan(prof.values[1])
        assert prof.values[0] == 1.0 and prof.values[2] == 0.5

    def test_negative_real_part_rejected(self):
        with pytest.raises(NonPositiveTestVector):
            profile_from_operator(lambda v: v, [1.0, -1.0])


class TestRayleigh:
    def test_identity_operator(self):
        assert rayleigh_quotient(lambda v: v, [3.0, 1.0, 2.0], np.ones(3)) == 1.0

    def test_harper_flat_vector_is_profile_mean(self):
        potential = PeriodicPotential.harper(3, 1, 1.0)
        matrix = np.array([[potential.values[0], -1, -1],
                           [-1, potential.values[1], -1],
                           [-1, -1, potential.values[2]]])
        value = rayleigh_quotient(lambda v: matrix @ v, np.ones(3), np.ones(3))
        assert value == pytest.approx(-2.0, abs=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            rayleigh_quotient(lambda v: v, [1.0, 2.0], [1.0])

    def test_dominated_by_profile_supremum(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            matrix = random_symmetric(rng, 5)
            phi = rng.uniform(0.1, 5.0, size=5)
            quotient = rayleigh_quotient(lambda v: matrix @ v, phi, np.ones(5))
            profile = profile_from_operator(lambda v: matrix @ v, phi)
            assert extrema(profile).upper >= quotient - 1e-12


def _harper_family():
    potential = PeriodicPotential.harper(3, 1, 1.0)
    family = TestFamily(
        dimension_lambda=1,
        box=((0.1, 10.0),),
        evaluate=lambda lam: np.array([lam[0], 1.0, 1.0]))
    build = lambda phi: local_energy_discrete(potential, phi, 0.0)
    matrix = np.array([[potential.values[0], -1, -1],
                       [-1, potential.values[1], -1],
                       [-1, -1, potential.values[2]]])
    e0 = np.linalg.eigvalsh(matrix)[0]
    return family, build, e0


class TestOptimize:
    def test_single_lambda_family(self):
        potential = PeriodicPotential.harper(3, 1, 1.0)
        family = TestFamily(1, ((1.0, 1.0),),
                            lambda lam: np.array([lam[0], 1.0, 1.0]))
        build = lambda phi: local_energy_discrete(potential, phi, 0.0)
        fixed = extrema(build(np.ones(3)))
        lower = optimize_lower(family, build)
        upper = optimize_upper(family, build)
        assert lower.bound == fixed.lower
        assert upper.bound == fixed.upper

    def test_lower_harper_one_parameter(self):
        family, build, e0 = _harper_family()
        outcome = optimize_lower(family, build, OptimizerConfig(seed=1, restarts=2))
        assert outcome.bound >= -3.0
        assert outcome.bound <= e0 + 1e-12

    def test_upper_harper_one_parameter(self):
        family, build, e0 = _harper_family()
        outcome = optimize_upper(family, build, OptimizerConfig(seed=1, restarts=2))
        assert outcome.bound >= e0 - 1e-12

    def test_flat_vector_gives_exact_free_bound(self):
        # V = 0: profile of the flat vector is exactly -2 everywhere, and the
        # family midpoint hits it, so both optimized bounds are exactly -2
        potential = PeriodicPotential([0.0, 0.0, 0.0, 0.0])
        family = TestFamily(1, ((-1.0, 1.0),),
                            lambda lam: np.array([1.0 + lam[0] ** 2, 1.0, 1.0, 1.0]))
        build = lambda phi: local_energy_discrete(potential, phi, 0.0)
        assert optimize_lower(family, build).bound == -2.0
        assert optimize_upper(family, build).bound == -2.0

    def test_best_history_monotone(self):
        family, build, _ = _harper_family()
        lower = optimize_lower(family, build, OptimizerConfig(seed=3, restarts=3))
        assert all(b >= a for a, b in zip(lower.best_history, lower.best_history[1:]))
        upper = optimize_upper(family, build, OptimizerConfig(seed=3, restarts=3))
        assert all(b <= a for a, b in zip(upper.best_history, upper.best_history[1:]))

    def test_deterministic_given_seed(self):
        family, build, _ = _harper_family()
        config = OptimizerConfig(seed=11, restarts=4)
        first = optimize_lower(family, build, config)
        second = optimize_lower(family, build, config)
        assert first.bound == second.bound
        assert np.array_equal(first.lambda_star, second.lambda_star)

    def test_profile_errors_propagate(self):
        potential = PeriodicPotential([0.0] * 3)
        family = TestFamily(1, ((-1.0, 1.0),),
                            lambda lam: np.array([lam[0], 1.0, 1.0]))  # hits zero
        build = lambda phi: local_energy_discrete(potential, phi, 0.0)
        with pytest.raises(NonPositiveTestVector):
            optimize_lower(family, build)


class TestScaleInvariance:
    @given(st.integers(-6, 6), st.integers(0, 200))
    @settings(max_examples=60, deadline=None)
    def test_power_of_two_rescaling_is_bitwise_exact(self, exponent, seed):
        # scaling by 2^k commutes exactly with IEEE division
        rng = np.random.default_rng(seed)
        potential = PeriodicPotential(rng.uniform(-2, 2, size=5))
        phi = rng.uniform(0.1, 5.0, size=5)
        scale = 2.0 ** exponent
        base = local_energy_discrete(potential, phi)
        scaled = local_energy_discrete(potential, scale * phi)
        assert base.values == scaled.values

    @given(st.floats(1e-3, 1e3), st.integers(0, 200))
    @settings(max_examples=60, deadline=None)
    def test_general_rescaling_matches_to_roundoff(self, scale, seed):
        rng = np.random.default_rng(seed)
        potential = PeriodicPotential(rng.uniform(-2, 2, size=5))
        phi = rng.uniform(0.1, 5.0, size=5)
        base = np.array(local_energy_discrete(potential, phi).values)
        scaled = np.array(local_energy_discrete(potential, scale * phi).values)
        assert np.allclose(base, scaled, rtol=1e-13, atol=1e-13)


class TestConfigValidation:
    def test_bad_tolerance(self):
        with pytest.raises(ValueError):
            OptimizerConfig(tolerance=0.0)

    def test_bad_iterations(self):
        with pytest.raises(ValueError):
            OptimizerConfig(max_iterations=0)

    def test_bad_restarts(self):
        with pytest.raises(ValueError):
            OptimizerConfig(restarts=-1)

    def test_family_box_must_match_dimension(self):
        with pytest.raises(DimensionMismatch):
            TestFamily(2, ((0.0, 1.0),), lambda lam: lam)
