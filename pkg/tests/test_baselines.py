import numpy as np
import pytest

from qsopt import (
    SubsetBits,
    double_greedy,
    exact_opt,
    make_random_qsb,
    make_tabular,
    random_permutation_greedy,
    randomized_bidirectional_greedy,
    randomized_local_search,
    u_prefix,
)
from qsopt.sets import IntervalLattice

from conftest import nonneg_submodular_oracle


class TestDoubleGreedy:
    def test_reference_table_hand_trace(self, prop_oracle):
        result = double_greedy(prop_oracle, [1, 2])
        assert result.set == SubsetBits.from_members(2, [2])
        assert result.value == 1.5

    def test_twin_peaks_keeps_first_element(self, twin_peaks_oracle):
        result = double_greedy(twin_peaks_oracle, [1, 2])
        assert result.set == SubsetBits.from_members(2, [1])
        assert result.value == 1.5

    def test_all_positive_modular_returns_everything(self):
        weights = [1.0, 2.0, 0.5, 3.0]
        table = [sum(w for k, w in enumerate(weights, 1) if m >> (k - 1) & 1) for m in range(16)]
        result = double_greedy(make_tabular(table), [3, 1, 4, 2])
        assert result.set == SubsetBits.full(4)

    def test_invalid_permutation(self, prop_oracle):
        with pytest.raises(ValueError):
            double_greedy(prop_oracle, [1, 1])
        with pytest.raises(ValueError):
            double_greedy(prop_oracle, [1])

    def test_randomized_tie_rule_adds(self):
        table = np.zeros(8)  # every marginal is 0, so a = b = 0 at each step
        result = double_greedy(make_tabular(table), [1, 2, 3], randomized=True, seed=5)
        assert result.set == SubsetBits.full(3)

    def test_randomized_reference_table_is_deterministic(self, prop_oracle):
        # the clipped gains are 0/positive at every step, no real coin flips
        for seed in range(5):
            result = double_greedy(prop_oracle, [1, 2], randomized=True, seed=seed)
            assert result.set == SubsetBits.from_members(2, [2])
            assert result.value == 1.5


class TestRandomPermutationGreedy:
    def test_single_trial_equals_seeded_order(self, prop_oracle):
        from qsopt.baselines import _trial_rng

        order = [int(v) for v in _trial_rng(9, 0).permutation(2) + 1]
        assert random_permutation_greedy(prop_oracle, 1, 9).value == double_greedy(prop_oracle, order).value

    def test_reference_table_any_trials(self, prop_oracle):
        for trials in (1, 2, 5):
            assert random_permutation_greedy(prop_oracle, trials, 3).set == SubsetBits.from_members(2, [2])

    def test_value_nondecreasing_in_trials(self):
        F = make_random_qsb(8, 31)
        values = [random_permutation_greedy(F, t, 12).value for t in (1, 2, 4, 8)]
        assert values == sorted(values)

    def test_reproducible(self):
        F = make_random_qsb(9, 17)
        a = random_permutation_greedy(F, 6, 42)
        b = random_permutation_greedy(F, 6, 42)
        assert a.set == b.set and a.value == b.value


class TestRandomizedLocalSearch:
    def test_twin_peaks_from_any_start(self, twin_peaks_oracle):
        for seed in range(6):
            assert randomized_local_search(twin_peaks_oracle, 1, seed).value == 1.5

    def test_start_at_local_max_unchanged(self, twin_peaks_oracle):
        # restarts that land on {1} or {2} stay there; value is the peak either way
        result = randomized_local_search(twin_peaks_oracle, 3, 0)
        assert result.set in (SubsetBits.from_members(2, [1]), SubsetBits.from_members(2, [2]))

    def test_reference_table(self, prop_oracle):
        assert randomized_local_search(prop_oracle, 4, 1).set == SubsetBits.from_members(2, [2])

    def test_reaches_a_local_maximum(self):
        from qsopt import is_local_max

        F = make_random_qsb(8, 77)
        result = randomized_local_search(F, 1, 3)
        assert is_local_max(F, result.set)


class TestRandomizedBidirectionalGreedy:
    def test_reference_table_certain(self, prop_oracle):
        for seed in range(5):
            result = randomized_bidirectional_greedy(prop_oracle, 1, seed)
            assert result.set == SubsetBits.from_members(2, [2])

    def test_reproducible(self):
        F = make_random_qsb(9, 23)
        a = randomized_bidirectional_greedy(F, 5, 8)
        b = randomized_bidirectional_greedy(F, 5, 8)
        assert a.set == b.set and a.value == b.value

    def test_mean_ratio_on_nonnegative_submodular(self):
        ratios = []
        for seed in range(60):
            n = 8 + seed % 4
            F = nonneg_submodular_oracle(n, seed)
            exact, _ = exact_opt(F, "max", IntervalLattice(SubsetBits.empty(n), SubsetBits.full(n)))
            if exact <= 0:
                continue
            ratios.append(randomized_bidirectional_greedy(F, 1, seed).value / exact)
        assert np.mean(ratios) >= 0.33


class TestInvariants:
    @pytest.mark.parametrize("seed", range(6))
    def test_double_greedy_processes_each_element_once(self, seed):
        F = make_random_qsb(7, seed + 3000)
        order = [int(v) for v in np.random.default_rng(seed).permutation(7) + 1]
        result = double_greedy(F, order)
        assert result.value == F.value(result.set)

    def test_point_lattice_prefilter_passthrough(self, prop_oracle):
        for runner in (
            lambda sub: random_permutation_greedy(sub, 3, 1),
            lambda sub: randomized_local_search(sub, 3, 1),
            lambda sub: randomized_bidirectional_greedy(sub, 3, 1),
        ):
            result = u_prefix(prop_oracle, runner)
            assert result.value == 1.5
            assert result.set == SubsetBits.from_members(2, [2])
