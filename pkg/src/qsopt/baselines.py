"""Maximization baselines: bi-directional (double) greedy and local search.

All randomized variants derive per-trial generators from the master seed via
``SeedSequence(seed, spawn_key=(trial,))``, so results are reproducible and
trials could run independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .oracle import CountingOracle
from .sets import SubsetBits


@dataclass(frozen=True)
class BaselineResult:
    set: SubsetBits
    value: float
    oracle_calls: int
    seed: Optional[int] = None


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def double_greedy(
    oracle,
    order: Sequence[int],
    randomized: bool = False,
    seed: Optional[int] = None,
) -> BaselineResult:
    """One pass over ``order`` maintaining an inner set S1 and an outer set S2.

    Each element is judged by its gain when added to S1 (a) and the gain when
    removed from S2 (b = -drop). Deterministic mode keeps the element when
    a + b >= 0 (ties keep). Randomized mode clips both gains at zero and keeps
    with probability a / (a + b), keeping outright when both are zero.
    """
    counter = CountingOracle(oracle)
    n = counter.n
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError("order must be a permutation of 1..n")
    rng = _trial_rng(seed if seed is not None else 0, 0) if randomized else None
    s1 = SubsetBits.empty(n)
    s2 = SubsetBits.full(n)
    c1 = counter.cursor(s1)
    c2 = counter.cursor(s2)
    for i in order:
        gain_add = c1.add_marginal(i)
        gain_remove = -c2.drop_marginal(i)
        if randomized:
            a = max(gain_add, 0.0)
            b = max(gain_remove, 0.0)
            keep = True if a + b == 0.0 else rng.random() < a / (a + b)
        else:
            keep = gain_add - gain_remove >= 0.0
        if keep:
            s1 = s1.add(i)
            c1.add(i)
        else:
            s2 = s2.remove(i)
            c2.remove(i)
    assert s1 == s2, "double greedy must close the gap after one pass"
    value = counter.value(s1)
    return BaselineResult(s1, value, counter.total_calls, seed)


def random_permutation_greedy(oracle, trials: int, seed: int) -> BaselineResult:
    """Best of ``trials`` deterministic double-greedy passes over random orders."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = oracle.n
    best: Optional[BaselineResult] = None
    calls = 0
    for trial in range(trials):
        order = [int(v) for v in _trial_rng(seed, trial).permutation(n) + 1]
        result = double_greedy(oracle, order)
        calls += result.oracle_calls
        if best is None or result.value > best.value:
            best = result
    return BaselineResult(best.set, best.value, calls, seed)


def randomized_local_search(oracle, restarts: int, seed: int) -> BaselineResult:
    """Steepest-ascent single-flip search from random starts; best over restarts.

    Each step applies the best strictly improving flip (lowest element id on
    ties); a set with no improving flip is a local maximum and ends the climb.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    counter = CountingOracle(oracle)
    n = counter.n
    best_set: Optional[SubsetBits] = None
    best_value = -np.inf
    for restart in range(restarts):
        rng = _trial_rng(seed, restart)
        current = SubsetBits.from_bool_array(rng.random(n) < 0.5)
        cursor = counter.cursor(current)
        while True:
            best_flip = None
            best_gain = 0.0
            for i in range(1, n + 1):
                gain = -cursor.drop_marginal(i) if current.contains(i) else cursor.add_marginal(i)
                if gain > best_gain:
                    best_gain = gain
                    best_flip = i
            if best_flip is None:
                break
            if current.contains(best_flip):
                current = current.remove(best_flip)
                cursor.remove(best_flip)
            else:
                current = current.add(best_flip)
                cursor.add(best_flip)
        value = counter.value(current)
        if value > best_value:
            best_value = value
            best_set = current
    return BaselineResult(best_set, float(best_value), counter.total_calls, seed)


def randomized_bidirectional_greedy(oracle, trials: int, seed: int) -> BaselineResult:
    """Best of ``trials`` randomized double-greedy passes in natural order."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = oracle.n
    order = list(range(1, n + 1))
    best: Optional[BaselineResult] = None
    calls = 0
    for trial in range(trials):
        sub_seed = int(_trial_rng(seed, trial).integers(0, 2**63 - 1))
        result = double_greedy(oracle, order, randomized=True, seed=sub_seed)
        calls += result.oracle_calls
        if best is None or result.value > best.value:
            best = result
    return BaselineResult(best.set, best.value, calls, seed)
